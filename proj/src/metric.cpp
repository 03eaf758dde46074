#include "otp/metric.hpp"

#include <cmath>
#include <sstream>

#include "otp/errors.hpp"

namespace otp {

std::string metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::line: return "line";
        case MetricKind::plane: return "plane";
        case MetricKind::matrix: return "matrix";
    }
    throw InternalError("unknown metric kind");
}

MetricKind metric_kind_from_name(const std::string& name) {
    if (name == "line") return MetricKind::line;
    if (name == "plane") return MetricKind::plane;
    if (name == "matrix") return MetricKind::matrix;
    throw ParseError("unknown metric kind '" + name + "'");
}

MetricSpace MetricSpace::make_line(std::vector<Num> xs) {
    MetricSpace s;
    s.kind = MetricKind::line;
    s.line = std::move(xs);
    return s;
}

MetricSpace MetricSpace::make_plane(std::vector<std::array<Num, 2>> pts) {
    MetricSpace s;
    s.kind = MetricKind::plane;
    s.plane = std::move(pts);
    return s;
}

MetricSpace MetricSpace::make_matrix(std::vector<std::vector<Num>> table) {
    for (const auto& row : table) {
        if (row.size() != table.size())
            throw DomainError("distance matrix is not square");
        for (const auto& v : row)
            if (!v.is_exact() && !std::isfinite(v.to_double()))
                throw DomainError("distance matrix has a non-finite entry");
    }
    MetricSpace s;
    s.kind = MetricKind::matrix;
    s.matrix = std::move(table);
    return s;
}

std::size_t MetricSpace::point_count() const {
    switch (kind) {
        case MetricKind::line: return line.size();
        case MetricKind::plane: return plane.size();
        case MetricKind::matrix: return matrix.size();
    }
    throw InternalError("unknown metric kind");
}

Num MetricSpace::distance(std::size_t a, std::size_t b) const {
    std::size_t n = point_count();
    if (a >= n || b >= n) throw DomainError("point id out of range");
    switch (kind) {
        case MetricKind::line:
            return (line[a] - line[b]).abs();
        case MetricKind::plane: {
            Num dx = plane[a][0] - plane[b][0];
            Num dy = plane[a][1] - plane[b][1];
            return sqrt_inexact(dx * dx + dy * dy);
        }
        case MetricKind::matrix:
            return matrix[a][b];
    }
    throw InternalError("unknown metric kind");
}

std::string MetricViolation::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::self_distance:
            os << "d(" << a << "," << a << ") = " << lhs << " != 0";
            break;
        case Kind::negativity:
            os << "d(" << a << "," << b << ") = " << lhs << " < 0";
            break;
        case Kind::symmetry:
            os << "d(" << a << "," << b << ") = " << lhs << " != d(" << b << ","
               << a << ") = " << rhs;
            break;
        case Kind::triangle:
            os << "d(" << a << "," << c << ") = " << lhs << " > d(" << a << ","
               << b << ") + d(" << b << "," << c << ") = " << rhs;
            break;
    }
    return os.str();
}

std::vector<MetricViolation> validate_metric(const MetricSpace& space,
                                             double rel_tol) {
    std::vector<MetricViolation> out;
    std::size_t n = space.point_count();
    Num zero;
    for (std::size_t a = 0; a < n; ++a) {
        Num daa = space.distance(a, a);
        if (!approx_eq(daa, zero, rel_tol))
            out.push_back({MetricViolation::Kind::self_distance, a, a, 0, daa, zero});
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            Num dab = space.distance(a, b);
            if (dab.sign() < 0 && !approx_eq(dab, zero, rel_tol)) {
                out.push_back({MetricViolation::Kind::negativity, a, b, 0, dab, zero});
            }
            if (a < b) {
                Num dba = space.distance(b, a);
                if (!approx_eq(dab, dba, rel_tol))
                    out.push_back({MetricViolation::Kind::symmetry, a, b, 0, dab, dba});
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                if (a == b || b == c || a == c) continue;
                Num direct = space.distance(a, c);
                Num via = space.distance(a, b) + space.distance(b, c);
                if (!approx_le(direct, via, rel_tol))
                    out.push_back({MetricViolation::Kind::triangle, a, b, c, direct, via});
            }
    return out;
}

}  // namespace otp
