#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "otp/num.hpp"

namespace otp {

enum class MetricKind { line, plane, matrix };

std::string metric_kind_name(MetricKind kind);
MetricKind metric_kind_from_name(const std::string& name);

// Finite point set with pairwise distances. Line and plane store
// coordinates and compute distances on demand; matrix stores the full
// table and hands back entries verbatim, whether or not they satisfy the
// metric axioms (validate_metric reports on that separately).
struct MetricSpace {
    MetricKind kind = MetricKind::line;
    std::vector<Num> line;                  // x per point
    std::vector<std::array<Num, 2>> plane;  // (x, y) per point
    std::vector<std::vector<Num>> matrix;   // full distance table

    static MetricSpace make_line(std::vector<Num> xs);
    static MetricSpace make_plane(std::vector<std::array<Num, 2>> pts);
    // Rejects non-square or non-finite tables; axiom violations are left
    // for validate_metric.
    static MetricSpace make_matrix(std::vector<std::vector<Num>> table);

    std::size_t point_count() const;
    Num distance(std::size_t a, std::size_t b) const;
};

struct MetricViolation {
    enum class Kind { self_distance, negativity, symmetry, triangle };
    Kind kind = Kind::self_distance;
    std::size_t a = 0, b = 0, c = 0;
    Num lhs, rhs;
    std::string describe() const;
};

// Exhaustive axiom check, cubic in the point count. Intended for the small
// spaces that carry hand-written distance tables. Exact values are compared
// exactly; anything inexact gets rel_tol slack.
std::vector<MetricViolation> validate_metric(const MetricSpace& space,
                                             double rel_tol = kRelTol);

}  // namespace otp
