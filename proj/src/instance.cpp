#include "otp/instance.hpp"

#include <json.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "otp/errors.hpp"

namespace otp {

using ordered_json = nlohmann::ordered_json;

long Instance::online_capacity(std::size_t site_index) const {
    if (site_index >= sites.size()) throw DomainError("site index out of range");
    return k * sites[site_index].capacity;
}

Num Instance::distance(std::size_t site_index, std::size_t request_index) const {
    if (site_index >= sites.size()) throw DomainError("site index out of range");
    if (request_index >= requests.size())
        throw DomainError("request index out of range");
    return space.distance(sites[site_index].point, requests[request_index].point);
}

long Instance::total_adversary_capacity() const {
    long total = 0;
    for (const auto& s : sites) total += s.capacity;
    return total;
}

void Instance::validate() const {
    if (k < 1) throw DomainError("k must be >= 1");
    if (sites.empty()) throw DomainError("instance has no sites");
    std::size_t points = space.point_count();
    for (std::size_t j = 0; j < sites.size(); ++j) {
        if (sites[j].id != static_cast<int>(j))
            throw DomainError("site ids must be 0..m-1 in order");
        if (sites[j].point >= points) throw DomainError("site point out of range");
        if (sites[j].capacity < 1) throw DomainError("site capacity must be >= 1");
    }
    for (std::size_t i = 0; i < requests.size(); ++i) {
        if (requests[i].id != static_cast<int>(i))
            throw DomainError("request ids must be 0..n-1 in arrival order");
        if (requests[i].point >= points)
            throw DomainError("request point out of range");
    }
    if (total_adversary_capacity() < static_cast<long>(requests.size()))
        throw DomainError("infeasible: total adversary capacity " +
                          std::to_string(total_adversary_capacity()) + " < " +
                          std::to_string(requests.size()) + " requests");
}

Assignment make_assignment(const Instance& inst, std::vector<int> site_of) {
    if (site_of.size() != inst.requests.size())
        throw DomainError("assignment size does not match request count");
    Assignment a;
    a.site_of = std::move(site_of);
    a.edge_cost.reserve(a.site_of.size());
    a.total_cost = Num();
    for (std::size_t i = 0; i < a.site_of.size(); ++i) {
        int s = a.site_of[i];
        if (s < 0 || static_cast<std::size_t>(s) >= inst.sites.size())
            throw DomainError("request " + std::to_string(i) +
                              " is not mapped to a valid site");
        Num d = inst.distance(static_cast<std::size_t>(s), i);
        a.edge_cost.push_back(d);
        a.total_cost += d;
    }
    return a;
}

namespace {

std::vector<long> site_usage(const Instance& inst, const Assignment& a) {
    if (a.site_of.size() != inst.requests.size())
        throw DomainError("assignment size does not match request count");
    std::vector<long> used(inst.sites.size(), 0);
    for (std::size_t i = 0; i < a.site_of.size(); ++i) {
        int s = a.site_of[i];
        if (s < 0 || static_cast<std::size_t>(s) >= inst.sites.size())
            throw DomainError("request " + std::to_string(i) +
                              " is not mapped to a valid site");
        ++used[static_cast<std::size_t>(s)];
    }
    return used;
}

}  // namespace

void check_online_feasible(const Instance& inst, const Assignment& a) {
    auto used = site_usage(inst, a);
    for (std::size_t j = 0; j < used.size(); ++j)
        if (used[j] > inst.online_capacity(j))
            throw DomainError("site " + std::to_string(j) + " holds " +
                              std::to_string(used[j]) + " requests, online capacity " +
                              std::to_string(inst.online_capacity(j)));
}

void check_adversary_feasible(const Instance& inst, const Assignment& a) {
    auto used = site_usage(inst, a);
    for (std::size_t j = 0; j < used.size(); ++j)
        if (used[j] > inst.sites[j].capacity)
            throw DomainError("site " + std::to_string(j) + " holds " +
                              std::to_string(used[j]) + " requests, capacity " +
                              std::to_string(inst.sites[j].capacity));
}

// ---- document format ------------------------------------------------------

namespace {

const ordered_json& require_field(const ordered_json& j, const char* key,
                                  const char* where) {
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(std::string(where) + ": missing field '" + key + "'");
    return *it;
}

Num parse_coordinate(const ordered_json& v, const std::string& where) {
    if (!v.is_string())
        throw ParseError(where + ": coordinates must be decimal strings");
    return Num::parse(v.get<std::string>());
}

long require_integer(const ordered_json& v, const std::string& where) {
    if (!v.is_number_integer())
        throw ParseError(where + ": expected an integer");
    return v.get<long>();
}

}  // namespace

Instance parse_instance(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!j.is_object()) throw ParseError("instance document must be an object");

    const auto& version = require_field(j, "version", "document");
    if (!version.is_string() || version.get<std::string>() != "otp-1")
        throw ParseError("unsupported document version (want \"otp-1\")");

    Instance inst;

    const auto& metric = require_field(j, "metric", "document");
    if (!metric.is_object()) throw ParseError("metric: expected an object");
    const auto& kind_field = require_field(metric, "kind", "metric");
    if (!kind_field.is_string()) throw ParseError("metric.kind: expected a string");
    MetricKind kind = metric_kind_from_name(kind_field.get<std::string>());

    switch (kind) {
        case MetricKind::line: {
            const auto& coords = require_field(metric, "coordinates", "metric");
            if (!coords.is_array())
                throw ParseError("metric.coordinates: expected an array");
            std::vector<Num> xs;
            xs.reserve(coords.size());
            for (std::size_t i = 0; i < coords.size(); ++i)
                xs.push_back(parse_coordinate(coords[i],
                                              "metric.coordinates[" + std::to_string(i) + "]"));
            inst.space = MetricSpace::make_line(std::move(xs));
            break;
        }
        case MetricKind::plane: {
            const auto& coords = require_field(metric, "coordinates", "metric");
            if (!coords.is_array())
                throw ParseError("metric.coordinates: expected an array");
            std::vector<std::array<Num, 2>> pts;
            pts.reserve(coords.size());
            for (std::size_t i = 0; i < coords.size(); ++i) {
                const auto& pair = coords[i];
                std::string where = "metric.coordinates[" + std::to_string(i) + "]";
                if (!pair.is_array() || pair.size() != 2)
                    throw ParseError(where + ": expected [x, y]");
                pts.push_back({parse_coordinate(pair[0], where),
                               parse_coordinate(pair[1], where)});
            }
            inst.space = MetricSpace::make_plane(std::move(pts));
            break;
        }
        case MetricKind::matrix: {
            const auto& rows = require_field(metric, "distances", "metric");
            if (!rows.is_array())
                throw ParseError("metric.distances: expected an array of rows");
            std::vector<std::vector<Num>> table;
            table.reserve(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const auto& row = rows[r];
                std::string where = "metric.distances[" + std::to_string(r) + "]";
                if (!row.is_array() || row.size() != rows.size())
                    throw ParseError(where + ": matrix must be square");
                std::vector<Num> entries;
                entries.reserve(row.size());
                for (std::size_t c = 0; c < row.size(); ++c)
                    entries.push_back(parse_coordinate(row[c],
                                                       where + "[" + std::to_string(c) + "]"));
                table.push_back(std::move(entries));
            }
            inst.space = MetricSpace::make_matrix(std::move(table));
            break;
        }
    }

    inst.k = require_integer(require_field(j, "k", "document"), "k");

    const auto& sites = require_field(j, "sites", "document");
    if (!sites.is_array()) throw ParseError("sites: expected an array");
    for (std::size_t i = 0; i < sites.size(); ++i) {
        std::string where = "sites[" + std::to_string(i) + "]";
        const auto& s = sites[i];
        if (!s.is_object()) throw ParseError(where + ": expected an object");
        Site site;
        site.id = static_cast<int>(
            require_integer(require_field(s, "id", where.c_str()), where + ".id"));
        long point = require_integer(require_field(s, "point", where.c_str()),
                                     where + ".point");
        if (point < 0) throw ParseError(where + ".point: negative point id");
        site.point = static_cast<std::size_t>(point);
        site.capacity = require_integer(require_field(s, "capacity", where.c_str()),
                                        where + ".capacity");
        inst.sites.push_back(site);
    }

    const auto& requests = require_field(j, "requests", "document");
    if (!requests.is_array()) throw ParseError("requests: expected an array");
    for (std::size_t i = 0; i < requests.size(); ++i) {
        std::string where = "requests[" + std::to_string(i) + "]";
        const auto& r = requests[i];
        if (!r.is_object()) throw ParseError(where + ": expected an object");
        Request req;
        req.id = static_cast<int>(
            require_integer(require_field(r, "id", where.c_str()), where + ".id"));
        long point = require_integer(require_field(r, "point", where.c_str()),
                                     where + ".point");
        if (point < 0) throw ParseError(where + ".point: negative point id");
        req.point = static_cast<std::size_t>(point);
        inst.requests.push_back(req);
    }

    try {
        inst.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return inst;
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

std::string serialize_instance(const Instance& inst) {
    ordered_json j;
    j["version"] = "otp-1";
    ordered_json metric;
    metric["kind"] = metric_kind_name(inst.space.kind);
    switch (inst.space.kind) {
        case MetricKind::line: {
            ordered_json coords = ordered_json::array();
            for (const auto& x : inst.space.line) coords.push_back(x.str());
            metric["coordinates"] = std::move(coords);
            break;
        }
        case MetricKind::plane: {
            ordered_json coords = ordered_json::array();
            for (const auto& p : inst.space.plane)
                coords.push_back(ordered_json::array({p[0].str(), p[1].str()}));
            metric["coordinates"] = std::move(coords);
            break;
        }
        case MetricKind::matrix: {
            ordered_json rows = ordered_json::array();
            for (const auto& row : inst.space.matrix) {
                ordered_json r = ordered_json::array();
                for (const auto& v : row) r.push_back(v.str());
                rows.push_back(std::move(r));
            }
            metric["distances"] = std::move(rows);
            break;
        }
    }
    j["metric"] = std::move(metric);
    j["k"] = inst.k;
    ordered_json sites = ordered_json::array();
    for (const auto& s : inst.sites) {
        ordered_json site;
        site["id"] = s.id;
        site["point"] = s.point;
        site["capacity"] = s.capacity;
        sites.push_back(std::move(site));
    }
    j["sites"] = std::move(sites);
    ordered_json requests = ordered_json::array();
    for (const auto& r : inst.requests) {
        ordered_json req;
        req["id"] = r.id;
        req["point"] = r.point;
        requests.push_back(std::move(req));
    }
    j["requests"] = std::move(requests);
    return j.dump(2) + "\n";
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write '" + path.string() + "'");
    out << serialize_instance(inst);
}

// ---- generators -----------------------------------------------------------

Instance gen_lower_bound(long k, long m, const Num& epsilon) {
    if (k < 3) throw DomainError("lower-bound family requires k >= 3");
    if (m < 1) throw DomainError("lower-bound family requires m >= 1");
    if (!epsilon.is_exact() || epsilon.sign() < 0)
        throw DomainError("epsilon must be an exact value >= 0");

    // request count is (k^m - 1) / (k - 1); keep it at desk scale
    mpz_class total;
    mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(k),
                  static_cast<unsigned long>(m));
    total = (total - 1) / (k - 1);
    if (total > 2'000'000)
        throw DomainError("lower-bound instance would have " + total.get_str() +
                          " requests; refusing to build it");

    std::vector<long> batch(static_cast<std::size_t>(m));
    long size = 1;
    for (long i = m; i >= 1; --i) {
        batch[static_cast<std::size_t>(i - 1)] = size;
        if (i > 1) size *= k;
    }

    std::vector<Num> site_coord(static_cast<std::size_t>(m));
    site_coord[0] = Num(-1);
    Num power(1);  // 2^{i-1}
    for (long i = 2; i <= m; ++i) {
        power *= Num(2);
        site_coord[static_cast<std::size_t>(i - 1)] = power - Num(1);
    }

    std::vector<Num> request_coord(static_cast<std::size_t>(m));
    request_coord[0] = epsilon;
    for (long i = 2; i <= m; ++i)
        request_coord[static_cast<std::size_t>(i - 1)] =
            site_coord[static_cast<std::size_t>(i - 1)] + epsilon;

    Instance inst;
    inst.k = k;
    std::vector<Num> xs;
    xs.reserve(static_cast<std::size_t>(2 * m));
    for (long i = 0; i < m; ++i) xs.push_back(site_coord[static_cast<std::size_t>(i)]);
    for (long i = 0; i < m; ++i) xs.push_back(request_coord[static_cast<std::size_t>(i)]);
    inst.space = MetricSpace::make_line(std::move(xs));

    for (long i = 0; i < m; ++i)
        inst.sites.push_back({static_cast<int>(i), static_cast<std::size_t>(i),
                              batch[static_cast<std::size_t>(i)]});

    int next_id = 0;
    for (long i = 0; i < m; ++i)
        for (long c = 0; c < batch[static_cast<std::size_t>(i)]; ++c)
            inst.requests.push_back({next_id++, static_cast<std::size_t>(m + i)});

    inst.validate();
    return inst;
}

namespace {

// All randomness goes through these two helpers so generated instances are
// reproducible across standard libraries (std::uniform_int_distribution is
// not pinned down by the standard).
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    return rng() % bound;
}

Num draw_micro_coordinate(std::mt19937_64& rng) {
    return Num::ratio(static_cast<long>(draw_below(rng, 1'000'001)), 1'000'000);
}

}  // namespace

Instance gen_random(const RandomSpec& spec) {
    if (spec.site_count < 1) throw DomainError("need at least one site");
    if (spec.k < 1) throw DomainError("k must be >= 1");
    if (spec.capacity_max < 1) throw DomainError("capacity_max must be >= 1");
    if (spec.kind != MetricKind::line && spec.kind != MetricKind::plane)
        throw DomainError("random instances use line or plane metrics");
    long max_total = static_cast<long>(spec.site_count) * spec.capacity_max;
    if (static_cast<long>(spec.request_count) > max_total)
        throw DomainError("request count exceeds site_count * capacity_max");

    std::mt19937_64 rng(spec.seed);
    std::size_t points = spec.site_count + spec.request_count;

    Instance inst;
    inst.k = spec.k;
    if (spec.kind == MetricKind::line) {
        std::vector<Num> xs;
        xs.reserve(points);
        for (std::size_t i = 0; i < points; ++i) xs.push_back(draw_micro_coordinate(rng));
        inst.space = MetricSpace::make_line(std::move(xs));
    } else {
        std::vector<std::array<Num, 2>> pts;
        pts.reserve(points);
        for (std::size_t i = 0; i < points; ++i) {
            Num x = draw_micro_coordinate(rng);
            Num y = draw_micro_coordinate(rng);
            pts.push_back({x, y});
        }
        inst.space = MetricSpace::make_plane(std::move(pts));
    }

    std::vector<long> caps(spec.site_count);
    long total = 0;
    for (std::size_t j = 0; j < spec.site_count; ++j) {
        caps[j] = 1 + static_cast<long>(
                          draw_below(rng, static_cast<std::uint64_t>(spec.capacity_max)));
        total += caps[j];
    }
    // round-robin repair until adversary-feasible
    for (std::size_t j = 0; total < static_cast<long>(spec.request_count);
         j = (j + 1) % spec.site_count) {
        if (caps[j] < spec.capacity_max) {
            ++caps[j];
            ++total;
        }
    }

    for (std::size_t j = 0; j < spec.site_count; ++j)
        inst.sites.push_back({static_cast<int>(j), j, caps[j]});
    for (std::size_t i = 0; i < spec.request_count; ++i)
        inst.requests.push_back({static_cast<int>(i), spec.site_count + i});

    inst.validate();
    return inst;
}

// ---- unit split -----------------------------------------------------------

SplitResult split_unit(const Instance& inst, const Assignment& online,
                       const Assignment& adversary) {
    inst.validate();
    check_online_feasible(inst, online);
    check_adversary_feasible(inst, adversary);

    std::size_t m = inst.sites.size();
    std::vector<std::size_t> copy_base(m);
    std::size_t unit_count = 0;
    for (std::size_t j = 0; j < m; ++j) {
        copy_base[j] = unit_count;
        unit_count += static_cast<std::size_t>(inst.sites[j].capacity);
    }

    SplitResult out;
    out.unit.space = inst.space;
    out.unit.k = inst.k;
    out.unit.requests = inst.requests;
    out.unit.sites.reserve(unit_count);
    out.site_origin.reserve(unit_count);
    for (std::size_t j = 0; j < m; ++j)
        for (long c = 0; c < inst.sites[j].capacity; ++c) {
            out.unit.sites.push_back({static_cast<int>(out.unit.sites.size()),
                                      inst.sites[j].point, 1});
            out.site_origin.push_back(j);
        }
    out.unit.validate();

    std::size_t n = inst.requests.size();
    std::vector<int> online_map(n, -1), adversary_map(n, -1);
    std::vector<long> online_seen(m, 0), adversary_seen(m, 0);
    long k = inst.k;
    for (std::size_t i = 0; i < n; ++i) {
        auto j_on = static_cast<std::size_t>(online.site_of[i]);
        online_map[i] = static_cast<int>(copy_base[j_on] +
                                         static_cast<std::size_t>(online_seen[j_on] / k));
        ++online_seen[j_on];
        auto j_adv = static_cast<std::size_t>(adversary.site_of[i]);
        adversary_map[i] = static_cast<int>(copy_base[j_adv] +
                                            static_cast<std::size_t>(adversary_seen[j_adv]));
        ++adversary_seen[j_adv];
    }

    out.online = make_assignment(out.unit, std::move(online_map));
    out.adversary = make_assignment(out.unit, std::move(adversary_map));
    check_online_feasible(out.unit, out.online);
    check_adversary_feasible(out.unit, out.adversary);

    // copies are co-located with the original, so costs carry over verbatim
    for (std::size_t i = 0; i < n; ++i) {
        if (out.online.edge_cost[i] != online.edge_cost[i] ||
            out.adversary.edge_cost[i] != adversary.edge_cost[i])
            throw InternalError("unit split changed an edge cost");
    }
    return out;
}

}  // namespace otp
