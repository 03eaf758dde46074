#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "otp/metric.hpp"
#include "otp/num.hpp"

namespace otp {

struct Site {
    int id = 0;
    std::size_t point = 0;
    long capacity = 1;  // adversary capacity a_j; online side gets k * a_j
};

struct Request {
    int id = 0;
    std::size_t point = 0;
};

// One problem instance: a metric space, capacitated sites, and the request
// sequence in arrival order. k is the capacity augmentation factor granted
// to the online algorithm.
struct Instance {
    MetricSpace space;
    long k = 3;
    std::vector<Site> sites;
    std::vector<Request> requests;

    long online_capacity(std::size_t site_index) const;
    Num distance(std::size_t site_index, std::size_t request_index) const;
    long total_adversary_capacity() const;

    // Structural and feasibility checks; throws DomainError on failure.
    void validate() const;
};

// A complete request -> site mapping with its per-edge costs.
struct Assignment {
    std::vector<int> site_of;  // indexed by request id
    std::vector<Num> edge_cost;
    Num total_cost;
};

// Builds an Assignment from the mapping alone, recomputing all costs from
// the metric. Every request must be mapped to a valid site index.
Assignment make_assignment(const Instance& inst, std::vector<int> site_of);

// Feasibility of an assignment against online (k * a_j) resp. adversary
// (a_j) capacities. Throws DomainError with a description on violation.
void check_online_feasible(const Instance& inst, const Assignment& a);
void check_adversary_feasible(const Instance& inst, const Assignment& a);

// ---- document format ------------------------------------------------------

// Parses the JSON instance format (version "otp-1"). All numeric
// coordinates are decimal or "p/q" strings and parse to exact rationals.
// Throws ParseError on malformed or infeasible documents.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::filesystem::path& path);

// Canonical serialization: two-space indented JSON, fixed key order,
// trailing newline. parse/serialize round-trips canonical documents
// byte for byte.
std::string serialize_instance(const Instance& inst);
void save_instance(const Instance& inst, const std::filesystem::path& path);

// ---- generators -----------------------------------------------------------

// The adversarial family showing the competitive bound tight: m sites on a
// line at -1 and 2^{i-1}-1 with capacities k^{m-i}, requests in m batches
// that chase the greedy algorithm rightward. epsilon displaces every
// request by +epsilon, which makes the intended greedy run strictly unique;
// with epsilon = 0 the same run is reproduced under the highest-site-index
// tie break. Requires k >= 3, m >= 1, epsilon >= 0 exact.
Instance gen_lower_bound(long k, long m, const Num& epsilon = Num());

struct RandomSpec {
    std::size_t site_count = 1;
    std::size_t request_count = 0;
    long k = 3;
    MetricKind kind = MetricKind::line;  // line or plane
    long capacity_max = 4;
    std::uint64_t seed = 0;
};

// Deterministic in spec alone: coordinates are uniform on a micro-grid in
// [0,1] (exact rationals), capacities uniform in [1, capacity_max] and then
// repaired round-robin until the instance is adversary-feasible.
Instance gen_random(const RandomSpec& spec);

// ---- unit split -----------------------------------------------------------

// Splits every site j into a_j co-located unit-capacity copies and remaps
// both assignments onto the copies: the adversary one copy per request in
// arrival order, the online one k requests per copy, filled in copy order.
// Costs are preserved edge for edge, and the mapped online assignment is
// again a valid greedy execution on the unit instance.
struct SplitResult {
    Instance unit;
    Assignment online;
    Assignment adversary;
    std::vector<std::size_t> site_origin;  // unit site -> original site index
};

SplitResult split_unit(const Instance& inst, const Assignment& online,
                       const Assignment& adversary);

}  // namespace otp
