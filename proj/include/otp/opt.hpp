#pragma once

#include <string>
#include <vector>

#include "otp/instance.hpp"

namespace otp {

// Offline optimum against the adversary capacities a_j, plus the dual
// potentials that certify it. The sink potential is part of the result so
// the certificate can be re-checked without knowing solver internals.
struct OptResult {
    Assignment assignment;
    std::vector<Num> request_potential;
    std::vector<Num> site_potential;
    Num sink_potential;
};

// Min-cost flow by successive shortest paths: requests are introduced in
// arrival order and each one is routed along a shortest augmenting path
// found by Dijkstra over reduced costs. Exact arithmetic whenever the
// metric is exact.
OptResult solve_opt(const Instance& inst);

// Exhaustive assignment enumeration. Refuses instances with more than
// 8 requests or more than 8 sites.
Num brute_force_opt(const Instance& inst);

// Independent re-check of the optimality certificate: the assignment is
// feasible, its cost adds up, and the potentials price every residual arc
// nonnegatively (assigned pairs nonpositively on the forward side, sites
// consistent with the sink). Returns human-readable issues; empty means
// certified.
std::vector<std::string> certify_optimality(const Instance& inst,
                                            const OptResult& result);

}  // namespace otp
