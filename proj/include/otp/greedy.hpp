#pragma once

#include <cstdint>
#include <vector>

#include "otp/instance.hpp"

namespace otp {

// Applied only when two unfull sites are at exactly the same distance.
// highest_site_index reproduces the adversarial family's intended run when
// the perturbation is zero; with any positive perturbation both policies
// make the same choices.
enum class TieBreak { lowest_site_index, highest_site_index };

// Was site s still unfull when request i arrived (before i was placed)?
// Occupancy only grows, so the whole trace is the arrival index at which
// each site became full.
struct UnfullHistory {
    std::size_t request_count = 0;
    std::size_t site_count = 0;
    std::vector<std::size_t> full_at;  // request index whose placement filled
                                       // the site, request_count if it never filled

    void reset(std::size_t requests, std::size_t sites);
    void mark_full(std::size_t request, std::size_t site);
    bool unfull(std::size_t request, std::size_t site) const;
};

struct GreedyRun {
    Assignment assignment;
    UnfullHistory unfull_at_arrival;
};

// Serves each request at the nearest site that still has online capacity
// (k * a_j), scanning sites linearly. Deterministic given the policy.
GreedyRun run_greedy(const Instance& inst, TieBreak policy = TieBreak::highest_site_index);

// Recomputes the cost of an assignment from the metric alone.
Num assignment_cost(const Instance& inst, const Assignment& a);

// Re-drives the occupancy state of a given online assignment in arrival
// order, recording the same history run_greedy would. Each step is checked
// to be greedy-valid, i.e. the chosen site is unfull and no unfull site is
// strictly closer; a violation throws DomainError. Used on unit instances
// after split_unit, whose postcondition this is.
GreedyRun replay_online_run(const Instance& inst, const Assignment& online);

}  // namespace otp
