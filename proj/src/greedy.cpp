#include "otp/greedy.hpp"

#include <algorithm>

#include "otp/errors.hpp"

namespace otp {

void UnfullHistory::reset(std::size_t requests, std::size_t sites) {
    request_count = requests;
    site_count = sites;
    full_at.assign(sites, requests);
}

void UnfullHistory::mark_full(std::size_t request, std::size_t site) {
    full_at[site] = request;
}

bool UnfullHistory::unfull(std::size_t request, std::size_t site) const {
    if (request >= request_count || site >= site_count)
        throw DomainError("history lookup out of range");
    // full for request i exactly when the filling placement happened earlier
    return full_at[site] >= request;
}

GreedyRun run_greedy(const Instance& inst, TieBreak policy) {
    inst.validate();
    std::size_t n = inst.requests.size();
    std::size_t m = inst.sites.size();

    GreedyRun run;
    run.unfull_at_arrival.reset(n, m);
    std::vector<int> site_of(n, -1);
    std::vector<long> used(m, 0);

    for (std::size_t i = 0; i < n; ++i) {
        int best = -1;
        Num best_dist;
        for (std::size_t j = 0; j < m; ++j) {
            if (used[j] >= inst.online_capacity(j)) continue;
            Num d = inst.distance(j, i);
            bool take = best < 0;
            if (!take) {
                int c = d.cmp(best_dist);
                take = c < 0 || (c == 0 && policy == TieBreak::highest_site_index);
            }
            if (take) {
                best = static_cast<int>(j);
                best_dist = d;
            }
        }
        if (best < 0)
            throw InternalError("no unfull site; online capacity exhausted");
        site_of[i] = best;
        auto b = static_cast<std::size_t>(best);
        ++used[b];
        if (used[b] == inst.online_capacity(b))
            run.unfull_at_arrival.mark_full(i, b);
    }

    run.assignment = make_assignment(inst, std::move(site_of));
    return run;
}

Num assignment_cost(const Instance& inst, const Assignment& a) {
    return make_assignment(inst, a.site_of).total_cost;
}

GreedyRun replay_online_run(const Instance& inst, const Assignment& online) {
    inst.validate();
    check_online_feasible(inst, online);
    std::size_t n = inst.requests.size();
    std::size_t m = inst.sites.size();

    // many sites share a point after a unit split; distances are evaluated
    // once per distinct point, not once per site
    std::vector<std::size_t> point_ids;
    std::vector<std::size_t> point_slot(inst.space.point_count(), 0);
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t p = inst.sites[j].point;
        if (std::find(point_ids.begin(), point_ids.end(), p) == point_ids.end()) {
            point_slot[p] = point_ids.size();
            point_ids.push_back(p);
        }
    }

    GreedyRun run;
    run.unfull_at_arrival.reset(n, m);
    std::vector<long> used(m, 0);
    std::vector<long> unfull_at_point(point_ids.size(), 0);
    for (std::size_t j = 0; j < m; ++j)
        ++unfull_at_point[point_slot[inst.sites[j].point]];

    for (std::size_t i = 0; i < n; ++i) {
        auto chosen = static_cast<std::size_t>(online.site_of[i]);
        if (used[chosen] >= inst.online_capacity(chosen))
            throw DomainError("request " + std::to_string(i) +
                              " assigned to a full site; not a greedy run");
        Num chosen_dist = inst.distance(chosen, i);
        for (std::size_t s = 0; s < point_ids.size(); ++s) {
            if (unfull_at_point[s] == 0) continue;
            Num d = inst.space.distance(point_ids[s], inst.requests[i].point);
            if (d < chosen_dist)
                throw DomainError("request " + std::to_string(i) +
                                  " skips a strictly closer unfull site; not a greedy run");
        }

        ++used[chosen];
        if (used[chosen] == inst.online_capacity(chosen)) {
            run.unfull_at_arrival.mark_full(i, chosen);
            --unfull_at_point[point_slot[inst.sites[chosen].point]];
        }
    }

    run.assignment = make_assignment(inst, online.site_of);
    return run;
}

}  // namespace otp
