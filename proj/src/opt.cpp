#include "otp/opt.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "otp/errors.hpp"

namespace otp {

namespace {

struct HeapEntry {
    Num dist;
    int node;
};

// min-heap by (dist, node); the node id makes pop order total
struct HeapCompare {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        int c = a.dist.cmp(b.dist);
        if (c != 0) return c > 0;
        return a.node > b.node;
    }
};

class SspSolver {
  public:
    explicit SspSolver(const Instance& inst)
        : inst_(inst),
          n_(inst.requests.size()),
          m_(inst.sites.size()),
          sink_(static_cast<int>(n_ + m_)),
          cur_site_(n_, -1),
          pos_in_holder_(n_, 0),
          holders_(m_),
          used_(m_, 0),
          pi_(n_ + m_ + 1),
          dist_(n_ + m_ + 1),
          parent_(n_ + m_ + 1, -1),
          stamp_(n_ + m_ + 1, 0),
          settled_(n_ + m_ + 1, false) {}

    OptResult run() {
        for (std::size_t i = 0; i < n_; ++i) {
            init_request_potential(i);
            augment_from(static_cast<int>(i));
        }
        OptResult out;
        std::vector<int> site_of(n_);
        for (std::size_t i = 0; i < n_; ++i) site_of[i] = cur_site_[i];
        out.assignment = make_assignment(inst_, std::move(site_of));
        out.request_potential.assign(pi_.begin(), pi_.begin() + static_cast<long>(n_));
        out.site_potential.assign(pi_.begin() + static_cast<long>(n_),
                                  pi_.begin() + static_cast<long>(n_ + m_));
        out.sink_potential = pi_[static_cast<std::size_t>(sink_)];
        return out;
    }

  private:
    // the tightest potential keeping every arc out of the new request
    // nonnegative under reduced costs
    void init_request_potential(std::size_t r) {
        Num best;
        bool have = false;
        for (std::size_t j = 0; j < m_; ++j) {
            Num v = pi_[n_ + j] - inst_.distance(j, r);
            if (!have || v > best) {
                best = v;
                have = true;
            }
        }
        pi_[r] = best;
    }

    Num reduced(const Num& cost, int from, int to) const {
        return cost + pi_[static_cast<std::size_t>(from)] -
               pi_[static_cast<std::size_t>(to)];
    }

    // negative reduced costs violate the solver invariant; tiny inexact
    // drift is clamped, anything real is a bug
    Num checked(Num rc) const {
        if (rc.sign() >= 0) return rc;
        if (rc.is_exact() || rc.to_double() < -1e-6)
            throw InternalError("negative reduced cost in shortest-path search");
        return Num();
    }

    using Heap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapCompare>;

    void relax(Heap& heap, int from, int to, const Num& arc_cost) {
        Num nd = dist_[static_cast<std::size_t>(from)] + checked(arc_cost);
        auto t = static_cast<std::size_t>(to);
        if (stamp_[t] == epoch_ && settled_[t]) return;
        if (stamp_[t] != epoch_ || nd < dist_[t]) {
            stamp_[t] = epoch_;
            settled_[t] = false;
            dist_[t] = nd;
            parent_[t] = from;
            heap.push({nd, to});
            // keep the sink's label current the moment a site improves, so
            // the search can cut off before fanning out over full sites
            if (to != sink_ && to >= static_cast<int>(n_)) {
                std::size_t j = t - n_;
                if (used_[j] < inst_.sites[j].capacity)
                    relax(heap, to, sink_, reduced(Num(), to, sink_));
            }
        }
    }

    void augment_from(int source) {
        ++epoch_;
        std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapCompare> heap;
        auto s0 = static_cast<std::size_t>(source);
        stamp_[s0] = epoch_;
        settled_[s0] = false;
        dist_[s0] = Num();
        parent_[s0] = -1;
        heap.push({Num(), source});

        std::vector<int> settle_order;
        auto sink_i = static_cast<std::size_t>(sink_);
        bool reached_sink = false;
        while (!heap.empty()) {
            auto [d, v] = heap.top();
            heap.pop();
            auto vi = static_cast<std::size_t>(v);
            if (stamp_[vi] != epoch_ || settled_[vi]) continue;
            // nothing left in the heap can undercut the sink's label; done
            if (stamp_[sink_i] == epoch_ && !(d < dist_[sink_i])) {
                reached_sink = true;
                break;
            }
            if (v == sink_) {
                reached_sink = true;
                break;
            }
            settled_[vi] = true;
            settle_order.push_back(v);
            if (v < static_cast<int>(n_)) {
                // request node: forward arcs to every other site
                for (std::size_t j = 0; j < m_; ++j) {
                    if (cur_site_[vi] == static_cast<int>(j)) continue;
                    int site_node = static_cast<int>(n_ + j);
                    relax(heap, v, site_node, reduced(inst_.distance(j, vi), v, site_node));
                }
            } else {
                std::size_t j = vi - n_;
                if (used_[j] < inst_.sites[j].capacity)
                    relax(heap, v, sink_, reduced(Num(), v, sink_));
                for (int r : holders_[j]) {
                    Num c = -inst_.distance(j, static_cast<std::size_t>(r));
                    relax(heap, v, r, reduced(c, v, r));
                }
            }
        }
        if (!reached_sink)
            throw InternalError("no augmenting path for a feasible instance");

        // retrace sink -> source, then apply the alternating reassignments
        std::vector<int> path;
        for (int v = sink_; v != -1; v = parent_[static_cast<std::size_t>(v)])
            path.push_back(v);
        std::reverse(path.begin(), path.end());
        for (std::size_t t = 0; t + 1 < path.size(); ++t) {
            int a = path[t];
            int b = path[t + 1];
            if (a < static_cast<int>(n_)) {
                attach(a, static_cast<std::size_t>(b) - n_);
            } else if (b == sink_) {
                ++used_[static_cast<std::size_t>(a) - n_];
            } else {
                detach(b);
            }
        }

        // standard potential update, restricted to nodes settled on or
        // before the sink; everyone else is unchanged
        Num to_sink = dist_[static_cast<std::size_t>(sink_)];
        for (int v : settle_order) {
            auto vi = static_cast<std::size_t>(v);
            pi_[vi] += dist_[vi] - to_sink;
        }
    }

    void attach(int request, std::size_t site) {
        auto r = static_cast<std::size_t>(request);
        cur_site_[r] = static_cast<int>(site);
        pos_in_holder_[r] = holders_[site].size();
        holders_[site].push_back(request);
    }

    void detach(int request) {
        auto r = static_cast<std::size_t>(request);
        auto site = static_cast<std::size_t>(cur_site_[r]);
        auto& h = holders_[site];
        std::size_t pos = pos_in_holder_[r];
        h[pos] = h.back();
        pos_in_holder_[static_cast<std::size_t>(h[pos])] = pos;
        h.pop_back();
        cur_site_[r] = -1;
    }

    const Instance& inst_;
    std::size_t n_, m_;
    int sink_;
    std::vector<int> cur_site_;
    std::vector<std::size_t> pos_in_holder_;
    std::vector<std::vector<int>> holders_;
    std::vector<long> used_;
    std::vector<Num> pi_;
    std::vector<Num> dist_;
    std::vector<int> parent_;
    std::vector<std::uint64_t> stamp_;
    std::vector<char> settled_;
    std::uint64_t epoch_ = 0;
};

}  // namespace

OptResult solve_opt(const Instance& inst) {
    inst.validate();
    return SspSolver(inst).run();
}

Num brute_force_opt(const Instance& inst) {
    inst.validate();
    if (inst.requests.size() > 8 || inst.sites.size() > 8)
        throw DomainError("brute force is limited to 8 requests and 8 sites");
    if (inst.requests.empty()) return Num();

    std::vector<long> left;
    for (const auto& s : inst.sites) left.push_back(s.capacity);
    Num best;
    bool have_best = false;
    struct Rec {
        const Instance& inst;
        std::vector<long>& left;
        Num& best;
        bool& have_best;
        void go(std::size_t i, Num acc) {
            if (i == inst.requests.size()) {
                if (!have_best || acc < best) {
                    best = acc;
                    have_best = true;
                }
                return;
            }
            for (std::size_t j = 0; j < inst.sites.size(); ++j) {
                if (left[j] == 0) continue;
                --left[j];
                go(i + 1, acc + inst.distance(j, i));
                ++left[j];
            }
        }
    } rec{inst, left, best, have_best};
    rec.go(0, Num());
    if (!have_best) throw InternalError("brute force found no assignment");
    return best;
}

std::vector<std::string> certify_optimality(const Instance& inst,
                                            const OptResult& result) {
    std::vector<std::string> issues;
    std::size_t n = inst.requests.size();
    std::size_t m = inst.sites.size();
    const Assignment& a = result.assignment;

    if (a.site_of.size() != n || result.request_potential.size() != n ||
        result.site_potential.size() != m) {
        issues.push_back("certificate has wrong dimensions");
        return issues;
    }

    std::vector<long> used(m, 0);
    Num total;
    for (std::size_t i = 0; i < n; ++i) {
        int s = a.site_of[i];
        if (s < 0 || static_cast<std::size_t>(s) >= m) {
            issues.push_back("request " + std::to_string(i) + " unassigned");
            return issues;
        }
        ++used[static_cast<std::size_t>(s)];
        total += inst.distance(static_cast<std::size_t>(s), i);
    }
    for (std::size_t j = 0; j < m; ++j)
        if (used[j] > inst.sites[j].capacity)
            issues.push_back("site " + std::to_string(j) + " over capacity: " +
                             std::to_string(used[j]) + " > " +
                             std::to_string(inst.sites[j].capacity));
    if (!approx_eq(total, a.total_cost))
        issues.push_back("stored total cost " + a.total_cost.str() +
                         " does not match recomputed " + total.str());

    Num zero;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            Num rc = inst.distance(j, i) + result.request_potential[i] -
                     result.site_potential[j];
            bool assigned = a.site_of[i] == static_cast<int>(j);
            if (assigned && !approx_le(rc, zero)) {
                std::ostringstream os;
                os << "assigned pair (request " << i << ", site " << j
                   << ") has positive reduced cost " << rc;
                issues.push_back(os.str());
            }
            if (!assigned && !approx_le(zero, rc)) {
                std::ostringstream os;
                os << "free pair (request " << i << ", site " << j
                   << ") has negative reduced cost " << rc;
                issues.push_back(os.str());
            }
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (used[j] < inst.sites[j].capacity &&
            !approx_le(result.sink_potential, result.site_potential[j]))
            issues.push_back("unfull site " + std::to_string(j) +
                             " priced below the sink");
        if (used[j] > 0 &&
            !approx_le(result.site_potential[j], result.sink_potential))
            issues.push_back("used site " + std::to_string(j) +
                             " priced above the sink");
    }
    return issues;
}

}  // namespace otp
