#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "otp/greedy.hpp"
#include "otp/instance.hpp"

namespace otp {

// Bipartite multigraph over the requests and unit sites of a split
// instance: per request one adversary edge (to the site the optimum used)
// and one online edge (to the site greedy used). Pairs where both point at
// the same site contribute ratio 1 and are excised up front; their cost
// stays accounted as excised mass.
struct ResponseGraph {
    std::size_t request_count = 0;
    std::size_t site_count = 0;
    long k = 3;
    std::vector<int> adversary_site;
    std::vector<int> online_site;
    std::vector<Num> adversary_cost;
    std::vector<Num> online_cost;
    std::vector<char> excised;
    std::size_t excised_count = 0;
    Num excised_on_mass;   // sum of online edge costs over excised pairs
    Num excised_opt_mass;  // equals excised_on_mass value-wise; kept separate
    std::vector<std::vector<int>> site_online_requests;  // non-excised, arrival order
    std::vector<int> site_adversary_request;             // -1 or the request id
    UnfullHistory history;  // occupancy snapshots of the online run
};

// Requires a unit instance (every capacity 1). Throws DomainError otherwise
// or when the assignments or history do not fit the instance.
ResponseGraph build_response_graph(const Instance& unit, const Assignment& online,
                                   const Assignment& adversary,
                                   const UnfullHistory& history);

// One component of the decomposition: rooted at the latest request of its
// component, alternating request and site layers. Sites keep their k online
// children when they were already full at the root's arrival and stay
// leaves otherwise. Edge costs are copied in so the cost functions below
// need no graph.
struct ResponseTree {
    long k = 3;
    int tree_id = 0;
    int root_request = -1;
    int root_online_site = -1;  // endpoint of the deleted online edge
    Num root_online_cost;

    struct RequestNode {
        int request = -1;
        int parent_site = -1;  // index into sites, -1 for the root
        int child_site = -1;   // index into sites
        Num adversary_cost;
        Num online_cost;  // for the root this is the deleted edge's cost
        int level = 1;     // adversary edges on the path from the root
    };
    struct SiteNode {
        int site = -1;
        int parent_request = -1;  // index into requests
        bool leaf = true;
        std::vector<int> child_requests;  // indices into requests
    };
    std::vector<RequestNode> requests;  // requests[0] is the root
    std::vector<SiteNode> sites;
};

// Latest-request-first peeling of the graph. Asserts, on the concrete data,
// every structural guarantee the analysis leans on: nothing is entered
// twice, internal sites have exactly k online children, every edge lands in
// exactly one tree or is a deleted root edge. Violations throw
// AnalysisError.
std::vector<ResponseTree> decompose(const ResponseGraph& graph);

// Distance to the nearest leaf of the own subtree, per node, plus the value
// for the root's online server (computed for completeness).
struct LeafDistances {
    std::vector<Num> request_ld;  // parallel to tree.requests
    std::vector<Num> site_ld;     // parallel to tree.sites
    Num root_server_ld;
};
LeafDistances leaf_distance(const ResponseTree& tree);

// The recursive weighted cost: W(x) = adv(x) when x's site is a leaf, else
// adv(x) + (2/k) * sum of W over the site's children. One value per request
// node, index-parallel to tree.requests.
std::vector<Num> weighted_tree_cost(const ResponseTree& tree);

// Same quantity for the root, summed level by level:
// sum_l (2/k)^(l-1) * (total adversary cost at level l).
Num weighted_cost_closed_form(const ResponseTree& tree);

struct TreeCosts {
    Num on_cost;   // online edges incl. the deleted root edge
    Num opt_cost;  // adversary edges
};
TreeCosts tree_costs(const ResponseTree& tree);

// ---- lemma suite ------------------------------------------------------------

struct TreeRecord {
    int tree_id = 0;
    int root = -1;
    Num on_cost;
    Num opt_cost;
    Num bound_rhs;
    bool pass = true;
};

struct LemmaCheck {
    std::string name;
    long checked = 0;
    long failed = 0;
    std::vector<std::string> witnesses;  // first few failures, verbatim
};

struct LemmaReport {
    long k = 3;
    Num bound_factor;  // 1 + 2/(k-2)
    Num greedy_total;
    Num adversary_total;
    Num excised_pair_mass;  // both edges of every excised pair
    std::vector<TreeRecord> trees;
    std::vector<LemmaCheck> lemmas;

    bool pass() const;
};

nlohmann::ordered_json report_to_json(const LemmaReport& report);

// Runs the whole chain on a split instance: graph, decomposition, per-tree
// inequalities, conservation across trees, and the global bound
// greedy <= (1 + 2/(k-2)) * adversary. Requires k >= 3.
LemmaReport check_lemmas(const Instance& unit, const Assignment& online,
                         const Assignment& adversary, const UnfullHistory& history);

}  // namespace otp
