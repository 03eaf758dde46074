#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otp/analysis.hpp"
#include "otp/greedy.hpp"
#include "otp/instance.hpp"
#include "otp/opt.hpp"

namespace otp {

// Greedy run, exact optimum, unit split, lemma suite; one call.
struct VerificationResult {
    Num greedy_cost;
    Num opt_cost;
    LemmaReport report;
};

VerificationResult verify_instance(const Instance& inst,
                                   TieBreak policy = TieBreak::highest_site_index);

// ---- random campaigns -------------------------------------------------------

struct CampaignConfig {
    std::size_t count = 100;       // instances per k
    std::vector<long> ks = {3, 4, 5};
    std::uint64_t master_seed = 1;
    unsigned threads = 1;
    std::size_t max_sites = 50;
    std::size_t max_requests = 200;
    long capacity_max = 4;
    TieBreak policy = TieBreak::highest_site_index;
};

struct CampaignRow {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    long k = 3;
    MetricKind kind = MetricKind::line;
    std::size_t sites = 0;
    std::size_t requests = 0;
    Num greedy_cost;
    Num opt_cost;
    Num bound;          // 1 + 2/(k-2)
    bool bound_pass = false;
    bool lemma_pass = false;
    std::string error;  // nonempty if the pipeline threw
};

// Derives the instance shape (site count, request count, metric kind) from
// the seed itself, then delegates to gen_random.
Instance campaign_instance(std::uint64_t seed, long k, std::size_t max_sites,
                           std::size_t max_requests, long capacity_max);

// Seeds are master_seed + row index. Rows come back in index order and are
// byte-identical for any thread count.
std::vector<CampaignRow> run_campaign(const CampaignConfig& config);

// ---- closed forms of the adversarial family --------------------------------

Num competitive_bound(long k);                  // 1 + 2/(k-2), k >= 3
Num lower_bound_greedy_cost(long k, long m);    // sum_i k^{m-i} * 2^{i-1}
Num lower_bound_opt_cost(long k, long m);       // k^{m-1}
Num lower_bound_ratio(long k, long m);          // (1 + 2/(k-2)) * (1 - (2/k)^m)

}  // namespace otp
