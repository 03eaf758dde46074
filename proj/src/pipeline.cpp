#include "otp/pipeline.hpp"

#include <atomic>
#include <random>
#include <thread>

#include "otp/errors.hpp"

namespace otp {

VerificationResult verify_instance(const Instance& inst, TieBreak policy) {
    if (inst.k < 3) throw DomainError("verification requires k >= 3");
    GreedyRun greedy = run_greedy(inst, policy);
    OptResult opt = solve_opt(inst);

    auto issues = certify_optimality(inst, opt);
    if (!issues.empty())
        throw InternalError("optimum failed its own certificate: " + issues.front());

    SplitResult split = split_unit(inst, greedy.assignment, opt.assignment);
    GreedyRun unit_run = replay_online_run(split.unit, split.online);

    VerificationResult out;
    out.greedy_cost = greedy.assignment.total_cost;
    out.opt_cost = opt.assignment.total_cost;
    out.report = check_lemmas(split.unit, split.online, split.adversary,
                              unit_run.unfull_at_arrival);

    if (!approx_eq(out.report.greedy_total, out.greedy_cost) ||
        !approx_eq(out.report.adversary_total, out.opt_cost))
        throw InternalError("unit split changed a total cost");
    return out;
}

Instance campaign_instance(std::uint64_t seed, long k, std::size_t max_sites,
                           std::size_t max_requests, long capacity_max) {
    std::mt19937_64 shape(seed);
    RandomSpec spec;
    spec.site_count = 1 + static_cast<std::size_t>(shape() % max_sites);
    spec.kind = (shape() & 1) ? MetricKind::plane : MetricKind::line;
    spec.capacity_max = capacity_max;
    std::size_t cap = std::min<std::size_t>(
        max_requests, spec.site_count * static_cast<std::size_t>(capacity_max));
    spec.request_count = 1 + static_cast<std::size_t>(shape() % cap);
    spec.k = k;
    // decouple the location stream from the shape draws above
    spec.seed = seed * 0x9E3779B97F4A7C15ULL + 0x165667B19E3779F9ULL;
    return gen_random(spec);
}

std::vector<CampaignRow> run_campaign(const CampaignConfig& config) {
    std::vector<CampaignRow> rows(config.count * config.ks.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].index = i;
        rows[i].k = config.ks[i / config.count];
        rows[i].seed = config.master_seed + i;
    }

    auto work = [&](CampaignRow& row) {
        try {
            Instance inst = campaign_instance(row.seed, row.k, config.max_sites,
                                              config.max_requests, config.capacity_max);
            row.kind = inst.space.kind;
            row.sites = inst.sites.size();
            row.requests = inst.requests.size();
            row.bound = competitive_bound(row.k);
            VerificationResult r = verify_instance(inst, config.policy);
            row.greedy_cost = r.greedy_cost;
            row.opt_cost = r.opt_cost;
            row.bound_pass = approx_le(row.greedy_cost, row.bound * row.opt_cost);
            row.lemma_pass = r.report.pass();
        } catch (const std::exception& e) {
            row.error = e.what();
            row.bound_pass = false;
            row.lemma_pass = false;
        }
    };

    unsigned threads = std::max(1u, config.threads);
    if (threads == 1) {
        for (auto& row : rows) work(row);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                while (true) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= rows.size()) break;
                    work(rows[i]);
                }
            });
        for (auto& th : pool) th.join();
    }
    return rows;
}

Num competitive_bound(long k) {
    if (k < 3) throw DomainError("the bound 1 + 2/(k-2) needs k >= 3");
    return Num::ratio(k, k - 2);
}

Num lower_bound_greedy_cost(long k, long m) {
    if (k < 3 || m < 1) throw DomainError("need k >= 3 and m >= 1");
    mpz_class total = 0;
    mpz_class site_term;
    for (long i = 1; i <= m; ++i) {
        // k^{m-i} requests in batch i, each walking 2^{i-1}
        mpz_ui_pow_ui(site_term.get_mpz_t(), static_cast<unsigned long>(k),
                      static_cast<unsigned long>(m - i));
        total += site_term << static_cast<unsigned long>(i - 1);
    }
    return Num(total);
}

Num lower_bound_opt_cost(long k, long m) {
    if (k < 3 || m < 1) throw DomainError("need k >= 3 and m >= 1");
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(k),
                  static_cast<unsigned long>(m - 1));
    return Num(v);
}

Num lower_bound_ratio(long k, long m) {
    Num shrink = Num(1) - pow(Num::ratio(2, k), static_cast<unsigned long>(m));
    return competitive_bound(k) * shrink;
}

}  // namespace otp
