#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "otp/analysis.hpp"
#include "otp/errors.hpp"
#include "otp/greedy.hpp"
#include "otp/instance.hpp"
#include "otp/opt.hpp"
#include "otp/pipeline.hpp"

namespace {

using nlohmann::ordered_json;

std::string double_str(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// CSV and table cell: exact rationals on demand, shortest doubles otherwise
std::string fmt(const otp::Num& v, bool exact) {
    if (exact) return v.str();
    return double_str(v.to_double());
}

std::string ratio_str(const otp::Num& greedy, const otp::Num& opt, bool exact) {
    if (opt.sign() == 0) return greedy.sign() == 0 ? "1" : "inf";
    return fmt(greedy / opt, exact);
}

otp::TieBreak parse_policy(const std::string& name) {
    if (name == "highest") return otp::TieBreak::highest_site_index;
    if (name == "lowest") return otp::TieBreak::lowest_site_index;
    throw otp::DomainError("unknown tie-break policy '" + name + "' (highest|lowest)");
}

void write_output(const std::string& text, const std::string& out) {
    if (out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw otp::DomainError("cannot write '" + out + "'");
    f << text;
}

std::pair<long, long> parse_m_range(const std::string& text) {
    auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            long m = std::stol(text);
            return {m, m};
        }
        long a = std::stol(text.substr(0, dots));
        long b = std::stol(text.substr(dots + 2));
        return {a, b};
    } catch (const std::exception&) {
        throw otp::DomainError("bad m-range '" + text + "' (want M or A..B)");
    }
}

// matrix spaces carry hand-written tables; the analysis assumes the axioms
void require_metric(const otp::Instance& inst) {
    if (inst.space.kind != otp::MetricKind::matrix) return;
    auto violations = otp::validate_metric(inst.space);
    if (!violations.empty())
        throw otp::DomainError("distance table violates the metric axioms: " +
                               violations.front().describe());
}

void print_report_text(const otp::LemmaReport& report) {
    std::cout << "bound factor (1 + 2/(k-2)): " << report.bound_factor.str() << "\n";
    std::cout << "trees: " << report.trees.size()
              << ", excised pair mass: " << report.excised_pair_mass.str() << "\n";
    for (const auto& l : report.lemmas) {
        std::cout << "  " << l.name;
        for (std::size_t pad = l.name.size(); pad < 24; ++pad) std::cout << ' ';
        std::cout << "checked " << l.checked << "  failed " << l.failed << "\n";
        for (const auto& w : l.witnesses) std::cout << "    " << w << "\n";
    }
}

int cmd_run(const std::string& path, const std::string& policy_name, bool with_opt,
            bool json, bool exact) {
    otp::Instance inst = otp::load_instance(path);
    otp::TieBreak policy = parse_policy(policy_name);
    otp::GreedyRun greedy = otp::run_greedy(inst, policy);

    ordered_json j;
    j["sites"] = inst.sites.size();
    j["requests"] = inst.requests.size();
    j["k"] = inst.k;
    j["metric"] = otp::metric_kind_name(inst.space.kind);
    j["policy"] = policy_name;
    j["greedy_cost"] = greedy.assignment.total_cost.str();
    j["greedy_cost_float"] = greedy.assignment.total_cost.to_double();
    if (with_opt) {
        otp::OptResult opt = otp::solve_opt(inst);
        auto issues = otp::certify_optimality(inst, opt);
        if (!issues.empty())
            throw otp::InternalError("optimum failed its certificate: " + issues.front());
        j["opt_cost"] = opt.assignment.total_cost.str();
        j["opt_cost_float"] = opt.assignment.total_cost.to_double();
        j["ratio"] = ratio_str(greedy.assignment.total_cost, opt.assignment.total_cost, true);
        if (inst.k >= 3) j["bound"] = otp::competitive_bound(inst.k).str();
    }

    if (json) {
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "instance: " << path << " (" << inst.sites.size() << " sites, "
              << inst.requests.size() << " requests, k=" << inst.k << ", "
              << otp::metric_kind_name(inst.space.kind) << ")\n";
    std::cout << "greedy cost: " << fmt(greedy.assignment.total_cost, exact)
              << "  (policy " << policy_name << ")\n";
    if (with_opt) {
        std::cout << "opt cost: " << j["opt_cost"].get<std::string>() << "\n";
        std::cout << "ratio: " << j["ratio"].get<std::string>();
        if (j.contains("bound")) std::cout << "  bound: " << j["bound"].get<std::string>();
        std::cout << "\n";
    }
    return 0;
}

int cmd_verify_instance(const std::string& path, const std::string& policy_name,
                        bool json) {
    otp::Instance inst = otp::load_instance(path);
    require_metric(inst);
    otp::VerificationResult res = otp::verify_instance(inst, parse_policy(policy_name));
    bool ok = res.report.pass();
    if (json) {
        ordered_json j;
        j["instance"] = path;
        j["greedy_cost"] = res.greedy_cost.str();
        j["opt_cost"] = res.opt_cost.str();
        j["ratio"] = ratio_str(res.greedy_cost, res.opt_cost, true);
        j["report"] = otp::report_to_json(res.report);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "greedy cost: " << res.greedy_cost.str() << "\n";
        std::cout << "opt cost: " << res.opt_cost.str() << "\n";
        std::cout << "ratio: " << ratio_str(res.greedy_cost, res.opt_cost, true) << "\n";
        print_report_text(res.report);
        std::cout << (ok ? "PASS" : "FAIL") << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_verify_campaign(std::size_t count, const std::vector<long>& ks,
                        std::uint64_t seed, unsigned threads,
                        const std::string& policy_name, bool json) {
    otp::CampaignConfig config;
    config.count = count;
    config.ks = ks;
    config.master_seed = seed;
    config.threads = threads;
    config.policy = parse_policy(policy_name);
    for (long k : ks)
        if (k < 3) throw otp::DomainError("campaign k values must be >= 3");

    auto rows = otp::run_campaign(config);
    std::size_t bound_fail = 0, lemma_fail = 0;
    for (const auto& r : rows) {
        if (!r.bound_pass) ++bound_fail;
        if (!r.lemma_pass) ++lemma_fail;
    }

    if (json) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json j;
            j["index"] = r.index;
            j["seed"] = r.seed;
            j["k"] = r.k;
            j["metric"] = otp::metric_kind_name(r.kind);
            j["sites"] = r.sites;
            j["requests"] = r.requests;
            j["greedy_cost"] = r.greedy_cost.str();
            j["opt_cost"] = r.opt_cost.str();
            j["bound_pass"] = r.bound_pass;
            j["lemma_pass"] = r.lemma_pass;
            if (!r.error.empty()) j["error"] = r.error;
            arr.push_back(std::move(j));
        }
        ordered_json out;
        out["rows"] = std::move(arr);
        out["bound_failures"] = bound_fail;
        out["lemma_failures"] = lemma_fail;
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& r : rows) {
            std::cout << "[" << r.index << "] seed " << r.seed << " k " << r.k << " "
                      << otp::metric_kind_name(r.kind) << " sites " << r.sites
                      << " requests " << r.requests << " greedy "
                      << fmt(r.greedy_cost, false) << " opt " << fmt(r.opt_cost, false)
                      << " " << (r.bound_pass && r.lemma_pass ? "PASS" : "FAIL");
            if (!r.error.empty()) std::cout << "  error: " << r.error;
            std::cout << "\n";
        }
        std::cout << "summary: " << rows.size() << " instances, " << bound_fail
                  << " bound violations, " << lemma_fail << " lemma failures\n";
    }
    return bound_fail == 0 && lemma_fail == 0 ? 0 : 1;
}

const char* kCsvHeader = "instance_id,k,m_or_seed,greedy_cost,opt_cost,ratio,bound,lemma_pass";

int cmd_experiment_lowerbound(long k, const std::string& m_range,
                              const std::string& epsilon_text,
                              const std::string& policy_name, bool exact) {
    auto [m_lo, m_hi] = parse_m_range(m_range);
    if (m_lo < 1 || m_hi < m_lo) throw otp::DomainError("bad m-range");
    otp::Num epsilon = otp::Num::parse(epsilon_text);
    otp::TieBreak policy = parse_policy(policy_name);

    std::cout << kCsvHeader << "\n";
    bool all_ok = true;
    for (long m = m_lo; m <= m_hi; ++m) {
        otp::Instance inst = otp::gen_lower_bound(k, m, epsilon);
        otp::VerificationResult res = otp::verify_instance(inst, policy);
        bool lemma_ok = res.report.pass();

        if (epsilon.sign() == 0) {
            // the simulated run must land exactly on the family's closed form
            otp::Num want_ratio = otp::lower_bound_ratio(k, m);
            otp::Num got_ratio = res.greedy_cost / res.opt_cost;
            if (got_ratio != want_ratio ||
                res.greedy_cost != otp::lower_bound_greedy_cost(k, m) ||
                res.opt_cost != otp::lower_bound_opt_cost(k, m)) {
                std::cerr << "closed form mismatch at k=" << k << " m=" << m
                          << ": simulated " << got_ratio.str() << ", expected "
                          << want_ratio.str() << "\n";
                lemma_ok = false;
            }
        }
        all_ok = all_ok && lemma_ok;
        std::cout << "lb_k" << k << "_m" << m << "," << k << "," << m << ","
                  << fmt(res.greedy_cost, exact) << "," << fmt(res.opt_cost, exact)
                  << "," << ratio_str(res.greedy_cost, res.opt_cost, exact) << ","
                  << fmt(otp::competitive_bound(k), exact) << ","
                  << (lemma_ok ? "true" : "false") << "\n";
    }
    return all_ok ? 0 : 1;
}

int cmd_experiment_random(std::size_t count, const std::vector<long>& ks,
                          std::uint64_t seed, unsigned threads,
                          const std::string& policy_name, bool exact) {
    otp::CampaignConfig config;
    config.count = count;
    config.ks = ks;
    config.master_seed = seed;
    config.threads = threads;
    config.policy = parse_policy(policy_name);
    for (long k : ks)
        if (k < 3) throw otp::DomainError("experiment k values must be >= 3");

    auto rows = otp::run_campaign(config);
    std::cout << kCsvHeader << "\n";
    bool all_ok = true;
    for (const auto& r : rows) {
        bool ok = r.bound_pass && r.lemma_pass;
        all_ok = all_ok && ok;
        if (!r.error.empty()) {
            std::cerr << "seed " << r.seed << ": " << r.error << "\n";
            std::cout << "rand_" << r.seed << "," << r.k << "," << r.seed
                      << ",,,," << fmt(otp::competitive_bound(r.k), exact)
                      << ",false\n";
            continue;
        }
        std::cout << "rand_" << r.seed << "," << r.k << "," << r.seed << ","
                  << fmt(r.greedy_cost, exact) << "," << fmt(r.opt_cost, exact) << ","
                  << ratio_str(r.greedy_cost, r.opt_cost, exact) << ","
                  << fmt(r.bound, exact) << "," << (ok ? "true" : "false") << "\n";
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"greedy online transportation workbench"};
    app.require_subcommand(1);

    bool json = false;
    bool exact = false;
    std::uint64_t seed = 1;
    app.add_flag("--json", json, "machine-readable output");
    app.add_flag("--exact", exact, "print exact rationals instead of doubles");
    app.add_option("--seed", seed, "seed for anything randomized");

    auto* gen = app.add_subcommand("generate", "write an instance document");
    gen->require_subcommand(1);
    gen->fallthrough();

    auto* gen_lb = gen->add_subcommand("lowerbound",
                                       "adversarial family that meets the bound");
    gen_lb->fallthrough();
    long lb_k = 3, lb_m = 1;
    std::string lb_epsilon = "0", lb_out = "-";
    gen_lb->add_option("--k", lb_k, "augmentation factor (>= 3)")->required();
    gen_lb->add_option("--m", lb_m, "number of sites / batches")->required();
    gen_lb->add_option("--epsilon", lb_epsilon, "request displacement (exact, >= 0)");
    gen_lb->add_option("--out", lb_out, "output path or - for stdout");

    auto* gen_rnd = gen->add_subcommand("random", "random feasible instance");
    gen_rnd->fallthrough();
    std::size_t rnd_sites = 1, rnd_requests = 0;
    long rnd_k = 3, rnd_cap = 4;
    std::string rnd_space = "line", rnd_out = "-";
    gen_rnd->add_option("--sites", rnd_sites, "site count")->required();
    gen_rnd->add_option("--requests", rnd_requests, "request count")->required();
    gen_rnd->add_option("--k", rnd_k, "augmentation factor");
    gen_rnd->add_option("--space", rnd_space, "line or plane");
    gen_rnd->add_option("--cap-max", rnd_cap, "max adversary capacity per site");
    gen_rnd->add_option("--out", rnd_out, "output path or - for stdout");

    auto* run = app.add_subcommand("run", "simulate the greedy run on an instance");
    run->fallthrough();
    std::string run_path, run_policy = "highest";
    bool run_with_opt = false;
    run->add_option("instance", run_path, "instance document")->required();
    run->add_option("--policy", run_policy, "tie break: highest or lowest");
    run->add_flag("--with-opt", run_with_opt, "also compute the exact optimum");

    auto* verify = app.add_subcommand("verify",
                                      "run the full lemma suite on an instance or campaign");
    verify->fallthrough();
    std::string verify_path, verify_policy = "highest";
    std::size_t campaign_count = 0;
    std::vector<long> verify_ks = {3, 4, 5};
    unsigned verify_threads = 1;
    verify->add_option("instance", verify_path, "instance document");
    verify->add_option("--random-campaign", campaign_count,
                       "verify this many random instances per k instead");
    verify->add_option("--k-list", verify_ks, "k values for the campaign")
        ->delimiter(',');
    verify->add_option("--threads", verify_threads, "campaign worker threads");
    verify->add_option("--policy", verify_policy, "tie break: highest or lowest");

    auto* exp = app.add_subcommand("experiment", "emit a ratio table as CSV");
    exp->fallthrough();
    std::string exp_family, exp_m_range = "1..6", exp_epsilon = "0",
                exp_policy = "highest";
    long exp_k = 3;
    std::size_t exp_count = 20;
    std::vector<long> exp_ks = {3};
    unsigned exp_threads = 1;
    exp->add_option("--family", exp_family, "lowerbound or random")->required();
    exp->add_option("--k", exp_k, "k for the lowerbound family");
    exp->add_option("--m-range", exp_m_range, "M or A..B");
    exp->add_option("--epsilon", exp_epsilon, "displacement for the lowerbound family");
    exp->add_option("--count", exp_count, "instances per k for the random family");
    exp->add_option("--k-list", exp_ks, "k values for the random family")
        ->delimiter(',');
    exp->add_option("--threads", exp_threads, "worker threads for the random family");
    exp->add_option("--policy", exp_policy, "tie break: highest or lowest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen_lb->parsed()) {
            otp::Instance inst =
                otp::gen_lower_bound(lb_k, lb_m, otp::Num::parse(lb_epsilon));
            write_output(otp::serialize_instance(inst), lb_out);
            return 0;
        }
        if (gen_rnd->parsed()) {
            otp::RandomSpec spec;
            spec.site_count = rnd_sites;
            spec.request_count = rnd_requests;
            spec.k = rnd_k;
            spec.kind = otp::metric_kind_from_name(rnd_space);
            spec.capacity_max = rnd_cap;
            spec.seed = seed;
            write_output(otp::serialize_instance(otp::gen_random(spec)), rnd_out);
            return 0;
        }
        if (run->parsed())
            return cmd_run(run_path, run_policy, run_with_opt, json, exact);
        if (verify->parsed()) {
            if (campaign_count > 0)
                return cmd_verify_campaign(campaign_count, verify_ks, seed,
                                           verify_threads, verify_policy, json);
            if (verify_path.empty())
                throw otp::DomainError("give an instance path or --random-campaign N");
            return cmd_verify_instance(verify_path, verify_policy, json);
        }
        if (exp->parsed()) {
            if (exp_family == "lowerbound")
                return cmd_experiment_lowerbound(exp_k, exp_m_range, exp_epsilon,
                                                 exp_policy, exact);
            if (exp_family == "random")
                return cmd_experiment_random(exp_count, exp_ks, seed, exp_threads,
                                             exp_policy, exact);
            throw otp::DomainError("unknown family '" + exp_family +
                                   "' (lowerbound|random)");
        }
        throw otp::InternalError("no subcommand dispatched");
    } catch (const otp::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const otp::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const otp::AnalysisError& e) {
        std::cerr << "verification error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
