#include "permlab/experiment.hpp"

#include "permlab/anticoncentration.hpp"
#include "permlab/endgame.hpp"
#include "permlab/expansion.hpp"
#include "permlab/growth.hpp"
#include "permlab/matrix.hpp"
#include "permlab/moments.hpp"
#include "permlab/permanent.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

namespace permlab {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void parallel_trials(long long trials, int threads,
                     const std::function<void(long long)>& body) {
    if (threads <= 1 || trials <= 1) {
        for (long long t = 0; t < trials; ++t) body(t);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<long long> next{0};
    int workers = std::min<long long>(threads, trials);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                long long t = next.fetch_add(1);
                if (t >= trials) return;
                body(t);
            }
        });
    for (auto& th : pool) th.join();
}

// Shared scaffolding: run `trials` independent trials, each returning a row
// (plus optional sidecar entry and violation), merged in trial order.
struct TrialOutput {
    std::vector<std::string> row;
    json sidecar;  // null if none
    std::string violation;
};

void run_trials(ExperimentRecord& rec, const ExperimentConfig& cfg,
                const std::function<TrialOutput(long long)>& trial_fn) {
    std::vector<TrialOutput> outs(static_cast<size_t>(cfg.trials));
    parallel_trials(cfg.trials, cfg.threads, [&](long long t) {
        try {
            outs[static_cast<size_t>(t)] = trial_fn(t);
        } catch (const TheoremViolation& e) {
            outs[static_cast<size_t>(t)].violation =
                "trial " + std::to_string(t) + ": " + e.what();
        }
    });
    json sidecars = json::array();
    for (long long t = 0; t < cfg.trials; ++t) {
        auto& out = outs[static_cast<size_t>(t)];
        if (!out.violation.empty()) {
            rec.violations.push_back(out.violation);
            std::vector<std::string> row(rec.columns.size(), "violation");
            row[0] = std::to_string(t);
            rec.rows.push_back(std::move(row));
            continue;
        }
        if (!out.row.empty()) rec.rows.push_back(std::move(out.row));
        if (!out.sidecar.is_null()) sidecars.push_back(std::move(out.sidecar));
    }
    if (!sidecars.empty()) rec.sidecar_json = sidecars.dump(1);
}

CounterRng trial_rng(const ExperimentConfig& cfg, long long trial) {
    return CounterRng(SeedSpec{cfg.root_seed, static_cast<std::uint64_t>(trial), 0});
}

// ---- permanent ----

void run_permanent(ExperimentRecord& rec, const ExperimentConfig& cfg) {
    rec.columns = {"trial", "n", "permanent"};
    if (cfg.check_naive) rec.columns.push_back("naive_agrees");
    run_trials(rec, cfg, [&](long long t) {
        TrialOutput out;
        SymmetricMatrix m = SymmetricMatrix::sample(cfg.n, EntryDistribution::rademacher(),
                                                    cfg.root_seed, static_cast<std::uint64_t>(t));
        Int per = permanent_ryser(m.dense());
        out.row = {std::to_string(t), std::to_string(cfg.n), per.str()};
        if (cfg.check_naive) {
            bool agrees = permanent_naive(m.dense()) == per;
            if (!agrees) throw TheoremViolation("ryser/naive disagreement");
            out.row.push_back("1");
        }
        return out;
    });
    long long zeros = 0;
    for (const auto& row : rec.rows)
        if (row.size() > 2 && row[2] == "0") ++zeros;
    rec.summary.emplace_back("zero_fraction",
                             rat_to_string(Rat(zeros, std::max<long long>(1, cfg.trials))));
}

// ---- moments ----

void run_moments(ExperimentRecord& rec, const ExperimentConfig& cfg) {
    rec.columns = {"n", "exact_second_moment", "mc_estimate", "relative_error", "mc_samples"};
    std::vector<int> ns = cfg.n_list.empty() ? std::vector<int>{2, 3, 4, 6, 8} : cfg.n_list;
    for (int n : ns) {
        Int exact = second_moment_exact(n);
        Int sum = 0;
        std::vector<Int> partial(static_cast<size_t>(cfg.threads > 1 ? cfg.trials : 0));
        // Monte Carlo over mc_samples matrices; per-sample streams keep the
        // estimate independent of the thread count.
        std::vector<Int> persq(static_cast<size_t>(cfg.mc_samples));
        parallel_trials(cfg.mc_samples, cfg.threads, [&](long long s) {
            SymmetricMatrix m =
                SymmetricMatrix::sample(n, EntryDistribution::rademacher(), cfg.root_seed,
                                        static_cast<std::uint64_t>(s) * 1000003ull + n);
            Int per = permanent_ryser(m.dense());
            persq[static_cast<size_t>(s)] = per * per;
        });
        for (const Int& v : persq) sum += v;
        Rat estimate(sum, Int(cfg.mc_samples));
        Rat rel = exact == 0 ? Rat(0) : (estimate - Rat(exact)) / Rat(exact);
        rec.rows.push_back({std::to_string(n), exact.str(), rat_to_string(estimate),
                            fmt_double(rat_to_double(rel)), std::to_string(cfg.mc_samples)});
    }
}

// ---- anticonc ----

QuadraticPolynomial random_polynomial(CounterRng& rng, int n_vars, bool quadratic) {
    QuadraticPolynomial f(n_vars);
    auto coeff = [&]() -> Int {
        return Int(static_cast<long long>(rng.uniform_below(19)) - 9);
    };
    f.add_constant(coeff());
    for (int i = 1; i <= n_vars; ++i) f.add_linear(i, coeff());
    if (quadratic)
        for (int i = 1; i <= n_vars; ++i)
            for (int j = i + 1; j <= n_vars; ++j)
                if (rng.uniform_below(2)) f.add_quadratic(i, j, coeff());
    return f;
}

void run_anticonc(ExperimentRecord& rec, const ExperimentConfig& cfg) {
    rec.columns = {"instance", "kind", "n_vars", "strength", "exact_prob", "bound", "margin", "ok"};
    run_trials(rec, cfg, [&](long long t) {
        TrialOutput out;
        CounterRng rng = trial_rng(cfg, t);
        int n_vars = 2 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(
                             std::max(1, cfg.n - 1))));
        if (cfg.kind == "elo") {
            QuadraticPolynomial f = random_polynomial(rng, n_vars, false);
            f.add_linear(1, Int(1) + int_abs(Int(numerator(cfg.r))));  // guarantee m >= 1
            EloTailResult res = elo_tail(f, cfg.r, cfg.t);
            if (!res.chain_ok) throw TheoremViolation("elo_tail chain violated");
            out.row = {std::to_string(t), "elo", std::to_string(n_vars), std::to_string(res.m),
                       rat_to_string(res.exact_prob), rat_to_string(res.binomial_bound),
                       rat_to_string(res.binomial_bound - res.exact_prob), "1"};
        } else if (cfg.kind == "linear") {
            QuadraticPolynomial f = random_polynomial(rng, n_vars, false);
            f.add_linear(1, Int(1) + int_abs(Int(numerator(cfg.r))));
            bool ok = fact_linear_nondegenerate_check(f, cfg.r);
            if (!ok) throw TheoremViolation("fact_linear_nondegenerate violated");
            Rat prob = 0;
            for (const auto& [v, p] : exact_distribution(f))
                if (Rat(int_abs(v)) < cfg.r) prob += p;
            out.row = {std::to_string(t), "linear", std::to_string(n_vars), "-",
                       rat_to_string(prob), "1/2", rat_to_string(Rat(1, 2) - prob), "1"};
        } else if (cfg.kind == "quadratic") {
            QuadraticPolynomial f = random_polynomial(rng, n_vars, true);
            f.add_quadratic(1, 2, Int(1) + int_abs(Int(numerator(cfg.r))));
            bool ok = fact_quadratic_nondegenerate_check(f, cfg.r);
            if (!ok) throw TheoremViolation("fact_quadratic_nondegenerate violated");
            Rat prob = 0;
            for (const auto& [v, p] : exact_distribution(f))
                if (Rat(int_abs(v)) < cfg.r) prob += p;
            out.row = {std::to_string(t), "quadratic", std::to_string(n_vars), "-",
                       rat_to_string(prob), "3/4", rat_to_string(Rat(3, 4) - prob), "1"};
        } else if (cfg.kind == "mnv") {
            // Perfect matching polynomial plus noise keeps nu >= 3 honest.
            int pairs = std::max(3, n_vars / 2);
            QuadraticPolynomial f(2 * pairs);
            for (int p = 0; p < pairs; ++p)
                f.add_quadratic(2 * p + 1, 2 * p + 2, Int(1) + Int(numerator(cfg.r)));
            MnvCheckResult res = mnv_check(f, cfg.r, cfg.mnv_c);
            out.row = {std::to_string(t), "mnv", std::to_string(2 * pairs),
                       std::to_string(res.nu), rat_to_string(res.exact_prob),
                       fmt_double(res.bound),
                       fmt_double(res.bound - rat_to_double(res.exact_prob)), "1"};
        } else {
            throw UsageError("anticonc: unknown kind '" + cfg.kind + "'");
        }
        return out;
    });
}

// ---- grow ----

json cover_trace_json(const CoverTrace& trace) {
    json steps = json::array();
    for (const auto& s : trace.steps)
        steps.push_back({{"m", s.m},
                         {"q", s.q ? json(*s.q) : json(nullptr)},
                         {"failure", s.failure},
                         {"progress", s.progress},
                         {"witnesses", s.witness_count},
                         {"truncated", s.truncated}});
    return {{"variant", std::string(1, trace.variant)},
            {"S", trace.S},
            {"T", trace.T},
            {"q_start", trace.q_start ? json(*trace.q_start) : json(nullptr)},
            {"steps", std::move(steps)}};
}

void run_grow(ExperimentRecord& rec, const ExperimentConfig& cfg) {
    rec.columns = {"trial",        "mode",   "n",      "R",       "L",
                   "S",            "T",      "outcome", "detail", "final_lambda",
                   "case_i",       "case_ii", "case_iii", "progress_steps", "failure_steps"};
    GrowthParams params;
    params.n = cfg.n;
    params.R = cfg.R;
    params.L = cfg.L;
    params.S = cfg.S;
    params.T = cfg.T;
    params.delta = cfg.delta;
    params.K = cfg.K;
    params.lambda = cfg.lambda;
    params.family_cap = cfg.family_cap;

    auto base_row = [&](long long t, const std::string& outcome, const std::string& detail,
                        const std::string& lambda_str, long long prog, long long fails) {
        return std::vector<std::string>{std::to_string(t),
                                        cfg.mode,
                                        std::to_string(cfg.n),
                                        std::to_string(cfg.R),
                                        std::to_string(cfg.L),
                                        std::to_string(cfg.S),
                                        std::to_string(cfg.T),
                                        outcome,
                                        detail,
                                        lambda_str,
                                        std::to_string(prog),
                                        std::to_string(fails)};
    };
    auto trace_counts = [](const CoverTrace& trace) {
        long long prog = 0, fails = 0;
        for (const auto& s : trace.steps) {
            prog += s.progress;
            fails += s.failure;
        }
        return std::pair<long long, long long>{prog, fails};
    };

    run_trials(rec, cfg, [&](long long t) {
        TrialOutput out;
        std::uint64_t stream = static_cast<std::uint64_t>(t);
        if (cfg.mode == "weak") {
            WeakGrowthResult res = weak_growth_run(params, cfg.root_seed, stream);
            if (res.family) res.family->verify(res.matrix);
            long long case_ii = 0, case_i = 0;
            for (const auto& s : res.trace.steps) {
                case_i += s.case_label == GrowthCase::I;
                case_ii += s.case_label == GrowthCase::II;
            }
            out.row = base_row(t, res.success ? "success" : "abort",
                               res.success ? "" : "k=" + std::to_string(res.trace.abort_k),
                               res.final_lambda.str(), case_ii, case_i);
            json seq_n = json::array(), seq_e = json::array(), seq_w = json::array();
            for (const auto& v : res.trace.n_tracked) seq_n.push_back(rat_to_string(v));
            for (const auto& v : res.trace.lambda_exponents) seq_e.push_back(rat_to_string(v));
            for (const auto& v : res.trace.w_tracked) seq_w.push_back(rat_to_string(v));
            json cases = json::array();
            for (const auto& s : res.trace.steps)
                cases.push_back({{"k", s.k},
                                 {"case", growth_case_name(s.case_label)},
                                 {"sum_small", s.sum_small.str()},
                                 {"sum_large", s.sum_large.str()},
                                 {"family", s.fixed_family_size},
                                 {"witnesses", s.witness_count},
                                 {"truncated", s.truncated}});
            out.sidecar = {{"trial", t},          {"mode", "weak"},   {"N", std::move(seq_n)},
                           {"lambda_exp", std::move(seq_e)}, {"W", std::move(seq_w)},
                           {"steps", std::move(cases)}};
        } else if (cfg.mode == "cover" || cfg.mode == "growth") {
            SymmetricMatrix m = SymmetricMatrix::sample(cfg.n, EntryDistribution::rademacher(),
                                                        cfg.root_seed, stream);
            int S = cfg.S;
            IndexSet B = cfg.mode == "cover"
                             ? IndexSet::range(S + 1, cfg.n, cfg.n)
                             : IndexSet::full(cfg.n).minus(IndexSet::range(S + 1, 2 * S, cfg.n));
            Int per = permanent_ryser(m.submatrix(IndexSet::range(S + 1, cfg.n, cfg.n), B));
            if (!is_heavy(per, cfg.lambda)) {
                out.row = base_row(t, "init-fail", "start block below lambda", "-", 0, 0);
                return out;
            }
            CoverRunResult res =
                cfg.mode == "cover"
                    ? iterative_cover_run(m, B, S, Heaviness(cfg.lambda), cfg.family_cap)
                    : iterative_growth_run(m, B, S, cfg.T, Heaviness(cfg.lambda), cfg.family_cap);
            auto [prog, fails] = trace_counts(res.trace);
            out.row = base_row(t, res.success ? "success" : "fail", "",
                               rat_to_string(cfg.lambda), prog, fails);
            out.sidecar = {{"trial", t}, {"mode", cfg.mode}, {"trace", cover_trace_json(res.trace)}};
        } else if (cfg.mode == "single") {
            SingleMinorResult res =
                grow_single_minor_run(cfg.n, IndexSet::range(1, cfg.L, cfg.n),
                                      IndexSet::range(cfg.n - 3 * cfg.L + 1, cfg.n, cfg.n), params,
                                      cfg.root_seed, stream);
            std::string detail;
            json stages = json::array();
            long long prog = 0, fails = 0;
            for (const auto& st : res.stages) {
                detail += (detail.empty() ? "" : ";") + st.name + (st.success ? ":ok" : ":fail");
                auto [p, f] = trace_counts(st.trace);
                prog += p;
                fails += f;
                stages.push_back({{"name", st.name},
                                  {"success", st.success},
                                  {"start_dim", st.start_dim},
                                  {"end_dim", st.end_dim},
                                  {"rows_lo_in", st.rows_lo_in},
                                  {"rows_lo_out", st.rows_lo_out},
                                  {"trace", cover_trace_json(st.trace)}});
            }
            out.row = base_row(t, res.success ? "success" : "fail:" + res.failed_stage, detail,
                               res.final_lambda.str(), prog, fails);
            out.sidecar = {{"trial", t}, {"mode", "single"}, {"stages", std::move(stages)}};
        } else {
            throw UsageError("grow: unknown mode '" + cfg.mode + "'");
        }
        return out;
    });

    long long successes = 0;
    for (const auto& row : rec.rows)
        if (row.size() > 7 && row[7] == "success") ++successes;
    auto [lo, hi] = binomial_confidence(successes, cfg.trials);
    rec.summary.emplace_back("success_rate",
                             rat_to_string(Rat(successes, std::max<long long>(1, cfg.trials))));
    rec.summary.emplace_back("success_ci95",
                             fmt_double(lo) + std::string("..") + fmt_double(hi));
}

// ---- endgame ----

// Deterministic search for a complement-disjoint family of m records with
// nonzero permanents: L = 1 walks (i, j) index pairs lexicographically with
// memoized minors; L >= 2 uses consecutive complement blocks.
std::optional<HeavyFamily> find_endgame_family(const SymmetricMatrix& m, int L, long long want) {
    int n = m.dim();
    HeavyFamily family;
    if (2 * want * L > n) return std::nullopt;
    if (L == 1) {
        IndexSet full = IndexSet::full(n);
        std::map<std::pair<int, int>, Int> memo;
        auto minor = [&](int i, int j) {
            auto key = std::make_pair(i, j);
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
            Int per = permanent_ryser(m.submatrix(full.without(i), full.without(j)));
            memo.emplace(key, per);
            return per;
        };
        std::vector<std::pair<int, int>> chosen;
        std::uint64_t used = 0;
        long long nodes = 0;
        std::function<bool()> dfs = [&]() -> bool {
            if (static_cast<long long>(chosen.size()) == want) return true;
            if (++nodes > 200000) return false;
            for (int i = 1; i <= n; ++i) {
                if (used & (1ull << (i - 1))) continue;
                for (int j = 1; j <= n; ++j) {
                    if (i == j || (used & (1ull << (j - 1)))) continue;
                    if (minor(i, j) == 0) continue;
                    used |= (1ull << (i - 1)) | (1ull << (j - 1));
                    chosen.emplace_back(i, j);
                    if (dfs()) return true;
                    chosen.pop_back();
                    used &= ~((1ull << (i - 1)) | (1ull << (j - 1)));
                }
            }
            return false;
        };
        if (!dfs()) return std::nullopt;
        Rat lambda_min;
        bool first = true;
        for (auto [i, j] : chosen) {
            Int per = minor(i, j);
            family.records.push_back(HeavyRecord{full.without(i), full.without(j), per});
            Rat a(int_abs(per));
            if (first || a < lambda_min) lambda_min = a;
            first = false;
        }
        family.lambda = lambda_min;
        return family;
    }
    // Consecutive disjoint complement blocks; init fails if any block is flat.
    Rat lambda_min;
    bool first = true;
    for (long long l = 0; l < want; ++l) {
        IndexSet comp_a(n), comp_b(n);
        for (int p = 0; p < L; ++p) {
            comp_a.insert(static_cast<int>(2 * l * L) + p + 1);
            comp_b.insert(static_cast<int>((2 * l + 1) * L) + p + 1);
        }
        IndexSet A = comp_a.complement(), B = comp_b.complement();
        Int per = permanent_ryser(m.submatrix(A, B));
        if (per == 0) return std::nullopt;
        family.records.push_back(HeavyRecord{A, B, per});
        Rat a(int_abs(per));
        if (first || a < lambda_min) lambda_min = a;
        first = false;
    }
    family.lambda = lambda_min;
    return family;
}

void run_endgame(ExperimentRecord& rec, const ExperimentConfig& cfg) {
    rec.columns = {"trial", "n",    "L",           "m",          "outcome", "qualifying",
                   "easy",  "short", "interesting", "bad_vars",   "x_stat",  "y_stat"};
    run_trials(rec, cfg, [&](long long t) {
        TrialOutput out;
        SymmetricMatrix m = SymmetricMatrix::sample(cfg.n, EntryDistribution::rademacher(),
                                                    cfg.root_seed, static_cast<std::uint64_t>(t));
        auto family = find_endgame_family(m, cfg.L, cfg.m);
        if (!family) {
            out.row = {std::to_string(t), std::to_string(cfg.n), std::to_string(cfg.L),
                       std::to_string(cfg.m), "init-fail", "0", "0", "0", "0", "0", "0", "0"};
            return out;
        }
        EndgameResult res = endgame_step_run(m, *family, family->lambda);
        const EndgameState& st = res.state;
        out.row = {std::to_string(t),
                   std::to_string(cfg.n),
                   std::to_string(cfg.L),
                   std::to_string(cfg.m),
                   res.success ? "success" : "short-fall",
                   std::to_string(st.qualifying_count),
                   std::to_string(st.easy_count),
                   std::to_string(st.short_count),
                   std::to_string(st.interesting_count),
                   std::to_string(st.bad_vars.size()),
                   std::to_string(st.x_stat),
                   std::to_string(st.y_stat)};
        json labels = json::array();
        for (const auto& info : st.info)
            labels.push_back({{"label", index_label_name(info.label)},
                              {"nu", info.matching_number},
                              {"cover", info.cover.str()},
                              {"t_ell", info.t_ell},
                              {"qualifying", info.qualifying},
                              {"p_value", info.p_value.str()}});
        out.sidecar = {{"trial", t},
                       {"lambda", rat_to_string(st.lambda)},
                       {"sigma", rat_to_string(st.sigma)},
                       {"tau", rat_to_string(st.tau)},
                       {"indices", std::move(labels)}};
        return out;
    });

    long long successes = 0, inits = 0;
    for (const auto& row : rec.rows) {
        if (row.size() > 4 && row[4] == "success") ++successes;
        if (row.size() > 4 && row[4] != "init-fail") ++inits;
    }
    rec.summary.emplace_back("success_rate_given_init",
                             inits ? rat_to_string(Rat(successes, inits)) : "0");
    auto [lo, hi] = binomial_confidence(successes, std::max<long long>(1, inits));
    rec.summary.emplace_back("success_ci95", fmt_double(lo) + std::string("..") + fmt_double(hi));
}

// ---- magnitude sweep ----

void run_magnitude_sweep(ExperimentRecord& rec, const ExperimentConfig& cfg) {
    rec.columns = {"n",     "trials",       "zeros",          "zero_fraction",
                   "median_log_per", "normalized_log_per", "mean_normalized"};
    std::vector<int> ns = cfg.n_list.empty() ? std::vector<int>{8, 12, 16, 20, 24} : cfg.n_list;
    for (int n : ns) {
        std::vector<double> logs(static_cast<size_t>(cfg.trials), -1.0);
        std::atomic<long long> zeros{0};
        parallel_trials(cfg.trials, cfg.threads, [&](long long t) {
            SymmetricMatrix m =
                SymmetricMatrix::sample(n, EntryDistribution::rademacher(), cfg.root_seed,
                                        static_cast<std::uint64_t>(t) * 1000003ull + n);
            Int per = permanent_ryser(m.dense());
            if (per == 0) {
                ++zeros;
                return;
            }
            logs[static_cast<size_t>(t)] = std::log(std::abs(int_abs(per).convert_to<double>()));
        });
        std::vector<double> nonzero;
        for (double v : logs)
            if (v >= 0) nonzero.push_back(v);
        std::sort(nonzero.begin(), nonzero.end());
        double median = nonzero.empty() ? 0.0 : nonzero[nonzero.size() / 2];
        double denom = 0.5 * n * std::log(static_cast<double>(n));
        double mean = 0;
        for (double v : nonzero) mean += v / denom;
        if (!nonzero.empty()) mean /= static_cast<double>(nonzero.size());
        rec.rows.push_back({std::to_string(n), std::to_string(cfg.trials),
                            std::to_string(zeros.load()),
                            rat_to_string(Rat(zeros.load(), std::max<long long>(1, cfg.trials))),
                            fmt_double(median), fmt_double(median / denom), fmt_double(mean)});
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& what) { throw UsageError("invalid config: " + what); };
    if (trials < 0) fail("trials must be >= 0");
    if (threads < 1) fail("threads must be >= 1");
    if (family_cap < 1) fail("family_cap must be >= 1");
    if (format != "csv" && format != "json") fail("format must be csv or json");
    if (subcommand == "permanent" || subcommand == "endgame" || subcommand == "grow") {
        if (n < 1) fail("n must be >= 1");
        if (n > IndexSet::kMaxGround) fail("n exceeds the fast-mode cap of 63");
    }
    if (subcommand == "grow") {
        if (mode == "weak") {
            if (!(delta > 0 && delta < Rat(1, 16))) fail("needs 0 < delta < 1/16");
            if (K <= 1) fail("needs K > 1");
            if (R < 1 || R > n - 2) fail("needs 1 <= R <= n - 2");
        }
        if (mode == "cover" && !(S >= 1 && S < n)) fail("needs 1 <= S < n");
        if (mode == "growth" && !(2 <= T && T < S && S < n && 2 * S <= n))
            fail("needs 2 <= T < S < n and 2S <= n");
        if (mode == "single" && (L < 1 || R < L || n - 3 * L <= R)) fail("needs L >= 1, R >= L, n > 3L + R");
    }
    if (subcommand == "endgame") {
        if (m < 1) fail("m must be >= 1");
        if (L < 1 || L >= n) fail("needs 1 <= L < n");
        if (2 * m * L > n) fail("needs 2*m*L <= n for disjoint complements");
    }
    if (subcommand == "anticonc" && r <= 0) fail("r must be > 0");
    if (subcommand == "anticonc" && t < 1) fail("t must be >= 1");
    if (subcommand == "moments" && mc_samples < 1) fail("mc_samples must be >= 1");
}

ExperimentRecord run_experiment(const ExperimentConfig& config) {
    config.validate();
    auto start = std::chrono::steady_clock::now();
    ExperimentRecord rec;
    rec.subcommand = config.subcommand;
    rec.config_snapshot = {
        {"subcommand", config.subcommand},
        {"n", std::to_string(config.n)},
        {"L", std::to_string(config.L)},
        {"R", std::to_string(config.R)},
        {"S", std::to_string(config.S)},
        {"T", std::to_string(config.T)},
        {"m", std::to_string(config.m)},
        {"delta", rat_to_string(config.delta)},
        {"K", rat_to_string(config.K)},
        {"lambda", rat_to_string(config.lambda)},
        {"eps", rat_to_string(config.eps)},
        {"r", rat_to_string(config.r)},
        {"t", rat_to_string(config.t)},
        {"trials", std::to_string(config.trials)},
        {"seed", std::to_string(config.root_seed)},
        {"family_cap", std::to_string(config.family_cap)},
        {"mc_samples", std::to_string(config.mc_samples)},
        {"mode", config.mode},
        {"kind", config.kind},
    };

    if (config.subcommand == "permanent")
        run_permanent(rec, config);
    else if (config.subcommand == "moments")
        run_moments(rec, config);
    else if (config.subcommand == "anticonc")
        run_anticonc(rec, config);
    else if (config.subcommand == "grow")
        run_grow(rec, config);
    else if (config.subcommand == "endgame")
        run_endgame(rec, config);
    else if (config.subcommand == "magnitude-sweep")
        run_magnitude_sweep(rec, config);
    else
        throw UsageError("unknown subcommand '" + config.subcommand + "'");

    if (config.trials == 0 && rec.rows.empty())
        rec.summary.emplace_back("vacuous", "no trials requested");
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

ExperimentRecord report_summary(const std::vector<ExperimentRecord>& records) {
    if (records.empty()) throw UsageError("report: no records");
    for (const auto& r : records)
        if (r.subcommand != records.front().subcommand)
            throw UsageError("report: records mix subcommands");
    ExperimentRecord out;
    out.subcommand = "report";
    out.config_snapshot = {{"source", records.front().subcommand},
                           {"records", std::to_string(records.size())}};
    out.columns = records.front().columns;
    long long total = 0, successes = 0;
    bool has_outcome = false;
    size_t outcome_col = 0;
    for (size_t c = 0; c < out.columns.size(); ++c)
        if (out.columns[c] == "outcome") {
            has_outcome = true;
            outcome_col = c;
        }
    for (const auto& r : records) {
        if (r.columns != out.columns) throw UsageError("report: records have mixed schemas");
        for (const auto& row : r.rows) {
            out.rows.push_back(row);
            ++total;
            if (has_outcome && row.size() > outcome_col && row[outcome_col] == "success")
                ++successes;
        }
        for (const auto& v : r.violations) out.violations.push_back(v);
    }
    out.summary.emplace_back("rows", std::to_string(total));
    if (has_outcome) {
        out.summary.emplace_back("grand_success_rate",
                                 total ? rat_to_string(Rat(successes, total)) : "0");
    }
    return out;
}

std::string to_csv(const ExperimentRecord& record) {
    std::ostringstream os;
    os << "# permlab-schema v1\n";
    os << "# subcommand=" << record.subcommand;
    for (const auto& [k, v] : record.config_snapshot)
        if (k != "subcommand") os << " " << k << "=" << v;
    os << "\n";
    for (size_t c = 0; c < record.columns.size(); ++c)
        os << record.columns[c] << (c + 1 < record.columns.size() ? "," : "");
    os << "\n";
    for (const auto& row : record.rows) {
        for (size_t c = 0; c < row.size(); ++c) os << row[c] << (c + 1 < row.size() ? "," : "");
        os << "\n";
    }
    for (const auto& [k, v] : record.summary) os << "# summary " << k << "=" << v << "\n";
    for (const auto& v : record.violations) os << "# violation " << v << "\n";
    return os.str();
}

std::string to_json(const ExperimentRecord& record, bool include_meta) {
    json j;
    j["schema"] = "permlab-schema v1";
    j["subcommand"] = record.subcommand;
    j["config"] = record.config_snapshot;
    j["columns"] = record.columns;
    j["rows"] = record.rows;
    json summary = json::object();
    for (const auto& [k, v] : record.summary) summary[k] = v;
    j["summary"] = std::move(summary);
    j["violations"] = record.violations;
    if (include_meta) {
        j["meta"] = {{"wall_seconds", record.wall_seconds},
                     {"timestamp", static_cast<long long>(std::chrono::duration_cast<std::chrono::seconds>(
                                       std::chrono::system_clock::now().time_since_epoch())
                                       .count())}};
    }
    return j.dump(1);
}

std::string render_svg_chart(const std::string& title, const std::vector<double>& xs,
                             const std::vector<double>& ys) {
    const int width = 640, height = 420, margin = 60;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
       << title << "</text>\n";
    if (!xs.empty()) {
        double xmin = *std::min_element(xs.begin(), xs.end());
        double xmax = *std::max_element(xs.begin(), xs.end());
        double ymin = *std::min_element(ys.begin(), ys.end());
        double ymax = *std::max_element(ys.begin(), ys.end());
        if (xmax == xmin) xmax = xmin + 1;
        if (ymax == ymin) ymax = ymin + 1;
        ymin = std::min(ymin, 0.0);
        ymax = std::max(ymax, 1.2);
        auto px = [&](double x) {
            return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
        };
        auto py = [&](double y) {
            return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
        };
        os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
           << width - margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
           << height - margin << "\" stroke=\"black\"/>\n";
        os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
        for (size_t i = 0; i < xs.size(); ++i) os << px(xs[i]) << "," << py(ys[i]) << " ";
        os << "\"/>\n";
        for (size_t i = 0; i < xs.size(); ++i) {
            os << "<circle cx=\"" << px(xs[i]) << "\" cy=\"" << py(ys[i])
               << "\" r=\"3\" fill=\"steelblue\"/>\n";
            os << "<text x=\"" << px(xs[i]) << "\" y=\"" << height - margin + 18
               << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt_double(xs[i])
               << "</text>\n";
        }
        os << "<text x=\"" << margin - 8 << "\" y=\"" << py(ymin)
           << "\" text-anchor=\"end\" font-size=\"11\">" << fmt_double(ymin) << "</text>\n";
        os << "<text x=\"" << margin - 8 << "\" y=\"" << py(ymax)
           << "\" text-anchor=\"end\" font-size=\"11\">" << fmt_double(ymax) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp + " for writing");
        out << content;
        if (!out.good()) throw Error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("rename failed for " + path);
}

ExperimentRecord read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    ExperimentRecord rec;
    std::string line;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# subcommand=", 0) == 0) {
                std::string rest = line.substr(2);
                auto sp = rest.find(' ');
                rec.subcommand = rest.substr(11, sp == std::string::npos ? std::string::npos
                                                                         : sp - 11);
            }
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!header_done) {
            rec.columns = std::move(cells);
            header_done = true;
        } else {
            rec.rows.push_back(std::move(cells));
        }
    }
    return rec;
}

std::pair<double, double> binomial_confidence(long long successes, long long trials,
                                              double confidence) {
    if (trials <= 0) return {0.0, 1.0};
    double alpha = 1.0 - confidence;
    auto log_cdf_at_least = [&](double p, long long k) {
        // log Pr(X >= k) for X ~ Bin(trials, p), via stable log-sum.
        if (k <= 0) return 0.0;
        double log_p = std::log(p), log_q = std::log1p(-p);
        double acc = -std::numeric_limits<double>::infinity();
        double log_choose = 0;
        for (long long i = 1; i <= k; ++i)
            log_choose += std::log(static_cast<double>(trials - i + 1)) -
                          std::log(static_cast<double>(i));
        double term = log_choose + k * log_p + (trials - k) * log_q;
        for (long long i = k; i <= trials; ++i) {
            acc = std::max(acc, term) + std::log1p(std::exp(-std::abs(acc - term)));
            if (i < trials)
                term += std::log(static_cast<double>(trials - i)) -
                        std::log(static_cast<double>(i + 1)) + log_p - log_q;
        }
        return acc;
    };
    double lo = 0.0, hi = 1.0;
    if (successes > 0) {
        double a = 1e-12, b = 1.0 - 1e-12;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (a + b);
            (log_cdf_at_least(mid, successes) >= std::log(alpha / 2) ? b : a) = mid;
        }
        lo = 0.5 * (a + b);
    }
    if (successes < trials) {
        double a = 1e-12, b = 1.0 - 1e-12;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (a + b);
            // Pr(X <= s) = 1 - Pr(X >= s+1)
            double tail = log_cdf_at_least(mid, successes + 1);
            double cdf = 1.0 - std::exp(tail);
            (cdf >= alpha / 2 ? a : b) = mid;
        }
        hi = 0.5 * (a + b);
    }
    return {lo, hi};
}

}  // namespace permlab
