#include "permlab/experiment.hpp"
#include "permlab/numeric.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

using permlab::ExperimentConfig;
using permlab::ExperimentRecord;

struct RawOptions {
    std::string delta = "1/20", K = "4", lambda = "1", eps = "1/4", r = "1", t = "1";
    std::vector<int> n_list;
};

void add_common(CLI::App* cmd, ExperimentConfig& cfg, RawOptions& raw) {
    cmd->add_option("--n", cfg.n, "matrix dimension");
    cmd->add_option("--trials", cfg.trials, "number of trials");
    cmd->add_option("--seed", cfg.root_seed, "root seed");
    cmd->add_option("--threads", cfg.threads, "worker threads")->envname("PERMLAB_THREADS");
    cmd->add_option("--family-cap", cfg.family_cap, "witness family cap");
    cmd->add_option("--out", cfg.out_path, "output path (stdout if omitted)");
    cmd->add_option("--format", cfg.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    cmd->set_config("--config", "", "key=value config file (flags win)");
    (void)raw;
}

int emit(const ExperimentConfig& cfg, const ExperimentRecord& rec) {
    std::string body = cfg.format == "json" ? permlab::to_json(rec) : permlab::to_csv(rec);
    if (cfg.out_path.empty()) {
        std::cout << body;
    } else {
        permlab::atomic_write(cfg.out_path, body);
        if (!rec.sidecar_json.empty())
            permlab::atomic_write(cfg.out_path + ".traces.json", rec.sidecar_json);
    }
    for (const auto& v : rec.violations) std::cerr << "THEOREM VIOLATION: " << v << "\n";
    return rec.violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"permlab: desk-scale experiments on permanents of random symmetric matrices"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    RawOptions raw;

    auto* permanent = app.add_subcommand("permanent", "exact permanents of sampled matrices");
    add_common(permanent, cfg, raw);
    permanent->add_flag("--check-naive", cfg.check_naive, "cross-check against the naive kernel");

    auto* moments = app.add_subcommand("moments", "second moment, exact and Monte Carlo");
    add_common(moments, cfg, raw);
    moments->add_option("--n-list", raw.n_list, "dimensions to sweep");
    moments->add_option("--mc-samples", cfg.mc_samples, "Monte Carlo sample count");

    auto* anticonc = app.add_subcommand("anticonc", "anti-concentration bound sweeps");
    add_common(anticonc, cfg, raw);
    anticonc->add_option("--kind", cfg.kind, "elo|linear|quadratic|mnv")
        ->check(CLI::IsMember({"elo", "linear", "quadratic", "mnv"}));
    anticonc->add_option("--r", raw.r, "coefficient threshold r (rational)");
    anticonc->add_option("--t", raw.t, "tail width t >= 1 (rational)");
    anticonc->add_option("--C", cfg.mnv_c, "constant C for the mnv probe");

    auto* grow = app.add_subcommand("grow", "growth processes (weak|cover|growth|single)");
    add_common(grow, cfg, raw);
    grow->add_option("--mode", cfg.mode, "weak|cover|growth|single")
        ->check(CLI::IsMember({"weak", "cover", "growth", "single"}));
    grow->add_option("--R", cfg.R, "R parameter");
    grow->add_option("--L", cfg.L, "L parameter");
    grow->add_option("--S", cfg.S, "S parameter");
    grow->add_option("--T", cfg.T, "T parameter");
    grow->add_option("--delta", raw.delta, "delta (rational, 0 < delta < 1/16)");
    grow->add_option("--K", raw.K, "K parameter (rational > 1)");
    grow->add_option("--lambda", raw.lambda, "heaviness threshold (rational)");

    auto* endgame = app.add_subcommand("endgame", "endgame survival step trials");
    add_common(endgame, cfg, raw);
    endgame->add_option("--L", cfg.L, "missing rows/columns per set");
    endgame->add_option("--m", cfg.m, "family size");
    endgame->add_option("--lambda", raw.lambda, "heaviness threshold (rational)");

    auto* sweep = app.add_subcommand("magnitude-sweep", "median log|per M_n| versus n");
    add_common(sweep, cfg, raw);
    sweep->add_option("--n-list", raw.n_list, "dimensions to sweep");

    auto* report = app.add_subcommand("report", "aggregate permlab CSV records");
    report->add_option("--in", cfg.inputs, "input CSV files")->required();
    report->add_option("--out", cfg.out_path, "output path");
    report->add_option("--format", cfg.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    report->add_option("--svg", cfg.svg_path, "write an SVG chart (magnitude-sweep records)");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.delta = permlab::parse_rational(raw.delta);
        cfg.K = permlab::parse_rational(raw.K);
        cfg.lambda = permlab::parse_rational(raw.lambda);
        cfg.eps = permlab::parse_rational(raw.eps);
        cfg.r = permlab::parse_rational(raw.r);
        cfg.t = permlab::parse_rational(raw.t);
        cfg.n_list = raw.n_list;

        if (report->parsed()) {
            std::vector<ExperimentRecord> records;
            for (const auto& path : cfg.inputs) records.push_back(permlab::read_csv(path));
            ExperimentRecord rec = permlab::report_summary(records);
            if (!cfg.svg_path.empty()) {
                std::vector<double> xs, ys;
                size_t ncol = SIZE_MAX, ycol = SIZE_MAX;
                for (size_t c = 0; c < rec.columns.size(); ++c) {
                    if (rec.columns[c] == "n") ncol = c;
                    if (rec.columns[c] == "normalized_log_per") ycol = c;
                }
                if (ncol == SIZE_MAX || ycol == SIZE_MAX)
                    throw permlab::UsageError("--svg needs magnitude-sweep records");
                for (const auto& row : rec.rows) {
                    xs.push_back(std::stod(row[ncol]));
                    ys.push_back(std::stod(row[ycol]));
                }
                permlab::atomic_write(cfg.svg_path,
                                      permlab::render_svg_chart(
                                          "median log|per M_n| / ((n/2) log n)", xs, ys));
            }
            return emit(cfg, rec);
        }

        for (auto* sub : {permanent, moments, anticonc, grow, endgame, sweep})
            if (sub->parsed()) cfg.subcommand = sub->get_name();
        if (cfg.subcommand == "magnitude-sweep" && cfg.trials == 100) cfg.trials = 200;

        ExperimentRecord rec = permlab::run_experiment(cfg);
        return emit(cfg, rec);
    } catch (const permlab::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const permlab::ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return 2;
    } catch (const permlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
