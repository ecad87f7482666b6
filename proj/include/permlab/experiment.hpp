#pragma once

#include "permlab/numeric.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace permlab {

struct ExperimentConfig {
    std::string subcommand;

    int n = 8;
    std::vector<int> n_list;
    int L = 1, R = 2, S = 2, T = 2;
    long long m = 4;
    Rat delta = Rat(1, 20);
    Rat K = 4;
    Rat lambda = 1;
    Rat eps = Rat(1, 4);
    Rat r = 1;
    Rat t = 1;
    double mnv_c = 1.0;

    long long trials = 100;
    std::uint64_t root_seed = 0;
    int threads = 1;
    long long family_cap = 1 << 16;
    long long mc_samples = 10000;

    std::string mode = "weak";    // grow: weak | cover | growth | single
    std::string kind = "elo";     // anticonc: elo | linear | quadratic | mnv
    bool check_naive = false;

    std::string out_path;
    std::string format = "csv";  // csv | json
    std::string svg_path;
    std::vector<std::string> inputs;  // report

    void validate() const;  // throws UsageError naming the violated constraint
};

struct ExperimentRecord {
    std::string subcommand;
    std::map<std::string, std::string> config_snapshot;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> summary;
    std::vector<std::string> violations;  // theorem-level failures; exit nonzero if any
    std::string sidecar_json;             // per-trial trajectories/diagnostics ("" if none)
    double wall_seconds = 0;
};

// Dispatches to the target module, parallelizing trials by stream id; the
// data rows are a pure function of (config, root_seed) regardless of the
// thread count.
ExperimentRecord run_experiment(const ExperimentConfig& config);

// Aggregates records of a shared subcommand into a summary table.
ExperimentRecord report_summary(const std::vector<ExperimentRecord>& records);

std::string to_csv(const ExperimentRecord& record);
std::string to_json(const ExperimentRecord& record, bool include_meta = true);

// Polyline chart (hand-rolled SVG) of y versus x.
std::string render_svg_chart(const std::string& title, const std::vector<double>& xs,
                             const std::vector<double>& ys);

// Temp-file-then-rename write; no partially written outputs.
void atomic_write(const std::string& path, const std::string& content);

// Reads a permlab CSV back into a record (schema line + header + rows).
ExperimentRecord read_csv(const std::string& path);

// Exact-binomial (Clopper-Pearson) confidence interval at the given level.
std::pair<double, double> binomial_confidence(long long successes, long long trials,
                                              double confidence = 0.95);

}  // namespace permlab
