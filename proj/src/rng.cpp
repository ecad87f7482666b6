#include "permlab/rng.hpp"

#include <algorithm>

namespace permlab {

EntryDistribution::EntryDistribution(Support off_diag, Support diag)
    : off_diag_(std::move(off_diag)), diag_(std::move(diag)) {
    off_table_ = build_table(off_diag_);
    diag_table_ = build_table(diag_);
}

EntryDistribution::Table EntryDistribution::build_table(const Support& support) {
    if (support.empty()) throw ContractViolation("EntryDistribution: empty support");
    Rat total = 0;
    Int denom = 1;
    for (const auto& [value, prob] : support) {
        if (prob <= 0) throw ContractViolation("EntryDistribution: probabilities must be positive");
        total += prob;
        denom = boost::multiprecision::lcm(denom, denominator(prob));
    }
    if (total != 1) throw ContractViolation("EntryDistribution: probabilities must sum to exactly 1");
    if (denom > Int(std::uint64_t{1} << 62))
        throw CapacityError("EntryDistribution: common denominator too large to sample");

    Table table;
    table.denom = denom.convert_to<std::uint64_t>();
    std::uint64_t acc = 0;
    for (const auto& [value, prob] : support) {
        Int weight = numerator(prob) * (denom / denominator(prob));
        acc += weight.convert_to<std::uint64_t>();
        table.cumulative.emplace_back(acc, value);
    }
    return table;
}

std::int64_t EntryDistribution::sample(const Table& table, CounterRng& rng) {
    std::uint64_t u = rng.uniform_below(table.denom);
    for (const auto& [threshold, value] : table.cumulative)
        if (u < threshold) return value;
    return table.cumulative.back().second;  // unreachable
}

}  // namespace permlab
