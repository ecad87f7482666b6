#pragma once

#include "permlab/numeric.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace permlab {

// Identifies one stream of randomness. Identical (root_seed, stream_id,
// step) always reproduces identical draws, on any platform; trials
// parallelize by stream_id without coordination.
struct SeedSpec {
    std::uint64_t root_seed = 0;
    std::uint64_t stream_id = 0;
    std::uint64_t step = 0;
};

// Counter-based generator: splitmix64 finalizer over a key derived from the
// seed spec plus a draw counter. No state beyond the counter, so draws are a
// pure function of (spec, draw index).
class CounterRng {
  public:
    explicit CounterRng(const SeedSpec& spec)
        : key_(mix(mix(mix(spec.root_seed + kGamma) ^ spec.stream_id) ^ spec.step)) {}

    std::uint64_t next() { return mix(key_ + (++counter_) * kGamma); }

    // Uniform on [0, bound) by rejection; exact, no modulo bias.
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) throw ContractViolation("uniform_below: zero bound");
        std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
        std::uint64_t r;
        do {
            r = next();
        } while (r >= limit);
        return r % bound;
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Finite discrete distribution with exact rational probabilities. mu is the
// off-diagonal entry distribution, nu the diagonal one.
class EntryDistribution {
  public:
    using Support = std::vector<std::pair<std::int64_t, Rat>>;

    EntryDistribution() : EntryDistribution(rademacher_support(), rademacher_support()) {}
    EntryDistribution(Support off_diag, Support diag);

    static EntryDistribution rademacher() { return EntryDistribution(); }

    const Support& off_diag() const { return off_diag_; }
    const Support& diag() const { return diag_; }

    // Number of distinct support points of mu; growth/endgame modules
    // require at least 2.
    int off_diag_support_size() const { return static_cast<int>(off_diag_.size()); }

    std::int64_t sample_off_diag(CounterRng& rng) const { return sample(off_table_, rng); }
    std::int64_t sample_diag(CounterRng& rng) const { return sample(diag_table_, rng); }

  private:
    struct Table {
        std::uint64_t denom = 0;
        std::vector<std::pair<std::uint64_t, std::int64_t>> cumulative;  // (threshold, value)
    };
    static Support rademacher_support() { return {{1, Rat(1, 2)}, {-1, Rat(1, 2)}}; }
    static Table build_table(const Support& support);
    static std::int64_t sample(const Table& table, CounterRng& rng);

    Support off_diag_, diag_;
    Table off_table_, diag_table_;
};

}  // namespace permlab
