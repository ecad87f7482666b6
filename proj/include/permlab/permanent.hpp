#pragma once

#include "permlab/matrix.hpp"
#include "permlab/numeric.hpp"

namespace permlab {

// Exact permanent by summing over all n! permutations. The reference
// oracle; capacity-limited to n <= 12.
Int permanent_naive(const DenseMatrix& m);

// Exact permanent via Ryser's formula with Gray-code subset iteration,
// O(2^n * n). Row sums are updated incrementally in int64, products and the
// accumulator run in checked __int128 and promote to arbitrary precision on
// overflow.
Int permanent_ryser(const DenseMatrix& m);

// per M[A,B]; requires |A| = |B|. Dispatches to permanent_ryser.
Int permanent_submatrix(const SymmetricMatrix& m, const IndexSet& A, const IndexSet& B);

// |per| >= lambda, compared exactly.
inline bool is_heavy(const Int& per_value, const HeavinessThreshold& lambda) {
    return Rat(int_abs(per_value)) >= lambda;
}
bool is_heavy(const SymmetricMatrix& m, const IndexSet& A, const IndexSet& B,
              const HeavinessThreshold& lambda);

// Threshold of the form base * K^exponent with base, K, exponent exact
// rationals (K >= 1, exponent >= 0). The weak-growth process multiplies its
// threshold by K^(1/2-delta) per growth step, which is irrational for most
// K; keeping the power form lets every heaviness test stay exact.
class Heaviness {
  public:
    Heaviness() : base_(1), k_(1), exponent_(0) {}
    explicit Heaviness(Rat lambda) : base_(std::move(lambda)), k_(1), exponent_(0) { validate(); }
    Heaviness(Rat base, Rat k, Rat exponent)
        : base_(std::move(base)), k_(std::move(k)), exponent_(std::move(exponent)) {
        validate();
    }

    bool test(const Int& per_value) const { return compare_abs(int_abs(per_value)) >= 0; }
    // Exact sign of abs_value - threshold value.
    int compare_abs(const Int& abs_value) const;

    Heaviness scaled(const Rat& factor) const { return Heaviness(base_ * factor, k_, exponent_); }
    Heaviness halved() const { return scaled(Rat(1, 2)); }
    Heaviness raised(const Rat& exponent_delta) const {
        return Heaviness(base_, k_, exponent_ + exponent_delta);
    }

    const Rat& base() const { return base_; }
    const Rat& k() const { return k_; }
    const Rat& exponent() const { return exponent_; }

    // True when the value is an exact rational (integral exponent or K = 1).
    bool rational() const { return k_ == 1 || denominator(exponent_) == 1; }
    Rat rational_value() const;
    // Largest dyadic lower bound within 2^-bits relative error; equals the
    // exact value when rational() holds.
    Rat rational_lower_bound(unsigned bits = 30) const;
    double approx() const;
    std::string str() const;

  private:
    void validate() const {
        if (base_ <= 0 || k_ < 1 || exponent_ < 0)
            throw ContractViolation("Heaviness: needs base > 0, K >= 1, exponent >= 0");
    }

    Rat base_, k_, exponent_;
};

}  // namespace permlab
