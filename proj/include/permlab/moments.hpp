#pragma once

#include "permlab/index_set.hpp"
#include "permlab/numeric.hpp"

#include <utility>
#include <vector>

namespace permlab {

// (I_pi, F_pi): I_pi holds the indices lying in 2-cycles of pi; F_pi is the
// family of sets {i, pi(i)} for i outside I_pi (fixed points contribute
// singletons). E[X_pi X_pi'] = 1 exactly when two permutations share this
// signature, 0 otherwise.
struct PermutationSignature {
    IndexSet two_cycle_support;
    std::vector<std::pair<int, int>> family;  // (min, max); singleton {i} as (i, i); sorted

    friend bool operator==(const PermutationSignature& a, const PermutationSignature& b) {
        return a.two_cycle_support == b.two_cycle_support && a.family == b.family;
    }
};

// pi is 1-based: pi[i-1] = pi(i).
PermutationSignature signature(const std::vector<int>& pi);

// E[(per M_n)^2] exactly, as the sum of squared signature-class sizes over
// S_n. Enumerates S_n once; n <= 11.
Int second_moment_exact(int n);

// Independent oracle: averages (per M)^2 over all 2^(n(n+1)/2) symmetric
// sign matrices. n <= 4.
Rat second_moment_enumerate(int n);

struct QClassCheck {
    Int count;         // |Q_k| = #{pi : |I_pi| = k}
    Int bound;         // C(n,k) * k^(k/2) * (n-k)!, exact for even k (and k = 0)
    bool bound_exact;  // false for odd k, where k^(k/2) is irrational
    double bound_real;
    bool ok;  // count <= bound
};

// Checks the counting bound on Q_k. |Q_k| = 0 for odd k. n <= 10.
QClassCheck q_class_bound_check(int n, int k);

struct MarkovTailBound {
    Rat lower, upper;  // enclosure of E[per^2] / n^(n + 2 eps n)
    bool exact;        // true when the exponent is integral
};

// Markov bound Pr(|per M_n| >= n^(n/2 + eps n)) <= E[per^2] / n^(n + 2 eps n).
// Exact rational when (n + 2 eps n) is an integer, otherwise an outward-
// rounded enclosure (reporting only). n <= 11.
MarkovTailBound markov_upper_tail(int n, const Rat& eps);

}  // namespace permlab
