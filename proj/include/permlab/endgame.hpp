#pragma once

#include "permlab/anticoncentration.hpp"
#include "permlab/expansion.hpp"
#include "permlab/graph.hpp"
#include "permlab/growth.hpp"
#include "permlab/matrix.hpp"

#include <optional>
#include <vector>

namespace permlab {

// One (A*, B*, i, j) quadruple: sets of size n-L+1 whose doubly-expanded
// permanent polynomial has |coefficient of x_i x_j| >= lambda/2.
struct Quadruple {
    IndexSet a_star, b_star;
    int i = 0, j = 0;
    Int coeff;
};

// Builds the quadruples from a complement-disjoint family of lambda-heavy
// (A_l, B_l) records of size n-L. L = 1 takes A* = B* = {1..n} with i, j the
// complement elements (requires A_l != B_l); L >= 2 picks a in B\A and the
// two smallest b, b' in A\B and applies choose_noncancelling_pair. All four
// claim conditions (sizes, membership, distinctness, complement-disjointness,
// coefficient bound) are verified before returning.
std::vector<Quadruple> build_quadruples(const SymmetricMatrix& m, const HeavyFamily& family,
                                        const Rat& lambda, int L);

enum class IndexLabel { Easy, Short, Interesting };
std::string index_label_name(IndexLabel label);

struct EndgameIndexInfo {
    IndexLabel label = IndexLabel::Easy;
    int matching_number = 0;
    IndexSet cover;            // S_l; empty for easy indices
    long long t_ell = -1;      // only meaningful for interesting indices
    bool qualifying = false;   // |P_l(realized row)| >= tau
    Int p_value;               // P_l at the realized row == per of the grown block
};

struct EndgameState {
    int n = 0, L = 0, m = 0;
    Rat lambda, sigma, tau;  // sigma = lambda/(4n^2), tau = lambda/(4n^4)
    IndexSet index_pool;     // I = {i_1, j_1, ..., i_m, j_m}
    std::vector<Quadruple> quadruples;
    std::vector<QuadraticPolynomial> polys;        // P_l in x_1..x_n
    std::vector<QuadraticPolynomial> polys_on_i;   // vars outside I substituted
    std::vector<QuadraticPolynomial> polys_good;   // bad variables substituted too
    IndexSet bad_vars, good_vars;                  // partition of I
    std::vector<EndgameIndexInfo> info;
    long long easy_count = 0, short_count = 0, interesting_count = 0;
    long long x_stat = 0;  // interesting l with T_l >= m^(1/6)
    long long y_stat = 0;  // ... and additionally |P*_l(row)| < sigma
    long long qualifying_count = 0;
};

// Labels every index easy / short / interesting, computes covers S_l, the
// bad/good variable partition, and the T_l statistics, asserting the
// counting bounds (|S_l| <= 2 m^(1/6), #bad <= 2 m^(5/6)) along the way.
void classify_indices(EndgameState& state, const std::vector<int>& realized_row);

// T_l for an interesting index: drops quadratic terms of P_l with both
// endpoints outside S_l (each dropped coefficient must be < tau), fixes the
// S_l variables to their realized values, and counts degree-1 coefficients
// of the resulting linear polynomial with |coeff| >= sigma.
long long t_ell_statistics(const EndgameState& state, int ell,
                           const std::vector<int>& realized_row);

struct EndgameResult {
    SymmetricMatrix extended;  // M_{n+1}
    EndgameState state;
    std::optional<HeavyFamily> survivors;  // ceil(m/36) records at lambda/(4n^4)
    bool success = false;
};

// One endgame step: extends the matrix, builds quadruples and polynomials
// P_l, checks P_l(realized row) against the directly computed permanent of
// each grown block, classifies indices, and returns the first ceil(m/36)
// qualifying blocks as a verified complement-disjoint lambda/(4n^4)-heavy
// family when enough indices qualify. Requires +-1 extension entries (the
// multilinear reduction needs them); insufficient qualifying indices is a
// recorded outcome, not an error.
EndgameResult endgame_step_run(const SymmetricMatrix& m_n, const HeavyFamily& family,
                               const Rat& lambda);

}  // namespace permlab
