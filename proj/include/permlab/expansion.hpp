#pragma once

#include "permlab/matrix.hpp"
#include "permlab/permanent.hpp"
#include "permlab/polynomial.hpp"

#include <map>
#include <optional>

namespace permlab {

// Row expansion: for |B| = |A| + 1, the permanent of the block obtained by
// appending a new row (x_1,...,x_n) below M and selecting rows A + the new
// one and columns B is sum_{i in B} x_i * per M[A, B \ {i}]. Returns the
// coefficient map i -> per M[A, B \ {i}].
std::map<int, Int> row_expansion(const SymmetricMatrix& m, const IndexSet& A, const IndexSet& B);

// per M[A,B] with row i and column j removed (i in A, j in B, |A| = |B|).
Int minor_permanent(const SymmetricMatrix& m, const IndexSet& A, const IndexSet& B, int i, int j);

// Double expansion for a symmetric extension: appending row/column
// (x_1,...,x_n,z) to the symmetric matrix M makes
//   per M'[A + {n+1}, B + {n+1}]
//     = z per M[A,B] + sum_{i in A, j in B} x_i x_j per M[A,B]^{(i,j)}
// a quadratic polynomial in x_1..x_n (z fixed), with square terms folded to
// constants. Requires |A| = |B|.
QuadraticPolynomial double_expansion(const SymmetricMatrix& m, const IndexSet& A,
                                     const IndexSet& B, std::int64_t z);

struct NoncancellingPair {
    int i = 0;
    int j = 0;
    IndexSet a_prime;  // A + {a}
    IndexSet b_prime;  // (B \ {a}) + {i, j}
    Int minor_sum;     // per M[A',B']^{(i,j)} + per M[A',B']^{(j,i)}
};

// Given a lambda-heavy block M[A,B], a in B\A and distinct b1, b2 in A\B,
// selects distinct i, j in {a, b1, b2} with
// |per M[A',B']^{(i,j)} + per M[A',B']^{(j,i)}| >= lambda/2. Follows the
// constructive case split: try s = 1, 2 with
// per M[(A\{b_s}) + {a}, (B\{a}) + {b_s}] on the safe side of -lambda/2
// (mirrored when per M[A,B] <= -lambda); otherwise take (i,j) = (b1,b2).
// Ties resolve to the first case in that order.
NoncancellingPair choose_noncancelling_pair(const SymmetricMatrix& m, const IndexSet& A,
                                            const IndexSet& B, int a, int b1, int b2,
                                            const HeavinessThreshold& lambda);

// Same selection rule for power-form thresholds (growth processes).
NoncancellingPair choose_noncancelling_pair(const SymmetricMatrix& m, const IndexSet& A,
                                            const IndexSet& B, int a, int b1, int b2,
                                            const Heaviness& lambda);

}  // namespace permlab
