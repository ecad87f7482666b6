#pragma once

#include "permlab/expansion.hpp"
#include "permlab/matrix.hpp"
#include "permlab/permanent.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace permlab {

struct GrowthParams {
    int n = 0;  // target dimension
    int R = 0;
    int L = 0;
    int S = 0;
    int T = 0;
    Rat delta = Rat(1, 20);
    Rat K = 4;
    Rat lambda = 1;
    long long family_cap = 1 << 16;
    int n0 = 0;  // single-minor pipeline start dimension; 0 derives R + 2
};

struct HeavyRecord {
    IndexSet rows, cols;
    Int per_value;
};

// (A_l, B_l, exact permanent) records sharing a heaviness threshold.
struct HeavyFamily {
    std::vector<HeavyRecord> records;
    HeavinessThreshold lambda = 1;

    // Recomputes every permanent from the matrix and checks |per| >= lambda
    // (and optionally complement-disjointness over `ground`). Throws
    // TheoremViolation on any mismatch.
    void verify(const SymmetricMatrix& m, bool require_complement_disjoint = false,
                int ground = 0) const;
};

// -------- simple augment / corner step --------

// All i in I (ascending) for which M_ext[A + {n}, B + {i}] is lambda-heavy,
// with the exact permanent of each. M_ext is the already-extended n x n
// matrix; A, B, I live in {1,...,n-1} with I disjoint from B.
std::vector<std::pair<int, Int>> heavy_augmentations(const SymmetricMatrix& m_ext,
                                                     const IndexSet& A, const IndexSet& B,
                                                     const IndexSet& I, const Heaviness& lambda);

// Smallest such i, if any. Requires M[A,B] lambda-heavy pre-extension.
std::optional<int> augment_one_column(const SymmetricMatrix& m_ext, const IndexSet& A,
                                      const IndexSet& B, const IndexSet& I,
                                      const Heaviness& lambda);

struct CornerResult {
    IndexSet rows, cols;  // A + {a, n},  (B \ {a}) + {i, j, n}
    Int per_value;
    int i = 0, j = 0;
};

// One corner step: picks (i,j) by choose_noncancelling_pair on the
// pre-extension block, then keeps the grown submatrix if it is
// (lambda/2)-heavy in the extended matrix.
std::optional<CornerResult> corner_step(const SymmetricMatrix& m_ext, const IndexSet& A,
                                        const IndexSet& B, int a, int b1, int b2,
                                        const Heaviness& lambda);

// -------- weak growth process --------

struct GrowthClassification {
    std::map<long long, long long> histogram;  // parent count q -> |S_q|
    Int sum_small, sum_large;                  // sum of q|S_q| below / at-or-above K
    bool branch_prime = false;                 // sum_small >= R * N / 2
};

// Children histogram for a family of size-k subsets of {1,...,k+R}: each
// child of size k+1 is weighted by its number of parents in the family.
// Asserts the double-counting identity sum_q q|S_q| = R * N.
GrowthClassification classify_growth_step(const std::vector<IndexSet>& family, int R,
                                          const Rat& K);

enum class GrowthCase { I, II, III, Abort };
std::string growth_case_name(GrowthCase c);

struct GrowthStep {
    int k = 0;
    GrowthCase case_label = GrowthCase::Abort;
    Int sum_small = 0, sum_large = 0;
    long long fixed_family_size = 0;  // ceil(N_k), the family the histogram used
    long long witness_count = 0;      // heavy children found for the chosen case
    bool truncated = false;
};

struct GrowthTrace {
    int n = 0, R = 0;
    Rat delta, K;
    bool aborted = false;
    int abort_k = 0;  // k at which case (iv) fired; 0 if never
    std::vector<GrowthStep> steps;
    // Sequences over k = 1..n-R (frozen after abort).
    std::vector<Rat> n_tracked;         // N_k
    std::vector<Rat> lambda_exponents;  // lambda_k = K^e_k
    std::vector<Rat> w_tracked;         // W_k
};

// Checks every trace invariant (case arithmetic, W recurrence, N_k cap,
// histogram identity consistency). Throws TheoremViolation.
void validate_growth_trace(const GrowthTrace& trace);

struct WeakGrowthResult {
    GrowthTrace trace;
    SymmetricMatrix matrix;
    bool success = false;               // process never aborted
    Heaviness final_lambda;             // K^{e_{n-R}}, exact power form
    std::optional<HeavyFamily> family;  // witnesses at k = n-R (lambda is a
                                        // rational lower bound of final_lambda)
};

// The case (i)-(iv) growth process from k = 1 to n - R, extending the
// matrix one row/column per step. Events E(k,N,lambda) are decided on an
// explicitly maintained (capped) family of witness subsets; truncation can
// only make success harder and is recorded.
WeakGrowthResult weak_growth_run(const GrowthParams& params, std::uint64_t root_seed,
                                 std::uint64_t stream_id);

// -------- iterative cover / growth --------

struct CoverStepRecord {
    int m = 0;                       // dimension after this step
    std::optional<long long> q;      // Q_m; nullopt means infinity
    bool failure = false;            // Q_m > Q_{m-1}
    bool progress = false;
    long long witness_count = 0;
    bool truncated = false;
};

struct CoverTrace {
    char variant = 'c';  // 'c' cover, 'g' growth
    int S = 0, T = 0;
    std::optional<long long> q_start;
    std::vector<CoverStepRecord> steps;
};

// Q monotonicity modulo failures, failure <=> Q increased, q = infinity
// only when the witness family is empty. Throws TheoremViolation.
void validate_cover_trace(const CoverTrace& trace);

struct CoverRunResult {
    CoverTrace trace;
    SymmetricMatrix matrix;
    bool success = false;
    std::optional<IndexSet> b_final;
    Int final_per = 0;
};

// 3S extension steps maintaining min |{1,...,n} \ B'| over a family of
// lambda-heavy witnesses; success means Q = 0, i.e. some witness B' of size
// n + 2S with {1,...,n} within B' in M_{n+3S}.
CoverRunResult iterative_cover_run(const SymmetricMatrix& m_n, const IndexSet& B, int S,
                                   const Heaviness& lambda, long long family_cap = 64);

// 5S extension steps maintaining the growth invariant: witnesses (Q, B')
// with {1,...,Q} within B', |B'| = m - Q, heavy at lambda/2^(S-Q). Progress
// steps use the corner step with a = Q and b1, b2 the two smallest missing
// row indices. Success means Q = T.
CoverRunResult iterative_growth_run(const SymmetricMatrix& m_n, const IndexSet& B, int S, int T,
                                    const Heaviness& lambda, long long family_cap = 64);

// -------- composed pipeline --------

struct StageOutcome {
    std::string name;
    bool success = false;
    int start_dim = 0, end_dim = 0;
    int rows_lo_in = 0, rows_lo_out = 0;  // row sets are {lo,...,dim}
    CoverTrace trace;
};

struct SingleMinorResult {
    std::vector<StageOutcome> stages;
    std::string failed_stage;  // empty on success
    bool success = false;
    std::optional<IndexSet> b_final;
    Heaviness final_lambda;  // lambda / 2^(R-L)
    Int final_per = 0;
    SymmetricMatrix matrix;
};

// Composition cover(S=R) -> growth(S=R,T=L^2) -> growth(S=L^2,T=L) ->
// cover(S=L) at explicit desk-scale parameters. X and Y must be the
// canonical windows {1,...,L} and {n-3L+1,...,n} (the general case reduces
// to this by relabeling). Stages run with early exit and the pipeline pads
// with maintenance steps so the final cover spans exactly the Y window;
// degenerate stages (nothing left to grow) are skipped. On success the
// returned B satisfies |B| = n - L, {1,...,n} \ Y within B, and
// M_n[{L+1,...,n}, B] is verified lambda/2^(R-L)-heavy exactly.
SingleMinorResult grow_single_minor_run(int n, const IndexSet& X, const IndexSet& Y,
                                        const GrowthParams& params, std::uint64_t root_seed,
                                        std::uint64_t stream_id);

}  // namespace permlab
