#include "permlab/expansion.hpp"

namespace permlab {

std::map<int, Int> row_expansion(const SymmetricMatrix& m, const IndexSet& A, const IndexSet& B) {
    if (B.size() != A.size() + 1) throw ContractViolation("row_expansion: needs |B| = |A| + 1");
    std::map<int, Int> coeffs;
    for (int i : B.elements()) coeffs[i] = permanent_ryser(m.submatrix(A, B.without(i)));
    return coeffs;
}

Int minor_permanent(const SymmetricMatrix& m, const IndexSet& A, const IndexSet& B, int i, int j) {
    if (A.size() != B.size()) throw ContractViolation("minor_permanent: |A| != |B|");
    if (!A.contains(i) || !B.contains(j))
        throw ContractViolation("minor_permanent: needs i in A and j in B");
    return permanent_ryser(m.submatrix(A.without(i), B.without(j)));
}

QuadraticPolynomial double_expansion(const SymmetricMatrix& m, const IndexSet& A,
                                     const IndexSet& B, std::int64_t z) {
    if (A.size() != B.size()) throw ContractViolation("double_expansion: |A| != |B|");
    int n = m.dim();
    QuadraticPolynomial poly(n);
    poly.add_constant(Int(z) * permanent_ryser(m.submatrix(A, B)));
    for (int i : A.elements())
        for (int j : B.elements())
            poly.add_quadratic(i, j, minor_permanent(m, A, B, i, j));  // x_i^2 folds to constant
    return poly;
}

namespace {

NoncancellingPair choose_pair_impl(const SymmetricMatrix& m, const IndexSet& A, const IndexSet& B,
                                   int a, int b1, int b2, const Heaviness& lambda) {
    if (A.size() != B.size()) throw ContractViolation("choose_noncancelling_pair: |A| != |B|");
    if (!B.contains(a) || A.contains(a))
        throw ContractViolation("choose_noncancelling_pair: needs a in B \\ A");
    if (b1 == b2 || !A.contains(b1) || B.contains(b1) || !A.contains(b2) || B.contains(b2))
        throw ContractViolation("choose_noncancelling_pair: needs distinct b1, b2 in A \\ B");

    Int per0 = permanent_ryser(m.submatrix(A, B));
    if (!lambda.test(per0))
        throw ContractViolation("choose_noncancelling_pair: M[A,B] is not lambda-heavy");
    bool positive = per0 > 0;
    Heaviness half = lambda.halved();

    NoncancellingPair out;
    out.a_prime = A.with(a);
    Int cand[2];
    for (int s = 0; s < 2; ++s) {
        int bs = s == 0 ? b1 : b2;
        cand[s] = permanent_ryser(m.submatrix(A.without(bs).with(a), B.without(a).with(bs)));
        // positive: need cand >= -lambda/2; negative: mirrored cand <= lambda/2
        bool safe_side = positive ? cand[s] >= 0 : cand[s] <= 0;
        if (safe_side || half.compare_abs(int_abs(cand[s])) <= 0) {
            out.i = bs;
            out.j = a;
            out.b_prime = B.with(bs);
            out.minor_sum = cand[s] + per0;
            if (half.compare_abs(int_abs(out.minor_sum)) < 0)
                throw TheoremViolation("choose_noncancelling_pair: |minor sum| < lambda/2");
            return out;
        }
    }
    out.i = b1;
    out.j = b2;
    out.b_prime = B.without(a).with(b1).with(b2);
    out.minor_sum = cand[0] + cand[1];
    if (half.compare_abs(int_abs(out.minor_sum)) < 0)
        throw TheoremViolation("choose_noncancelling_pair: |minor sum| < lambda/2");
    return out;
}

}  // namespace

NoncancellingPair choose_noncancelling_pair(const SymmetricMatrix& m, const IndexSet& A,
                                            const IndexSet& B, int a, int b1, int b2,
                                            const HeavinessThreshold& lambda) {
    return choose_pair_impl(m, A, B, a, b1, b2, Heaviness(lambda));
}

NoncancellingPair choose_noncancelling_pair(const SymmetricMatrix& m, const IndexSet& A,
                                            const IndexSet& B, int a, int b1, int b2,
                                            const Heaviness& lambda) {
    return choose_pair_impl(m, A, B, a, b1, b2, lambda);
}

}  // namespace permlab
