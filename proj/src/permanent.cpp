#include "permlab/permanent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace permlab {

Int permanent_naive(const DenseMatrix& m) {
    if (m.rows != m.cols) throw ContractViolation("permanent: matrix must be square");
    int n = m.rows;
    if (n > 12) throw CapacityError("permanent_naive: n > 12 (factorial cost); use permanent_ryser");
    if (n == 0) return 1;  // empty product over the empty permutation
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Int sum = 0;
    do {
        __int128 prod = 1;
        for (int i = 0; i < n && prod != 0; ++i) prod *= m.at(i, perm[i]);
        sum += int_from_i128(prod);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

namespace {

// Fast path: row sums in int64, term products and the accumulator in checked
// __int128. Returns false on any overflow.
bool ryser_i128(const DenseMatrix& m, Int& out) {
    int n = m.rows;
    std::vector<std::int64_t> row_sum(n, 0);
    __int128 total = 0;
    std::uint64_t prev_gray = 0;
    for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
        std::uint64_t gray = k ^ (k >> 1);
        int j = __builtin_ctzll(gray ^ prev_gray);
        if (gray & (std::uint64_t{1} << j)) {
            for (int i = 0; i < n; ++i)
                if (__builtin_add_overflow(row_sum[i], m.at(i, j), &row_sum[i])) return false;
        } else {
            for (int i = 0; i < n; ++i)
                if (__builtin_sub_overflow(row_sum[i], m.at(i, j), &row_sum[i])) return false;
        }
        __int128 prod = row_sum[0];
        for (int i = 1; i < n && prod != 0; ++i)
            if (__builtin_mul_overflow(prod, static_cast<__int128>(row_sum[i]), &prod)) return false;
        if (__builtin_popcountll(gray) & 1) {
            if (__builtin_sub_overflow(total, prod, &total)) return false;
        } else {
            if (__builtin_add_overflow(total, prod, &total)) return false;
        }
        prev_gray = gray;
    }
    out = int_from_i128(n % 2 ? -total : total);
    return true;
}

Int ryser_bigint(const DenseMatrix& m) {
    int n = m.rows;
    std::vector<Int> row_sum(n, Int(0));
    Int total = 0, prod;
    std::uint64_t prev_gray = 0;
    for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
        std::uint64_t gray = k ^ (k >> 1);
        int j = __builtin_ctzll(gray ^ prev_gray);
        if (gray & (std::uint64_t{1} << j))
            for (int i = 0; i < n; ++i) row_sum[i] += m.at(i, j);
        else
            for (int i = 0; i < n; ++i) row_sum[i] -= m.at(i, j);
        prod = row_sum[0];
        for (int i = 1; i < n && prod != 0; ++i) prod *= row_sum[i];
        if (__builtin_popcountll(gray) & 1)
            total -= prod;
        else
            total += prod;
        prev_gray = gray;
    }
    return n % 2 ? Int(-total) : total;
}

}  // namespace

Int permanent_ryser(const DenseMatrix& m) {
    if (m.rows != m.cols) throw ContractViolation("permanent: matrix must be square");
    int n = m.rows;
    if (n == 0) return 1;
    if (n > 62) throw CapacityError("permanent_ryser: n > 62 unsupported");
    Int out;
    if (n <= 33 && ryser_i128(m, out)) return out;
    return ryser_bigint(m);
}

Int permanent_submatrix(const SymmetricMatrix& m, const IndexSet& A, const IndexSet& B) {
    if (A.size() != B.size()) throw ContractViolation("permanent_submatrix: |A| != |B|");
    return permanent_ryser(m.submatrix(A, B));
}

bool is_heavy(const SymmetricMatrix& m, const IndexSet& A, const IndexSet& B,
              const HeavinessThreshold& lambda) {
    return is_heavy(permanent_submatrix(m, A, B), lambda);
}

int Heaviness::compare_abs(const Int& abs_value) const {
    if (abs_value < 0) throw ContractViolation("compare_abs: negative input");
    if (rational()) {
        Rat v = rational_value();
        Rat x(abs_value);
        return x < v ? -1 : (x > v ? 1 : 0);
    }
    // |x| <=> (b1/b2) * K^(w + p/q):  (x * b2)^q * k2^p <=> (b1 * K^w)^q * k1^p
    unsigned long q = denominator(exponent_).convert_to<unsigned long>();
    Int whole = numerator(exponent_) / denominator(exponent_);
    unsigned long p_rem = (numerator(exponent_) % denominator(exponent_)).convert_to<unsigned long>();
    Rat effective_base = base_ * rat_pow(k_, whole.convert_to<long long>());
    Int lhs = int_pow(abs_value * denominator(effective_base), q) * int_pow(denominator(k_), p_rem);
    Int rhs = int_pow(numerator(effective_base), q) * int_pow(numerator(k_), p_rem);
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

Rat Heaviness::rational_value() const {
    if (!rational()) throw ContractViolation("Heaviness: value is irrational");
    if (k_ == 1) return base_;
    return base_ * rat_pow(k_, numerator(exponent_).convert_to<long long>());
}

Rat Heaviness::rational_lower_bound(unsigned bits) const {
    if (rational()) return rational_value();
    Int whole = numerator(exponent_) / denominator(exponent_);
    Rat frac = exponent_ - Rat(whole);
    Rat lo, hi;
    rat_root_bounds(k_, frac, bits, lo, hi);
    return base_ * rat_pow(k_, whole.convert_to<long long>()) * lo;
}

double Heaviness::approx() const {
    double b = rat_to_double(base_);
    if (k_ == 1) return b;
    return b * std::pow(rat_to_double(k_), rat_to_double(exponent_));
}

std::string Heaviness::str() const {
    if (rational()) return rat_to_string(rational_value());
    return rat_to_string(base_) + "*" + rat_to_string(k_) + "^(" + rat_to_string(exponent_) + ")";
}

}  // namespace permlab
