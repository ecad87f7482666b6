#include "permlab/anticoncentration.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace permlab {

namespace {

Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    Int r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

Int ceil_rat(const Rat& x) {
    Int num = numerator(x), den = denominator(x);
    Int q = num / den;
    if (num > q * den) ++q;
    return q;
}

std::vector<std::pair<Int, Rat>> distribution_linear(const QuadraticPolynomial& f) {
    std::map<Int, Int> counts;
    counts[f.constant()] = 1;
    int vars = 0;
    for (const auto& [i, c] : f.linear()) {
        ++vars;
        std::map<Int, Int> next;
        for (const auto& [v, cnt] : counts) {
            next[v + c] += cnt;
            next[v - c] += cnt;
        }
        counts.swap(next);
    }
    Int denom = Int(1) << vars;
    std::vector<std::pair<Int, Rat>> out;
    out.reserve(counts.size());
    for (const auto& [v, cnt] : counts) out.emplace_back(v, Rat(cnt, denom));
    return out;
}

std::vector<std::pair<Int, Rat>> distribution_enumerate(const QuadraticPolynomial& f) {
    // Enumerate only over variables that actually occur.
    std::set<int> support;
    for (const auto& [i, c] : f.linear()) support.insert(i);
    for (const auto& [ij, c] : f.quadratic()) {
        support.insert(ij.first);
        support.insert(ij.second);
    }
    std::vector<int> vars(support.begin(), support.end());
    int s = static_cast<int>(vars.size());
    if (s > 24) throw CapacityError("exact_distribution: more than 24 effective variables");

    std::vector<int> signs(static_cast<size_t>(f.n_vars()), 1);
    std::map<Int, Int> counts;
    Int value = f.evaluate(signs);
    counts[value] = 1;
    std::uint64_t prev_gray = 0;
    for (std::uint64_t k = 1; k < (std::uint64_t{1} << s); ++k) {
        std::uint64_t gray = k ^ (k >> 1);
        int pos = __builtin_ctzll(gray ^ prev_gray);
        int var = vars[pos];
        // Flipping x_var changes f by -2 * x_var * (lin_var + sum_j q_{var,j} x_j).
        Int slope = f.coefficient(var);
        for (const auto& [ij, c] : f.quadratic()) {
            if (ij.first == var)
                slope += signs[ij.second - 1] > 0 ? c : Int(-c);
            else if (ij.second == var)
                slope += signs[ij.first - 1] > 0 ? c : Int(-c);
        }
        value -= 2 * (signs[var - 1] > 0 ? slope : Int(-slope));
        signs[var - 1] = -signs[var - 1];
        ++counts[value];
        prev_gray = gray;
    }
    Int denom = Int(1) << s;
    std::vector<std::pair<Int, Rat>> out;
    out.reserve(counts.size());
    for (const auto& [v, cnt] : counts) out.emplace_back(v, Rat(cnt, denom));
    return out;
}

}  // namespace

std::vector<std::pair<Int, Rat>> exact_distribution(const QuadraticPolynomial& f) {
    if (f.is_linear()) return distribution_linear(f);
    return distribution_enumerate(f);
}

Rat tail_probability(const QuadraticPolynomial& f, const Rat& bound) {
    Rat prob = 0;
    for (const auto& [v, p] : exact_distribution(f))
        if (Rat(int_abs(v)) <= bound) prob += p;
    return prob;
}

EloTailResult elo_tail(const QuadraticPolynomial& f, const Rat& r, const Rat& t) {
    if (!f.is_linear()) throw ContractViolation("elo_tail: polynomial must be linear");
    if (r <= 0 || t < 1) throw ContractViolation("elo_tail: needs r > 0 and t >= 1");
    EloTailResult res;
    for (const auto& [i, c] : f.linear())
        if (Rat(int_abs(c)) >= r) ++res.m;
    if (res.m == 0) throw ContractViolation("elo_tail: no degree-1 coefficient reaches r");

    res.exact_prob = tail_probability(f, t * r);
    unsigned m = static_cast<unsigned>(res.m);
    res.binomial_bound = Rat(ceil_rat(t) + 1) * Rat(binomial(m, m / 2), Int(1) << m);
    res.simple_bound = 3.0 * rat_to_double(t) / std::sqrt(static_cast<double>(res.m));
    // binomial <= 3t/sqrt(m)  <=>  binomial^2 * m <= 9 t^2 (both sides >= 0)
    res.chain_ok = res.exact_prob <= res.binomial_bound &&
                   res.binomial_bound * res.binomial_bound * res.m <= 9 * t * t;
    return res;
}

bool fact_linear_nondegenerate_check(const QuadraticPolynomial& f, const Rat& r) {
    if (!f.is_linear())
        throw ContractViolation("fact_linear_nondegenerate_check: polynomial must be linear");
    if (r <= 0) throw ContractViolation("fact_linear_nondegenerate_check: needs r > 0");
    bool qualified = Rat(int_abs(f.constant())) >= r;
    for (const auto& [i, c] : f.linear())
        qualified = qualified || Rat(int_abs(c)) >= r;
    if (!qualified)
        throw ContractViolation("fact_linear_nondegenerate_check: no coefficient reaches r");
    Rat prob = 0;
    for (const auto& [v, p] : exact_distribution(f))
        if (Rat(int_abs(v)) < r) prob += p;
    return prob <= Rat(1, 2);
}

bool fact_quadratic_nondegenerate_check(const QuadraticPolynomial& f, const Rat& r) {
    if (r <= 0) throw ContractViolation("fact_quadratic_nondegenerate_check: needs r > 0");
    bool qualified = false;
    for (const auto& [ij, c] : f.quadratic())
        qualified = qualified || Rat(int_abs(c)) >= r;
    if (!qualified)
        throw ContractViolation(
            "fact_quadratic_nondegenerate_check: no degree-2 coefficient reaches r");
    Rat prob = 0;
    for (const auto& [v, p] : exact_distribution(f))
        if (Rat(int_abs(v)) < r) prob += p;
    return prob <= Rat(3, 4);
}

MnvCheckResult mnv_check(const QuadraticPolynomial& f, const Rat& r, double C) {
    MnvCheckResult res;
    res.nu = matching_number(coefficient_graph(f, r));
    if (res.nu < 3) throw ContractViolation("mnv_check: needs matching number >= 3");
    res.exact_prob = tail_probability(f, r);
    res.bound = std::pow(std::log(static_cast<double>(res.nu)), C) /
                std::sqrt(static_cast<double>(res.nu));
    return res;
}

Rat markov_fraction_bound(const Rat& p, const Rat& q) {
    if (!(1 > p && p > q && q > 0))
        throw ContractViolation("markov_fraction_bound: needs 1 > p > q > 0");
    return (p - q) / (1 - q);
}

}  // namespace permlab
