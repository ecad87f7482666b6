#include "permlab/moments.hpp"

#include "permlab/matrix.hpp"
#include "permlab/permanent.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace permlab {

PermutationSignature signature(const std::vector<int>& pi) {
    int n = static_cast<int>(pi.size());
    std::vector<bool> seen(static_cast<size_t>(n) + 1, false);
    for (int v : pi) {
        if (v < 1 || v > n || seen[static_cast<size_t>(v)])
            throw ContractViolation("signature: not a permutation of 1..n");
        seen[static_cast<size_t>(v)] = true;
    }
    PermutationSignature sig;
    sig.two_cycle_support = IndexSet(n);
    for (int i = 1; i <= n; ++i) {
        int image = pi[i - 1];
        if (image != i && pi[image - 1] == i) sig.two_cycle_support.insert(i);
    }
    for (int i = 1; i <= n; ++i) {
        if (sig.two_cycle_support.contains(i)) continue;
        int image = pi[i - 1];
        sig.family.emplace_back(std::min(i, image), std::max(i, image));
    }
    std::sort(sig.family.begin(), sig.family.end());
    sig.family.erase(std::unique(sig.family.begin(), sig.family.end()), sig.family.end());
    return sig;
}

namespace {

// Canonical byte encoding of a signature for hashing: support mask then the
// sorted pair list.
std::string encode_signature(const PermutationSignature& sig) {
    std::string key;
    key.reserve(8 + sig.family.size() * 2);
    std::uint64_t mask = sig.two_cycle_support.bits();
    for (int b = 0; b < 8; ++b) key.push_back(static_cast<char>((mask >> (8 * b)) & 0xff));
    for (auto [lo, hi] : sig.family) {
        key.push_back(static_cast<char>(lo));
        key.push_back(static_cast<char>(hi));
    }
    return key;
}

Int factorial(int n) {
    Int r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

Int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Int r = 1;
    for (int i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

}  // namespace

Int second_moment_exact(int n) {
    if (n < 1) throw ContractViolation("second_moment_exact: n must be >= 1");
    if (n > 11) throw CapacityError("second_moment_exact: n > 11 enumerates too many permutations");
    std::vector<int> pi(static_cast<size_t>(n));
    std::iota(pi.begin(), pi.end(), 1);
    std::unordered_map<std::string, std::uint64_t> classes;
    do {
        ++classes[encode_signature(signature(pi))];
    } while (std::next_permutation(pi.begin(), pi.end()));
    Int total = 0;
    for (const auto& [key, count] : classes) total += Int(count) * count;
    return total;
}

Rat second_moment_enumerate(int n) {
    if (n < 1) throw ContractViolation("second_moment_enumerate: n must be >= 1");
    if (n > 4) throw CapacityError("second_moment_enumerate: n > 4 enumerates too many matrices");
    int cells = n * (n + 1) / 2;
    Int sum = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
        DenseMatrix m(n, n);
        int bit = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                std::int64_t v = (mask >> bit++) & 1 ? 1 : -1;
                m.at(i, j) = v;
                m.at(j, i) = v;
            }
        Int per = permanent_naive(m);
        sum += per * per;
    }
    return Rat(sum, Int(1) << cells);
}

QClassCheck q_class_bound_check(int n, int k) {
    if (n < 1 || k < 0 || k > n) throw ContractViolation("q_class_bound_check: needs 0 <= k <= n");
    if (n > 10) throw CapacityError("q_class_bound_check: n > 10");
    QClassCheck res;
    res.count = 0;
    std::vector<int> pi(static_cast<size_t>(n));
    std::iota(pi.begin(), pi.end(), 1);
    do {
        if (signature(pi).two_cycle_support.size() == k) ++res.count;
    } while (std::next_permutation(pi.begin(), pi.end()));

    res.bound_exact = (k % 2 == 0);
    Int base = binomial(n, k) * factorial(n - k);
    if (res.bound_exact) {
        res.bound = base * int_pow(k, static_cast<unsigned long>(k / 2));
        res.bound_real = res.bound.convert_to<double>();
        res.ok = res.count <= res.bound;
    } else {
        res.bound = 0;
        res.bound_real =
            base.convert_to<double>() * std::pow(static_cast<double>(k), k / 2.0);
        res.ok = res.count == 0;  // odd k admits no 2-cycle support of odd size
    }
    return res;
}

MarkovTailBound markov_upper_tail(int n, const Rat& eps) {
    if (eps < 0) throw ContractViolation("markov_upper_tail: eps must be >= 0");
    Int moment = second_moment_exact(n);
    Rat exponent = Rat(n) + 2 * eps * n;
    MarkovTailBound res;
    if (denominator(exponent) == 1) {
        Rat denom = rat_pow(Rat(n), numerator(exponent).convert_to<long long>());
        res.lower = res.upper = Rat(moment) / denom;
        res.exact = true;
        return res;
    }
    Int whole = numerator(exponent) / denominator(exponent);
    Rat frac = exponent - Rat(whole);
    Rat lo, hi;
    rat_root_bounds(Rat(n), frac, 40, lo, hi);
    Rat base_pow = rat_pow(Rat(n), whole.convert_to<long long>());
    res.lower = Rat(moment) / (base_pow * hi);
    res.upper = Rat(moment) / (base_pow * lo);
    res.exact = false;
    return res;
}

}  // namespace permlab
