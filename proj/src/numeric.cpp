#include "permlab/numeric.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace permlab {

Int int_pow(Int base, unsigned long exp) {
    Int result = 1;
    while (exp != 0) {
        if (exp & 1) result *= base;
        base *= base;
        exp >>= 1;
    }
    return result;
}

Rat rat_pow(const Rat& base, long long exp) {
    if (exp >= 0) {
        Rat r(int_pow(numerator(base), static_cast<unsigned long>(exp)),
              int_pow(denominator(base), static_cast<unsigned long>(exp)));
        return r;
    }
    if (base == 0) throw ContractViolation("rat_pow: zero base with negative exponent");
    Rat r(int_pow(denominator(base), static_cast<unsigned long>(-exp)),
          int_pow(numerator(base), static_cast<unsigned long>(-exp)));
    return r;
}

Rat parse_rational(const std::string& text) {
    if (text.empty()) throw UsageError("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Int num(text.substr(0, slash));
        Int den(text.substr(slash + 1));
        if (den == 0) throw UsageError("zero denominator in '" + text + "'");
        return Rat(num, den);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rat(Int(text));
    std::string head = text.substr(0, dot);
    std::string tail = text.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (head == "-" || head.empty()) head = "0";
    Int whole(head);
    Int frac = tail.empty() ? Int(0) : Int(tail);
    Int den = int_pow(10, static_cast<unsigned long>(tail.size()));
    Rat r = Rat(int_abs(whole)) + Rat(frac, den);
    return neg ? Rat(-r) : r;
}

std::string rat_to_string(const Rat& value) {
    if (denominator(value) == 1) return numerator(value).str();
    return numerator(value).str() + "/" + denominator(value).str();
}

double rat_to_double(const Rat& value) { return value.convert_to<double>(); }

int compare_count_to_power(const Int& count, const Int& c, const Int& m, unsigned num, unsigned den) {
    if (count < 0 || c < 0 || m < 0) throw ContractViolation("compare_count_to_power: negative input");
    Int lhs = int_pow(count, den);
    Int rhs = int_pow(c, den) * int_pow(m, num);
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

void rat_root_bounds(const Rat& base, const Rat& exponent, unsigned bits, Rat& lo, Rat& hi) {
    if (base < 1 || exponent < 0) throw ContractViolation("rat_root_bounds: needs base >= 1, exponent >= 0");
    Int p = numerator(exponent), q = denominator(exponent);
    // base^(p/q): bisect y with y^q <=> base^p on a dyadic grid.
    Rat target = rat_pow(base, p.convert_to<long long>());
    Rat low = 1;
    Rat high = target < 1 ? Rat(1) : target + 1;
    unsigned long qq = q.convert_to<unsigned long>();
    for (unsigned i = 0; i < bits + 64; ++i) {
        Rat mid = (low + high) / 2;
        if (rat_pow(mid, static_cast<long long>(qq)) <= target)
            low = mid;
        else
            high = mid;
        if ((high - low) * (Int(1) << bits) <= low) break;
    }
    lo = low;
    hi = high;
}

}  // namespace permlab
