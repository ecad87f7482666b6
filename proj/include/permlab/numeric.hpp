#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace permlab {

// Exact arithmetic everywhere outside the Ryser fast path. Heaviness
// comparisons at boundaries like lambda/2^(S-T) or lambda/(4n^4) must be
// deterministic, so no floating point enters any kernel decision.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// HeavinessThreshold: exact rational lambda > 0.
using HeavinessThreshold = Rat;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input exceeds a hard implementation limit (n > 63 index sets, n > 12
// naive permanents, > 24 enumeration variables, ...).
struct CapacityError : Error {
    using Error::Error;
};

// Caller broke a documented precondition.
struct ContractViolation : Error {
    using Error::Error;
};

// An always-true (theorem-level) invariant failed. Must never fire; the CLI
// maps this to a nonzero exit status.
struct TheoremViolation : Error {
    using Error::Error;
};

struct UsageError : Error {
    using Error::Error;
};

inline Int int_from_i128(__int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    Int hi = static_cast<std::uint64_t>(u >> 64);
    Int r = (hi << 64) | static_cast<std::uint64_t>(u);
    return neg ? Int(-r) : r;
}

inline Int int_abs(const Int& v) { return v < 0 ? Int(-v) : v; }

Int int_pow(Int base, unsigned long exp);
Rat rat_pow(const Rat& base, long long exp);

// Parses "p/q", plain integers, and decimal literals ("0.05" -> 1/20),
// all into exact rationals.
Rat parse_rational(const std::string& text);

// "p/q" when non-integral, plain digits otherwise. CSV uses this verbatim.
std::string rat_to_string(const Rat& value);

double rat_to_double(const Rat& value);

// Exact sign of count - c * m^(num/den) for nonnegative integers, by
// comparing count^den with c^den * m^num. Thresholds like m^(1/6) and
// 6*m^(1/6) compare against integer counts without any rounding.
int compare_count_to_power(const Int& count, const Int& c, const Int& m, unsigned num, unsigned den);

// Enclosure of base^(p/q) (base >= 1, p/q >= 0) with hi/lo <= 1 + 2^-bits.
// Used only for reporting; never for kernel decisions.
void rat_root_bounds(const Rat& base, const Rat& exponent, unsigned bits, Rat& lo, Rat& hi);

}  // namespace permlab
