#pragma once

#include "permlab/graph.hpp"
#include "permlab/polynomial.hpp"

#include <utility>
#include <vector>

namespace permlab {

// Full distribution of f(xi) for xi uniform on {-1,1}^n, as (value, exact
// probability) pairs sorted by value. Probabilities sum to exactly 1.
// Linear polynomials go through sum convolution; general quadratics through
// Gray-code hypercube enumeration, capped at 24 effective variables.
std::vector<std::pair<Int, Rat>> exact_distribution(const QuadraticPolynomial& f);

// Exact Pr(|f(xi)| <= bound) from the distribution.
Rat tail_probability(const QuadraticPolynomial& f, const Rat& bound);

struct EloTailResult {
    int m = 0;            // degree-1 coefficients with |coeff| >= r
    Rat exact_prob;       // Pr(|f| <= t*r)
    Rat binomial_bound;   // (ceil(t)+1) * C(m, floor(m/2)) * 2^-m
    double simple_bound;  // 3t / sqrt(m)
    bool chain_ok;        // exact <= binomial <= 3t/sqrt(m), checked exactly
};

// The Erdos--Littlewood--Offord tail chain for a linear polynomial f:
// requires t >= 1, r > 0 and at least one degree-1 coefficient with
// |coeff| >= r. Both inequalities of the chain are decided in exact
// arithmetic (the square of the simple bound is rational).
EloTailResult elo_tail(const QuadraticPolynomial& f, const Rat& r, const Rat& t);

// Verifies Pr(|f(xi)| < r) <= 1/2 for a linear f with some coefficient
// (constant included) of absolute value >= r. Always true; returns the
// verdict so sweeps can count violations.
bool fact_linear_nondegenerate_check(const QuadraticPolynomial& f, const Rat& r);

// Verifies Pr(|f(xi)| < r) <= 3/4 for a quadratic f with some multilinear
// degree-2 coefficient of absolute value >= r.
bool fact_quadratic_nondegenerate_check(const QuadraticPolynomial& f, const Rat& r);

struct MnvCheckResult {
    int nu = 0;
    Rat exact_prob;  // Pr(|f| <= r)
    double bound;    // (log nu)^C / sqrt(nu); reported, never asserted
};

// Probe of the Meka--Nguyen--Vu bound: the constant C is unspecified, so
// this reports the pair (exact probability, bound) for a supplied C.
// Requires nu(G^(r)(f)) >= 3.
MnvCheckResult mnv_check(const QuadraticPolynomial& f, const Rat& r, double C);

// (p - q) / (1 - q) for 1 > p > q > 0: the guaranteed probability that a
// q-fraction of m events of probability >= p occur simultaneously.
Rat markov_fraction_bound(const Rat& p, const Rat& q);

}  // namespace permlab
