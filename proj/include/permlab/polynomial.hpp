#pragma once

#include "permlab/index_set.hpp"
#include "permlab/numeric.hpp"

#include <map>
#include <set>
#include <utility>
#include <vector>

namespace permlab {

// Multilinear quadratic polynomial over +-1 variables x_1..x_n. Square
// terms fold into the constant at insertion (x_i^2 = 1 on the hypercube),
// so the stored form is always multilinear. Zero coefficients are never
// stored.
class QuadraticPolynomial {
  public:
    using Pair = std::pair<int, int>;  // ordered i < j

    QuadraticPolynomial() = default;
    explicit QuadraticPolynomial(int n_vars) : n_vars_(n_vars) {
        if (n_vars < 0) throw ContractViolation("QuadraticPolynomial: negative variable count");
    }

    int n_vars() const { return n_vars_; }
    const Int& constant() const { return constant_; }
    const std::map<int, Int>& linear() const { return linear_; }
    const std::map<Pair, Int>& quadratic() const { return quadratic_; }
    bool is_linear() const { return quadratic_.empty(); }

    void add_constant(const Int& c) { constant_ += c; }
    void add_linear(int i, const Int& c) {
        check_var(i);
        if (c == 0) return;
        auto [it, inserted] = linear_.try_emplace(i, c);
        if (!inserted && (it->second += c) == 0) linear_.erase(it);
    }
    void add_quadratic(int i, int j, const Int& c) {
        check_var(i);
        check_var(j);
        if (i == j) {  // x_i^2 == 1
            constant_ += c;
            return;
        }
        if (c == 0) return;
        Pair key = i < j ? Pair{i, j} : Pair{j, i};
        auto [it, inserted] = quadratic_.try_emplace(key, c);
        if (!inserted && (it->second += c) == 0) quadratic_.erase(it);
    }

    Int coefficient(int i) const {
        auto it = linear_.find(i);
        return it == linear_.end() ? Int(0) : it->second;
    }
    Int coefficient(int i, int j) const {
        if (i == j) throw ContractViolation("coefficient: no square terms in multilinear form");
        Pair key = i < j ? Pair{i, j} : Pair{j, i};
        auto it = quadratic_.find(key);
        return it == quadratic_.end() ? Int(0) : it->second;
    }

    // signs[i-1] in {-1, +1}.
    Int evaluate(const std::vector<int>& signs) const;

    // Fixes a subset of variables to +-1 values; the result is a polynomial
    // in the remaining variables (same variable numbering).
    QuadraticPolynomial substitute(const std::map<int, int>& fixed) const;

    // Variables that occur in some (linear or quadratic) term with
    // |coefficient| >= r.
    std::set<int> variables_in_terms_at_least(const Rat& r) const;

    // Removes every quadratic term x_i x_j with both endpoints outside
    // `cover`; returns the removed coefficients.
    QuadraticPolynomial drop_quadratic_outside(const IndexSet& cover,
                                               std::vector<Int>* removed = nullptr) const;

  private:
    void check_var(int i) const {
        if (i < 1 || i > n_vars_)
            throw ContractViolation("QuadraticPolynomial: variable index " + std::to_string(i) +
                                    " outside 1.." + std::to_string(n_vars_));
    }

    int n_vars_ = 0;
    Int constant_ = 0;
    std::map<int, Int> linear_;
    std::map<Pair, Int> quadratic_;
};

}  // namespace permlab
