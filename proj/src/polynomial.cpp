#include "permlab/polynomial.hpp"

namespace permlab {

Int QuadraticPolynomial::evaluate(const std::vector<int>& signs) const {
    if (static_cast<int>(signs.size()) < n_vars_)
        throw ContractViolation("evaluate: sign vector shorter than variable count");
    for (int i = 0; i < n_vars_; ++i)
        if (signs[i] != 1 && signs[i] != -1)
            throw ContractViolation("evaluate: signs must be +-1");
    Int value = constant_;
    for (const auto& [i, c] : linear_) value += signs[i - 1] > 0 ? c : Int(-c);
    for (const auto& [ij, c] : quadratic_)
        value += signs[ij.first - 1] * signs[ij.second - 1] > 0 ? c : Int(-c);
    return value;
}

QuadraticPolynomial QuadraticPolynomial::substitute(const std::map<int, int>& fixed) const {
    for (const auto& [i, s] : fixed) {
        check_var(i);
        if (s != 1 && s != -1) throw ContractViolation("substitute: values must be +-1");
    }
    QuadraticPolynomial out(n_vars_);
    out.constant_ = constant_;
    for (const auto& [i, c] : linear_) {
        auto it = fixed.find(i);
        if (it == fixed.end())
            out.add_linear(i, c);
        else
            out.constant_ += it->second > 0 ? c : Int(-c);
    }
    for (const auto& [ij, c] : quadratic_) {
        auto fi = fixed.find(ij.first);
        auto fj = fixed.find(ij.second);
        if (fi == fixed.end() && fj == fixed.end()) {
            out.add_quadratic(ij.first, ij.second, c);
        } else if (fi != fixed.end() && fj != fixed.end()) {
            out.constant_ += fi->second * fj->second > 0 ? c : Int(-c);
        } else if (fi != fixed.end()) {
            out.add_linear(ij.second, fi->second > 0 ? c : Int(-c));
        } else {
            out.add_linear(ij.first, fj->second > 0 ? c : Int(-c));
        }
    }
    return out;
}

std::set<int> QuadraticPolynomial::variables_in_terms_at_least(const Rat& r) const {
    std::set<int> vars;
    for (const auto& [i, c] : linear_)
        if (Rat(int_abs(c)) >= r) vars.insert(i);
    for (const auto& [ij, c] : quadratic_)
        if (Rat(int_abs(c)) >= r) {
            vars.insert(ij.first);
            vars.insert(ij.second);
        }
    return vars;
}

QuadraticPolynomial QuadraticPolynomial::drop_quadratic_outside(const IndexSet& cover,
                                                                std::vector<Int>* removed) const {
    QuadraticPolynomial out(n_vars_);
    out.constant_ = constant_;
    out.linear_ = linear_;
    for (const auto& [ij, c] : quadratic_) {
        if (!cover.contains(ij.first) && !cover.contains(ij.second)) {
            if (removed) removed->push_back(c);
        } else {
            out.quadratic_.emplace(ij, c);
        }
    }
    return out;
}

}  // namespace permlab
