#pragma once

#include "permlab/index_set.hpp"
#include "permlab/polynomial.hpp"

#include <utility>
#include <vector>

namespace permlab {

// G^(r)(f): vertices are variable indices 1..n_vars, with an edge {i,j}
// exactly when |coefficient of x_i x_j| >= r.
struct CoefficientGraph {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;  // i < j, lexicographically sorted
};

CoefficientGraph coefficient_graph(const QuadraticPolynomial& f, const Rat& r);

// Exact maximum matching size, via augmenting paths with blossom
// contraction (the graphs here are general, not bipartite).
int matching_number(const CoefficientGraph& g);

// Endpoints of a greedily chosen maximal set of disjoint edges (edge order:
// lexicographic). Covers every edge and has size <= 2 * matching_number.
IndexSet greedy_vertex_cover(const CoefficientGraph& g);

}  // namespace permlab
