#include "permlab/graph.hpp"

#include <algorithm>
#include <queue>

namespace permlab {

CoefficientGraph coefficient_graph(const QuadraticPolynomial& f, const Rat& r) {
    if (r <= 0) throw ContractViolation("coefficient_graph: threshold must be positive");
    CoefficientGraph g;
    g.n_vertices = f.n_vars();
    for (const auto& [ij, c] : f.quadratic())
        if (Rat(int_abs(c)) >= r) g.edges.push_back(ij);
    return g;  // map iteration order is already lexicographic
}

namespace {

// Standard blossom algorithm (0-based vertices internally).
class BlossomMatcher {
  public:
    explicit BlossomMatcher(const CoefficientGraph& g) : n_(g.n_vertices), adj_(n_) {
        for (auto [i, j] : g.edges) {
            adj_[i - 1].push_back(j - 1);
            adj_[j - 1].push_back(i - 1);
        }
        match_.assign(n_, -1);
    }

    int run() {
        int size = 0;
        for (int v = 0; v < n_; ++v)
            if (match_[v] == -1 && find_augmenting_path(v)) ++size;
        return size;
    }

  private:
    int lowest_common_ancestor(int a, int b) {
        std::vector<bool> seen(n_, false);
        for (;;) {
            a = base_[a];
            seen[a] = true;
            if (match_[a] == -1) break;
            a = parent_[match_[a]];
        }
        for (;;) {
            b = base_[b];
            if (seen[b]) return b;
            b = parent_[match_[b]];
        }
    }

    void mark_path(int v, int b, int child, std::vector<bool>& in_blossom) {
        while (base_[v] != b) {
            in_blossom[base_[v]] = true;
            in_blossom[base_[match_[v]]] = true;
            parent_[v] = child;
            child = match_[v];
            v = parent_[match_[v]];
        }
    }

    bool find_augmenting_path(int root) {
        used_.assign(n_, false);
        parent_.assign(n_, -1);
        base_.resize(n_);
        for (int i = 0; i < n_; ++i) base_[i] = i;
        std::queue<int> q;
        q.push(root);
        used_[root] = true;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int to : adj_[v]) {
                if (base_[v] == base_[to] || match_[v] == to) continue;
                if (to == root || (match_[to] != -1 && parent_[match_[to]] != -1)) {
                    // Odd cycle: contract the blossom.
                    int b = lowest_common_ancestor(v, to);
                    std::vector<bool> in_blossom(n_, false);
                    mark_path(v, b, to, in_blossom);
                    mark_path(to, b, v, in_blossom);
                    for (int i = 0; i < n_; ++i)
                        if (in_blossom[base_[i]]) {
                            base_[i] = b;
                            if (!used_[i]) {
                                used_[i] = true;
                                q.push(i);
                            }
                        }
                } else if (parent_[to] == -1) {
                    parent_[to] = v;
                    if (match_[to] == -1) {
                        augment(to);
                        return true;
                    }
                    used_[match_[to]] = true;
                    q.push(match_[to]);
                }
            }
        }
        return false;
    }

    void augment(int v) {
        while (v != -1) {
            int pv = parent_[v], next = match_[pv];
            match_[v] = pv;
            match_[pv] = v;
            v = next;
        }
    }

    int n_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> match_, parent_, base_;
    std::vector<bool> used_;
};

}  // namespace

int matching_number(const CoefficientGraph& g) {
    if (g.edges.empty()) return 0;
    return BlossomMatcher(g).run();
}

IndexSet greedy_vertex_cover(const CoefficientGraph& g) {
    IndexSet cover(g.n_vertices);
    for (auto [i, j] : g.edges)
        if (!cover.contains(i) && !cover.contains(j)) {
            cover.insert(i);
            cover.insert(j);
        }
    return cover;
}

}  // namespace permlab
