#pragma once

#include "permlab/index_set.hpp"
#include "permlab/rng.hpp"

#include <cstdint>
#include <vector>

namespace permlab {

// Plain row-major integer matrix; the permanent kernels operate on these.
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> a;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    std::int64_t& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    std::int64_t at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static DenseMatrix ones(int n) {
        DenseMatrix m(n, n);
        for (auto& v : m.a) v = 1;
        return m;
    }
    static DenseMatrix identity(int n) {
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
};

// Growing random symmetric matrix, coupled so that M_n is always the
// top-left block of M_{n+1}. Exposure step k draws row k's off-diagonal
// entries then the diagonal entry, from its own RNG substream, which makes
// sample(n) and any chain of extend() calls agree bit for bit.
//
// Immutable after construction: extended() returns a new value.
class SymmetricMatrix {
  public:
    SymmetricMatrix() = default;

    static SymmetricMatrix sample(int n, const EntryDistribution& dist, std::uint64_t root_seed,
                                  std::uint64_t stream_id);

    SymmetricMatrix extended() const;

    int dim() const { return n_; }
    std::uint64_t root_seed() const { return root_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    const EntryDistribution& dist() const { return dist_; }

    // 1-based, symmetric.
    std::int64_t entry(int i, int j) const {
        check_index(i);
        check_index(j);
        return i >= j ? tri_[tri_index(i, j)] : tri_[tri_index(j, i)];
    }

    // |A| x |B| block (rows A, columns B), both in ascending index order.
    DenseMatrix submatrix(const IndexSet& A, const IndexSet& B) const;

    DenseMatrix dense() const { return submatrix(IndexSet::full(n_), IndexSet::full(n_)); }

    // Exact check that the top-left block of *this equals m (tests the
    // prefix-coupling invariant).
    bool prefix_equals(const SymmetricMatrix& m) const;

  private:
    static size_t tri_index(int i, int j) {  // i >= j, both 1-based
        return static_cast<size_t>(i - 1) * i / 2 + (j - 1);
    }
    void check_index(int i) const {
        if (i < 1 || i > n_)
            throw ContractViolation("SymmetricMatrix: index " + std::to_string(i) +
                                    " outside 1.." + std::to_string(n_));
    }
    void append_row();

    int n_ = 0;
    std::vector<std::int64_t> tri_;  // rows' lower triangles, diagonal included
    EntryDistribution dist_;
    std::uint64_t root_seed_ = 0;
    std::uint64_t stream_id_ = 0;
};

}  // namespace permlab
