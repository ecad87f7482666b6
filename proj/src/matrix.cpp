#include "permlab/matrix.hpp"

#include <cassert>

namespace permlab {

SymmetricMatrix SymmetricMatrix::sample(int n, const EntryDistribution& dist,
                                        std::uint64_t root_seed, std::uint64_t stream_id) {
    if (n < 1) throw ContractViolation("sample: n must be >= 1");
    if (n > IndexSet::kMaxGround)
        throw CapacityError("sample: n > " + std::to_string(IndexSet::kMaxGround) +
                            " unsupported in fast mode");
    SymmetricMatrix m;
    m.dist_ = dist;
    m.root_seed_ = root_seed;
    m.stream_id_ = stream_id;
    m.tri_.reserve(static_cast<size_t>(n) * (n + 1) / 2);
    for (int k = 0; k < n; ++k) m.append_row();
    return m;
}

void SymmetricMatrix::append_row() {
    int k = n_ + 1;
    if (k > IndexSet::kMaxGround)
        throw CapacityError("extend: dimension cap " + std::to_string(IndexSet::kMaxGround) +
                            " reached");
    CounterRng rng(SeedSpec{root_seed_, stream_id_, static_cast<std::uint64_t>(k)});
    for (int j = 1; j < k; ++j) tri_.push_back(dist_.sample_off_diag(rng));
    tri_.push_back(dist_.sample_diag(rng));
    n_ = k;
}

SymmetricMatrix SymmetricMatrix::extended() const {
    SymmetricMatrix m = *this;
    m.append_row();
#ifndef NDEBUG
    assert(m.prefix_equals(*this));
    for (int i = 1; i <= m.n_; ++i)
        for (int j = 1; j <= i; ++j) assert(m.entry(i, j) == m.entry(j, i));
#endif
    return m;
}

DenseMatrix SymmetricMatrix::submatrix(const IndexSet& A, const IndexSet& B) const {
    if (A.ground_size() > n_ || B.ground_size() > n_)
        throw ContractViolation("submatrix: index set ground exceeds matrix dimension");
    std::vector<int> rows = A.elements(), cols = B.elements();
    DenseMatrix out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < cols.size(); ++c)
            out.at(static_cast<int>(r), static_cast<int>(c)) = entry(rows[r], cols[c]);
    return out;
}

bool SymmetricMatrix::prefix_equals(const SymmetricMatrix& m) const {
    if (m.n_ > n_) return false;
    for (size_t i = 0; i < m.tri_.size(); ++i)
        if (tri_[i] != m.tri_[i]) return false;
    return true;
}

}  // namespace permlab
