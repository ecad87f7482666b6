#pragma once

#include "permlab/numeric.hpp"

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace permlab {

// Subset of {1,...,n} as a 64-bit mask (element i <-> bit i-1). Fast mode
// caps the ground set at 63; everything in the lab runs well below that.
class IndexSet {
  public:
    static constexpr int kMaxGround = 63;

    IndexSet() = default;
    explicit IndexSet(int ground) : ground_(check_ground(ground)) {}

    static IndexSet full(int ground) {
        IndexSet s(ground);
        s.bits_ = ground == 0 ? 0 : (~std::uint64_t{0} >> (64 - ground));
        return s;
    }
    // {lo,...,hi}; empty when lo > hi.
    static IndexSet range(int lo, int hi, int ground) {
        IndexSet s(ground);
        for (int i = lo; i <= hi; ++i) s.insert(i);
        return s;
    }
    static IndexSet of(std::initializer_list<int> elems, int ground) {
        IndexSet s(ground);
        for (int e : elems) s.insert(e);
        return s;
    }
    static IndexSet from_bits(std::uint64_t bits, int ground) {
        IndexSet s(ground);
        if (ground < 64 && (bits >> ground) != 0)
            throw ContractViolation("IndexSet: bits outside ground set");
        s.bits_ = bits;
        return s;
    }

    int ground_size() const { return ground_; }
    std::uint64_t bits() const { return bits_; }
    int size() const { return __builtin_popcountll(bits_); }
    bool empty() const { return bits_ == 0; }

    bool contains(int i) const { return i >= 1 && i <= ground_ && (bits_ >> (i - 1)) & 1; }

    IndexSet& insert(int i) {
        check_element(i);
        bits_ |= std::uint64_t{1} << (i - 1);
        return *this;
    }
    IndexSet& remove(int i) {
        check_element(i);
        bits_ &= ~(std::uint64_t{1} << (i - 1));
        return *this;
    }
    IndexSet with(int i) const { return IndexSet(*this).insert(i); }
    IndexSet without(int i) const { return IndexSet(*this).remove(i); }

    IndexSet unioned(const IndexSet& o) const { return combined(o, bits_ | o.bits_); }
    IndexSet intersected(const IndexSet& o) const { return combined(o, bits_ & o.bits_); }
    IndexSet minus(const IndexSet& o) const { return combined(o, bits_ & ~o.bits_); }
    IndexSet complement() const { return from_bits(full(ground_).bits_ & ~bits_, ground_); }

    bool subset_of(const IndexSet& o) const { return (bits_ & ~o.bits_) == 0; }

    // Re-homes the set in a larger ground set (extension steps grow n).
    IndexSet widened(int ground) const {
        if (ground < ground_) throw ContractViolation("IndexSet: cannot shrink ground set");
        return from_bits(bits_, ground);
    }

    int smallest() const {
        if (bits_ == 0) throw ContractViolation("IndexSet: smallest() of empty set");
        return __builtin_ctzll(bits_) + 1;
    }

    std::vector<int> elements() const {
        std::vector<int> out;
        out.reserve(static_cast<size_t>(size()));
        for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(__builtin_ctzll(b) + 1);
        return out;
    }

    friend bool operator==(const IndexSet& a, const IndexSet& b) {
        return a.bits_ == b.bits_ && a.ground_ == b.ground_;
    }
    // Lexicographic-by-element order on masks; used for deterministic
    // witness bookkeeping.
    friend bool operator<(const IndexSet& a, const IndexSet& b) { return a.bits_ < b.bits_; }

    std::string str() const {
        std::string out = "{";
        bool first = true;
        for (int e : elements()) {
            if (!first) out += ",";
            out += std::to_string(e);
            first = false;
        }
        return out + "}";
    }

  private:
    static int check_ground(int ground) {
        if (ground < 0 || ground > kMaxGround)
            throw CapacityError("IndexSet: ground size " + std::to_string(ground) +
                                " outside [0," + std::to_string(kMaxGround) + "]");
        return ground;
    }
    void check_element(int i) const {
        if (i < 1 || i > ground_)
            throw ContractViolation("IndexSet: element " + std::to_string(i) +
                                    " outside ground set of size " + std::to_string(ground_));
    }
    IndexSet combined(const IndexSet& o, std::uint64_t bits) const {
        if (ground_ != o.ground_) throw ContractViolation("IndexSet: mismatched ground sets");
        IndexSet s(ground_);
        s.bits_ = bits;
        return s;
    }

    std::uint64_t bits_ = 0;
    int ground_ = 0;
};

// True iff the complements (within the shared ground set) are pairwise
// disjoint.
inline bool complement_disjoint(std::span<const IndexSet> sets, int ground) {
    std::uint64_t seen = 0;
    for (const IndexSet& s : sets) {
        if (s.ground_size() != ground)
            throw ContractViolation("complement_disjoint: mismatched ground sets");
        std::uint64_t comp = IndexSet::full(ground).bits() & ~s.bits();
        if (seen & comp) return false;
        seen |= comp;
    }
    return true;
}

}  // namespace permlab
