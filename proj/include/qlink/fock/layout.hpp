#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace qlink::fock {

using Index = Eigen::Index;

/// Truncated multimode Fock basis. Mode m carries occupations 0..cutoff(m),
/// so its local dimension is cutoff(m)+1. Basis states are enumerated
/// row-major over occupation tuples with the LAST mode varying fastest;
/// serialized states and all kernels rely on this order.
class ModeLayout {
  public:
    ModeLayout() = default;
    explicit ModeLayout(std::vector<int> cutoffs);

    int modes() const { return static_cast<int>(cutoffs_.size()); }
    int cutoff(int mode) const { return cutoffs_[static_cast<size_t>(mode)]; }
    const std::vector<int>& cutoffs() const { return cutoffs_; }
    Index mode_dim(int mode) const { return cutoff(mode) + 1; }
    Index stride(int mode) const { return strides_[static_cast<size_t>(mode)]; }
    Index dim() const { return dim_; }

    /// Flat basis index of an occupation tuple (throws on out-of-range).
    Index index(std::span<const int> occ) const;
    /// Inverse of index(); `occ` must have modes() entries.
    void occupation(Index idx, std::span<int> occ) const;

    /// Layout of this register followed by `other`.
    ModeLayout concat(const ModeLayout& other) const;
    /// Layout of the given modes, in the order listed.
    ModeLayout select(std::span<const int> modes) const;

    bool operator==(const ModeLayout& other) const {
        return cutoffs_ == other.cutoffs_;
    }

  private:
    std::vector<int> cutoffs_;
    std::vector<Index> strides_;
    Index dim_ = 0;
};

} // namespace qlink::fock
