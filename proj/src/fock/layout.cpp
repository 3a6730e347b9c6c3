#include "qlink/fock/layout.hpp"

#include <limits>

#include "qlink/errors.hpp"

namespace qlink::fock {

ModeLayout::ModeLayout(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
    if (cutoffs_.empty()) throw dimension_error("layout needs at least one mode");
    for (int c : cutoffs_)
        if (c < 1) throw dimension_error("mode cutoff must be >= 1");
    strides_.assign(cutoffs_.size(), 1);
    dim_ = 1;
    for (size_t m = cutoffs_.size(); m-- > 0;) {
        strides_[m] = dim_;
        const Index d = static_cast<Index>(cutoffs_[m]) + 1;
        if (dim_ > std::numeric_limits<Index>::max() / d)
            throw dimension_error("layout dimension overflow");
        dim_ *= d;
    }
}

Index ModeLayout::index(std::span<const int> occ) const {
    if (static_cast<int>(occ.size()) != modes())
        throw dimension_error("occupation tuple has wrong length");
    Index idx = 0;
    for (int m = 0; m < modes(); ++m) {
        if (occ[static_cast<size_t>(m)] < 0 ||
            occ[static_cast<size_t>(m)] > cutoff(m))
            throw dimension_error("occupation outside cutoff");
        idx += strides_[static_cast<size_t>(m)] * occ[static_cast<size_t>(m)];
    }
    return idx;
}

void ModeLayout::occupation(Index idx, std::span<int> occ) const {
    if (idx < 0 || idx >= dim_) throw dimension_error("basis index out of range");
    if (static_cast<int>(occ.size()) != modes())
        throw dimension_error("occupation buffer has wrong length");
    for (int m = 0; m < modes(); ++m) {
        occ[static_cast<size_t>(m)] =
            static_cast<int>(idx / strides_[static_cast<size_t>(m)]);
        idx %= strides_[static_cast<size_t>(m)];
    }
}

ModeLayout ModeLayout::concat(const ModeLayout& other) const {
    std::vector<int> c = cutoffs_;
    c.insert(c.end(), other.cutoffs_.begin(), other.cutoffs_.end());
    return ModeLayout(std::move(c));
}

ModeLayout ModeLayout::select(std::span<const int> modes_sel) const {
    std::vector<int> c;
    c.reserve(modes_sel.size());
    for (int m : modes_sel) {
        if (m < 0 || m >= modes()) throw dimension_error("selected mode out of range");
        c.push_back(cutoff(m));
    }
    return ModeLayout(std::move(c));
}

} // namespace qlink::fock
