#include "qlink/fock/ops.hpp"

#include <algorithm>
#include <cmath>

#include "qlink/errors.hpp"
#include "qlink/kernels/dense.hpp"

namespace qlink::fock {

namespace {

void check_mode_subset(const ModeLayout& layout, std::span<const int> modes) {
    if (modes.empty()) throw dimension_error("mode subset must be nonempty");
    for (size_t k = 0; k < modes.size(); ++k) {
        if (modes[k] < 0 || modes[k] >= layout.modes())
            throw dimension_error("mode index out of range");
        if (k > 0 && modes[k] <= modes[k - 1])
            throw dimension_error("mode subset must be strictly increasing");
    }
}

std::vector<int> complement_modes(const ModeLayout& layout,
                                  std::span<const int> modes) {
    std::vector<int> rest;
    size_t k = 0;
    for (int m = 0; m < layout.modes(); ++m) {
        if (k < modes.size() && modes[k] == m)
            ++k;
        else
            rest.push_back(m);
    }
    return rest;
}

// Full-space index offsets of the sub-basis spanned by `modes`, enumerated
// row-major over those modes (last listed mode fastest). All other digits
// are zero, so offsets from complementary subsets add.
std::vector<Index> subset_offsets(const ModeLayout& layout,
                                  std::span<const int> modes) {
    if (modes.empty()) return {0};
    Index count = 1;
    for (int m : modes) count *= layout.mode_dim(m);
    std::vector<Index> off(static_cast<size_t>(count), 0);
    Index repeat = count;
    for (int m : modes) {
        const Index d = layout.mode_dim(m);
        const Index stride = layout.stride(m);
        repeat /= d;
        for (Index i = 0; i < count; ++i)
            off[static_cast<size_t>(i)] += ((i / repeat) % d) * stride;
    }
    return off;
}

} // namespace

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b,
                       Exec ex) {
    Mat out;
    kernels::kron(a.matrix(), b.matrix(), out, ex);
    return DensityOperator(a.layout().concat(b.layout()), std::move(out),
                           a.truncated_output() || b.truncated_output());
}

FockState tensor(const FockState& a, const FockState& b, Exec ex) {
    Vec out;
    kernels::kron_vec(a.amplitudes(), b.amplitudes(), out, ex);
    return FockState(a.layout().concat(b.layout()), std::move(out));
}

DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const int> keep, Exec ex) {
    check_mode_subset(rho.layout(), keep);
    const auto traced = complement_modes(rho.layout(), keep);
    const auto base = subset_offsets(rho.layout(), keep);
    const auto off = subset_offsets(rho.layout(), traced);
    Mat out;
    kernels::trace_out(rho.matrix(), base, off, out, ex);
    return DensityOperator(rho.layout().select(keep), std::move(out),
                           rho.truncated_output());
}

DensityOperator partial_trace(const FockState& psi, std::span<const int> keep,
                              Exec ex) {
    check_mode_subset(psi.layout(), keep);
    const auto traced = complement_modes(psi.layout(), keep);
    const auto base = subset_offsets(psi.layout(), keep);
    const auto off = subset_offsets(psi.layout(), traced);
    const Index n = static_cast<Index>(base.size());
    const Vec& a = psi.amplitudes();
    Mat out(n, n);
    kernels::for_each_index(
        n,
        [&](Index j) {
            for (Index i = 0; i < n; ++i) {
                cxd s = 0.0;
                for (Index k = 0; k < static_cast<Index>(off.size()); ++k)
                    s += a(base[static_cast<size_t>(i)] + off[static_cast<size_t>(k)]) *
                         std::conj(a(base[static_cast<size_t>(j)] +
                                     off[static_cast<size_t>(k)]));
                out(i, j) = s;
            }
        },
        ex);
    return DensityOperator(psi.layout().select(keep), std::move(out));
}

DensityOperator partial_transpose(const DensityOperator& rho,
                                  std::span<const int> transposed, Exec ex) {
    check_mode_subset(rho.layout(), transposed);
    const ModeLayout& L = rho.layout();
    const Index n = L.dim();
    std::vector<Index> keep_off(static_cast<size_t>(n)), tr_off(static_cast<size_t>(n));
    std::vector<int> occ(static_cast<size_t>(L.modes()));
    for (Index r = 0; r < n; ++r) {
        L.occupation(r, occ);
        Index ko = 0, to = 0;
        size_t k = 0;
        for (int m = 0; m < L.modes(); ++m) {
            const Index part = L.stride(m) * occ[static_cast<size_t>(m)];
            if (k < transposed.size() && transposed[k] == m) {
                to += part;
                ++k;
            } else {
                ko += part;
            }
        }
        keep_off[static_cast<size_t>(r)] = ko;
        tr_off[static_cast<size_t>(r)] = to;
    }
    Mat out;
    kernels::partial_transpose(rho.matrix(), keep_off, tr_off, out, ex);
    // The result is Hermitian with unit trace but in general not PSD; it is
    // returned as an operator container, not re-validated deeply.
    return DensityOperator(L, std::move(out), rho.truncated_output());
}

LadderMoments ladder_moments(const DensityOperator& rho) {
    const ModeLayout& L = rho.layout();
    const int nm = L.modes();
    const Mat& r = rho.matrix();
    LadderMoments mom{Vec::Zero(nm), Mat::Zero(nm, nm), Mat::Zero(nm, nm)};
    std::vector<int> occ(static_cast<size_t>(nm));
    for (Index row = 0; row < L.dim(); ++row) {
        L.occupation(row, occ);
        for (int i = 0; i < nm; ++i) {
            const int ni = occ[static_cast<size_t>(i)];
            if (ni >= 1)
                mom.mean(i) += std::sqrt(double(ni)) * r(row, row - L.stride(i));
            for (int j = 0; j < nm; ++j) {
                const int nj = occ[static_cast<size_t>(j)];
                if (nj < 1) continue;
                // <row| rho a_i^dag a_j |row>
                const int ni_after = ni - (i == j ? 1 : 0);
                if (ni_after + 1 <= L.cutoff(i)) {
                    const Index col = row - L.stride(j) + L.stride(i);
                    mom.number(i, j) +=
                        std::sqrt(double(nj) * double(ni_after + 1)) * r(row, col);
                }
                // <row| rho a_i a_j |row>
                if (ni_after >= 1) {
                    const Index col = row - L.stride(j) - L.stride(i);
                    mom.pair(i, j) +=
                        std::sqrt(double(nj) * double(ni_after)) * r(row, col);
                }
            }
        }
    }
    return mom;
}

double top_level_population(const DensityOperator& rho, int mode) {
    const ModeLayout& L = rho.layout();
    if (mode < 0 || mode >= L.modes()) throw dimension_error("mode out of range");
    std::vector<int> occ(static_cast<size_t>(L.modes()));
    double top = 0.0, tr = 0.0;
    for (Index i = 0; i < L.dim(); ++i) {
        L.occupation(i, occ);
        const double p = rho.matrix()(i, i).real();
        tr += p;
        if (occ[static_cast<size_t>(mode)] == L.cutoff(mode)) top += p;
    }
    return tr > 0.0 ? top / tr : 0.0;
}

} // namespace qlink::fock
