#include "qlink/fock/factories.hpp"

#include <array>
#include <cmath>

#include "qlink/errors.hpp"

namespace qlink::fock {

FockState make_bell_state(BellKind kind, const ModeLayout& layout) {
    if (layout.modes() != 2)
        throw dimension_error("Bell states live on exactly two modes");
    Vec amp = Vec::Zero(layout.dim());
    const double s = bell_sign(kind) / std::sqrt(2.0);
    if (is_psi_family(kind)) {
        amp(layout.index(std::array{0, 1})) = 1.0 / std::sqrt(2.0);
        amp(layout.index(std::array{1, 0})) = s;
    } else {
        amp(layout.index(std::array{0, 0})) = 1.0 / std::sqrt(2.0);
        amp(layout.index(std::array{1, 1})) = s;
    }
    return FockState(layout, std::move(amp));
}

TmsvState make_tmsv(double q, const ModeLayout& layout) {
    if (layout.modes() != 2)
        throw dimension_error("two-mode squeezed vacuum needs two modes");
    if (!(std::abs(q) < 1.0))
        throw domain_error("squeezing parameter q must satisfy |q| < 1");
    const int n_max = std::min(layout.cutoff(0), layout.cutoff(1));
    Vec amp = Vec::Zero(layout.dim());
    for (int n = 0; n <= n_max; ++n)
        amp(layout.index(std::array{n, n})) = std::pow(q, n);
    // Unnormalized weights are q^{2n}; the infinite-sum normalization is
    // (1-q^2)^{-1}, so the tail beyond n_max carries q^{2(n_max+1)}.
    const double truncation_weight = std::pow(q * q, n_max + 1);
    return {FockState(layout, std::move(amp)), truncation_weight};
}

FockState make_vacuum(const ModeLayout& layout) {
    Vec amp = Vec::Zero(layout.dim());
    amp(0) = 1.0;
    return FockState(layout, std::move(amp));
}

FockState make_basis_state(const ModeLayout& layout, std::span<const int> occ) {
    Vec amp = Vec::Zero(layout.dim());
    amp(layout.index(occ)) = 1.0;
    return FockState(layout, std::move(amp));
}

namespace {

// Index map old basis -> new basis for a cutoff-widening embed.
std::vector<Index> embed_map(const ModeLayout& small, const ModeLayout& large) {
    if (small.modes() != large.modes())
        throw dimension_error("embed requires equal mode counts");
    for (int m = 0; m < small.modes(); ++m)
        if (large.cutoff(m) < small.cutoff(m))
            throw dimension_error("embed target cutoff smaller than source");
    std::vector<Index> map(static_cast<size_t>(small.dim()));
    std::vector<int> occ(static_cast<size_t>(small.modes()));
    for (Index i = 0; i < small.dim(); ++i) {
        small.occupation(i, occ);
        map[static_cast<size_t>(i)] = large.index(occ);
    }
    return map;
}

} // namespace

FockState embed(const FockState& psi, const ModeLayout& larger) {
    const auto map = embed_map(psi.layout(), larger);
    Vec amp = Vec::Zero(larger.dim());
    for (Index i = 0; i < psi.layout().dim(); ++i)
        amp(map[static_cast<size_t>(i)]) = psi.amplitudes()(i);
    return FockState(larger, std::move(amp));
}

DensityOperator embed(const DensityOperator& rho, const ModeLayout& larger) {
    const auto map = embed_map(rho.layout(), larger);
    Mat m = Mat::Zero(larger.dim(), larger.dim());
    for (Index j = 0; j < rho.dim(); ++j)
        for (Index i = 0; i < rho.dim(); ++i)
            m(map[static_cast<size_t>(i)], map[static_cast<size_t>(j)]) =
                rho.matrix()(i, j);
    return DensityOperator(larger, std::move(m), rho.truncated_output());
}

} // namespace qlink::fock
