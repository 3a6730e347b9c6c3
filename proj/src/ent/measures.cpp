#include "qlink/ent/measures.hpp"

#include <algorithm>
#include <cmath>

#include "qlink/ent/lewenstein_sanpera.hpp"
#include "qlink/ent/ree.hpp"
#include "qlink/errors.hpp"
#include "qlink/fock/ops.hpp"

namespace qlink::ent {

std::string measure_name(Measure m) {
    switch (m) {
        case Measure::reduced_entropy: return "reduced-entropy";
        case Measure::negativity: return "negativity";
        case Measure::log_negativity: return "log-negativity";
        case Measure::relative_entropy: return "relative-entropy";
        case Measure::ls_entanglement: return "ls-entanglement";
        case Measure::upper_bound: return "upper-bound";
    }
    return "unknown";
}

Bipartition Bipartition::against_rest(const fock::ModeLayout& layout,
                                      std::vector<int> left_modes) {
    Bipartition cut;
    cut.left = std::move(left_modes);
    std::sort(cut.left.begin(), cut.left.end());
    size_t k = 0;
    for (int m = 0; m < layout.modes(); ++m) {
        if (k < cut.left.size() && cut.left[k] == m)
            ++k;
        else
            cut.right.push_back(m);
    }
    cut.validate(layout);
    return cut;
}

void Bipartition::validate(const fock::ModeLayout& layout) const {
    if (left.empty() || right.empty())
        throw dimension_error("both blocks of a bipartition must be nonempty");
    std::vector<char> seen(static_cast<size_t>(layout.modes()), 0);
    auto mark = [&](const std::vector<int>& block) {
        for (size_t i = 0; i < block.size(); ++i) {
            const int m = block[i];
            if (m < 0 || m >= layout.modes())
                throw dimension_error("bipartition mode out of range");
            if (i > 0 && block[i] <= block[i - 1])
                throw dimension_error("bipartition blocks must be strictly increasing");
            if (seen[static_cast<size_t>(m)])
                throw dimension_error("bipartition blocks overlap");
            seen[static_cast<size_t>(m)] = 1;
        }
    };
    mark(left);
    mark(right);
    for (char s : seen)
        if (!s) throw dimension_error("bipartition does not cover all modes");
}

namespace {

double entropy_of_weights(const Eigen::VectorXd& w) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < w.size(); ++k)
        if (w(k) > 1e-15) s -= w(k) * std::log(w(k));
    return s;
}

} // namespace

EntanglementReport reduced_entropy(const fock::FockState& psi,
                                   const Bipartition& cut) {
    cut.validate(psi.layout());
    const fock::DensityOperator red = fock::partial_trace(psi, cut.left);
    Eigen::SelfAdjointEigenSolver<Mat> es(red.matrix(), Eigen::EigenvaluesOnly);
    return {Measure::reduced_entropy, entropy_of_weights(es.eigenvalues()),
            true, 0, 0.0};
}

EntanglementReport negativity(const fock::DensityOperator& rho,
                              const Bipartition& cut) {
    cut.validate(rho.layout());
    const fock::DensityOperator pt = fock::partial_transpose(rho, cut.right);
    Eigen::SelfAdjointEigenSolver<Mat> es(pt.matrix(), Eigen::EigenvaluesOnly);
    double neg = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        neg += std::max(0.0, -es.eigenvalues()(k));
    return {Measure::negativity, neg, true, 0, 0.0};
}

EntanglementReport log_negativity(const fock::DensityOperator& rho,
                                  const Bipartition& cut) {
    const EntanglementReport n = negativity(rho, cut);
    return {Measure::log_negativity, std::log1p(2.0 * n.value), true, 0, 0.0};
}

double bell_output_bound(fock::BellKind kind, double t_sq) {
    if (t_sq < 0.0 || t_sq > 1.0 + 1e-12)
        throw domain_error("intensity transmission must lie in [0, 1]");
    t_sq = std::min(t_sq, 1.0);
    if (fock::is_psi_family(kind)) return t_sq * std::log(2.0);
    if (t_sq == 0.0) return 0.0;
    return 0.5 * ((1.0 + t_sq) * std::log1p(t_sq) - t_sq * std::log(t_sq));
}

std::pair<EntanglementReport, EntanglementReport> monotonicity_check(
    const fock::DensityOperator& input, const Bipartition& cut,
    const fourport::DeviceSpec& spec, const fourport::ChannelOptions& opt,
    Measure measure, double tol) {
    auto eval = [&](const fock::DensityOperator& rho) -> EntanglementReport {
        switch (measure) {
            case Measure::negativity: return negativity(rho, cut);
            case Measure::log_negativity: return log_negativity(rho, cut);
            case Measure::relative_entropy:
                return relative_entropy_entanglement(rho, cut);
            case Measure::ls_entanglement: {
                const LsResult ls = lewenstein_sanpera(rho, cut);
                return {Measure::ls_entanglement, ls.entanglement, ls.converged,
                        ls.iterations, ls.residual};
            }
            default:
                throw domain_error(
                    "monotonicity check needs a mixed-state measure");
        }
    };
    EntanglementReport before = eval(input);
    const fourport::ChannelResult out = fourport::apply_channel(input, spec, opt);
    EntanglementReport after = eval(out.state);
    if (after.value > before.value + tol)
        throw invariant_violation(
            measure_name(measure) + " increased under the channel: " +
            std::to_string(before.value) + " -> " + std::to_string(after.value));
    return {before, after};
}

} // namespace qlink::ent
