#include "qlink/fourport/channel.hpp"

#include <array>
#include <cmath>

#include "qlink/errors.hpp"
#include "qlink/fock/ops.hpp"
#include "qlink/fourport/dilation.hpp"
#include "qlink/kernels/dense.hpp"

namespace qlink::fourport {

using fock::Index;
using kernels::cxd;
using kernels::Mat;
using kernels::Vec;

ThermalPopulations thermal_populations(int cutoff, double n_th) {
    if (cutoff < 1) throw dimension_error("cutoff must be >= 1");
    if (n_th < 0.0) throw domain_error("thermal occupation must be >= 0");
    Eigen::VectorXd p = Eigen::VectorXd::Zero(cutoff + 1);
    if (n_th == 0.0) {
        p(0) = 1.0;
        return {p, 0.0};
    }
    const double x = n_th / (1.0 + n_th);
    for (int n = 0; n <= cutoff; ++n) p(n) = (1.0 - x) * std::pow(x, n);
    // Renormalize the kept range; the discarded geometric tail is reported.
    p /= p.sum();
    return {p, std::pow(x, cutoff + 1)};
}

namespace {

double combined_device_weight(const ThermalPopulations& th) {
    const double kept = 1.0 - th.truncation_weight;
    return 1.0 - kept * kept;
}

void check_device_tail(double weight, const ChannelOptions& opt) {
    if (weight > opt.truncation_tol)
        throw truncation_error(
            "thermal device tail beyond the cutoff carries " +
            std::to_string(weight) + " probability; increase device_cutoff");
}

void check_amplifier_headroom(int sigma, double field_top,
                              const ChannelOptions& opt) {
    if (sigma == -1 && field_top > opt.truncation_tol)
        throw truncation_error(
            "amplified field populates the top Fock level with weight " +
            std::to_string(field_top) + "; increase the field cutoffs");
}

} // namespace

ChannelResult apply_channel(const DensityOperator& input, const DeviceSpec& spec,
                            const ChannelOptions& opt) {
    spec.validate();
    if (input.layout().modes() != 2)
        throw dimension_error("the channel acts on two field modes");
    const LambdaMatrix lam = make_lambda_limit(spec);
    const Dilation dil(lam, input.layout(), opt.device_cutoff);
    const ThermalPopulations th = thermal_populations(opt.device_cutoff, spec.n_th);

    ChannelReport rep;
    rep.device_truncation_weight = combined_device_weight(th);
    check_device_tail(rep.device_truncation_weight, opt);

    Eigen::VectorXd dev_diag;
    {
        Vec a = th.probs.cast<cxd>(), b = th.probs.cast<cxd>(), d;
        kernels::kron_vec(a, b, d, opt.exec);
        dev_diag = d.real();
    }
    Mat joint;
    {
        Mat rho_dev = dev_diag.cast<cxd>().asDiagonal();
        kernels::kron(input.matrix(), rho_dev, joint, opt.exec);
    }
    Mat evolved = dil.sandwich(joint, opt.exec);
    evolved = 0.5 * (evolved + evolved.adjoint()).eval();

    DensityOperator joint_out(dil.joint(), std::move(evolved), true);
    rep.device_top_population =
        std::max(fock::top_level_population(joint_out, 2),
                 fock::top_level_population(joint_out, 3));

    const std::array<int, 2> keep{0, 1};
    DensityOperator out = fock::partial_trace(joint_out, keep, opt.exec);
    rep.field_top_population = std::max(fock::top_level_population(out, 0),
                                        fock::top_level_population(out, 1));
    rep.trace_delta = 1.0 - out.trace_real();
    check_amplifier_headroom(spec.sigma, rep.field_top_population, opt);
    return {std::move(out), rep};
}

ChannelResult apply_channel(const FockState& input, const DeviceSpec& spec,
                            const ChannelOptions& opt) {
    spec.validate();
    if (input.layout().modes() != 2)
        throw dimension_error("the channel acts on two field modes");
    const LambdaMatrix lam = make_lambda_limit(spec);
    const Dilation dil(lam, input.layout(), opt.device_cutoff);
    const ThermalPopulations th = thermal_populations(opt.device_cutoff, spec.n_th);

    ChannelReport rep;
    rep.device_truncation_weight = combined_device_weight(th);
    check_device_tail(rep.device_truncation_weight, opt);

    const Index dim_f = input.layout().dim();
    const Index dd = static_cast<Index>(opt.device_cutoff) + 1;
    const Index dim_d = dd * dd;
    const ModeLayout& joint_layout = dil.joint();

    // Joint indices whose occupation sits at a mode's top level, per mode.
    std::array<std::vector<char>, 4> at_top;
    for (auto& v : at_top) v.assign(static_cast<size_t>(joint_layout.dim()), 0);
    {
        std::vector<int> occ(4);
        for (Index i = 0; i < joint_layout.dim(); ++i) {
            joint_layout.occupation(i, occ);
            for (int m = 0; m < 4; ++m)
                at_top[static_cast<size_t>(m)][static_cast<size_t>(i)] =
                    occ[static_cast<size_t>(m)] == joint_layout.cutoff(m);
        }
    }

    Mat rho_f = Mat::Zero(dim_f, dim_f);
    std::array<double, 4> top_mass{0.0, 0.0, 0.0, 0.0};
    Vec dev = Vec::Zero(dim_d), joint, evolved;
    for (Index m1 = 0; m1 < dd; ++m1) {
        for (Index m2 = 0; m2 < dd; ++m2) {
            const double w = th.probs(m1) * th.probs(m2);
            if (w < 1e-16) continue;
            dev.setZero();
            dev(m1 * dd + m2) = 1.0;
            kernels::kron_vec(input.amplitudes(), dev, joint, opt.exec);
            evolved = dil.apply(joint, opt.exec);
            Eigen::Map<const Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic,
                                           Eigen::RowMajor>>
                psi(evolved.data(), dim_f, dim_d);
            rho_f.noalias() += w * (psi * psi.adjoint());
            for (Index i = 0; i < evolved.size(); ++i) {
                const double m = w * std::norm(evolved(i));
                for (int mode = 0; mode < 4; ++mode)
                    if (at_top[static_cast<size_t>(mode)][static_cast<size_t>(i)])
                        top_mass[static_cast<size_t>(mode)] += m;
            }
        }
    }
    rho_f = 0.5 * (rho_f + rho_f.adjoint()).eval();

    DensityOperator out(input.layout(), std::move(rho_f), true);
    rep.field_top_population = std::max(top_mass[0], top_mass[1]);
    rep.device_top_population = std::max(top_mass[2], top_mass[3]);
    rep.trace_delta = 1.0 - out.trace_real();
    check_amplifier_headroom(spec.sigma, rep.field_top_population, opt);
    return {std::move(out), rep};
}

} // namespace qlink::fourport
