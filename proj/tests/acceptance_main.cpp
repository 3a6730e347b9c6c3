/// Acceptance gate for the whole pipeline: eight independent criteria, one
/// pass/fail line each. Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <qlink/cli/config.hpp>
#include <qlink/cli/experiments.hpp>
#include <qlink/ent/lewenstein_sanpera.hpp>
#include <qlink/ent/measures.hpp>
#include <qlink/ent/ree.hpp>
#include <qlink/errors.hpp>
#include <qlink/fock/factories.hpp>
#include <qlink/fock/state.hpp>
#include <qlink/fourport/channel.hpp>
#include <qlink/fourport/device.hpp>
#include <qlink/fourport/lambda.hpp>
#include <qlink/gaussian/from_fock.hpp>
#include <qlink/gaussian/state.hpp>
#include <qlink/gaussian/thresholds.hpp>
#include <qlink/gaussian/transform.hpp>

using namespace qlink;
using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kPi = 3.141592653589793;

std::string g12(double v) { return cli::format_g12(v); }

struct Outcome {
    bool pass;
    std::string detail;
};

// ---------------------------------------------------------------- helpers

cxd random_phase_amp(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> mag(lo, hi), ph(-kPi, kPi);
    return std::polar(mag(rng), ph(rng));
}

Eigen::Matrix2cd random_unitary2(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Matrix2cd a;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) a(r, c) = cxd(gauss(rng), gauss(rng));
    const Eigen::HouseholderQR<Eigen::Matrix2cd> qr(a);
    Eigen::Matrix2cd q = qr.householderQ();
    const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < 2; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
    return q;
}

fock::FockState random_pure(std::mt19937_64& rng, const fock::ModeLayout& l) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(l.dim());
    for (Eigen::Index k = 0; k < v.size(); ++k)
        v(k) = cxd(gauss(rng), gauss(rng));
    return fock::FockState(l, v); // constructor normalizes
}

/// Channel output of a Bell state through diag(t1, t2) absorbing fibers with
/// vacuum device input, restricted to the two-qubit support; exact for any
/// complex transmissions.
Mat bell_reference(fock::BellKind kind, cxd t1, cxd t2,
                   const fock::ModeLayout& layout) {
    const double sign =
        (kind == fock::BellKind::psi_minus || kind == fock::BellKind::phi_minus)
            ? -1.0
            : 1.0;
    const bool psi_family = (kind == fock::BellKind::psi_plus ||
                             kind == fock::BellKind::psi_minus);
    const double w1 = std::norm(t1), w2 = std::norm(t2);
    const Eigen::Index s0 = layout.stride(0);
    const Eigen::Index i00 = 0, i01 = 1, i10 = s0, i11 = s0 + 1;
    Mat rho = Mat::Zero(layout.dim(), layout.dim());
    if (psi_family) {
        rho(i00, i00) = 1.0 - 0.5 * (w1 + w2);
        rho(i01, i01) = 0.5 * w2;
        rho(i10, i10) = 0.5 * w1;
        rho(i01, i10) = sign * 0.5 * t2 * std::conj(t1);
        rho(i10, i01) = std::conj(rho(i01, i10));
    } else {
        rho(i00, i00) = 0.5 * (1.0 - w1) * (1.0 - w2) + 0.5;
        rho(i01, i01) = 0.5 * w2 * (1.0 - w1);
        rho(i10, i10) = 0.5 * w1 * (1.0 - w2);
        rho(i11, i11) = 0.5 * w1 * w2;
        rho(i00, i11) = sign * 0.5 * std::conj(t1 * t2);
        rho(i11, i00) = std::conj(rho(i00, i11));
    }
    return rho;
}

// --------------------------------------------------------------- criteria

/// Engine output of all four Bell states equals the closed-form matrices for
/// random complex diagonal transmissions, elementwise within 1e-10.
Outcome criterion_1() {
    std::mt19937_64 rng(0xacc1u);
    const fock::ModeLayout layout({2, 2});
    const fock::BellKind kinds[] = {
        fock::BellKind::psi_plus, fock::BellKind::psi_minus,
        fock::BellKind::phi_plus, fock::BellKind::phi_minus};
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const cxd t1 = random_phase_amp(rng, 0.05, 0.999);
        const cxd t2 = random_phase_amp(rng, 0.05, 0.999);
        for (const auto kind : kinds) {
            const auto out = fourport::apply_channel(
                fock::make_bell_state(kind, layout),
                fourport::scalar_device(t1, t2, +1, 0.0), {.device_cutoff = 2});
            const Mat ref = bell_reference(kind, t1, t2, layout);
            worst = std::max(
                worst, (out.state.matrix() - ref).cwiseAbs().maxCoeff());
        }
    }
    return {worst < 1e-10,
            "80 channel outputs vs closed form, max deviation " + g12(worst)};
}

/// Random valid devices satisfy the energy constraint and their mode
/// transformations preserve the indefinite metric, both within 1e-10.
Outcome criterion_2() {
    std::mt19937_64 rng(0xacc2u);
    double worst_constraint = 0.0, worst_j = 0.0;
    for (int sigma : {+1, -1}) {
        std::uniform_real_distribution<double> sv(
            sigma == +1 ? 0.10 : 1.05, sigma == +1 ? 0.95 : 2.50);
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::Matrix2cd t = random_unitary2(rng);
            const Eigen::Vector2d d(sv(rng), sv(rng));
            t = t * d.asDiagonal() * random_unitary2(rng);
            const auto spec =
                fourport::device_from_transmission(t, sigma, 0.1);
            worst_constraint =
                std::max(worst_constraint, spec.constraint_residual());
            const auto lam = fourport::make_lambda(spec);
            worst_j = std::max(worst_j, lam.j_residual());
        }
    }
    const bool pass = worst_constraint < 1e-10 && worst_j < 1e-10;
    return {pass, "200 devices, energy-constraint residual " +
                      g12(worst_constraint) + ", metric residual " +
                      g12(worst_j)};
}

/// Entanglement decay curves of both Bell sign families: ln 2 at zero
/// length, monotone nonincreasing, vacuum-bright family strictly below the
/// single-excitation family past l/L = 0.1, all rows within the closed-form
/// bounds.
Outcome criterion_3() {
    double max_residual = 0.0, worst_slack = 0.0;
    for (const char* kind : {"plus", "minus"}) {
        cli::SweepConfig cfg;
        cfg.experiment = "bell-decay";
        cfg.kind = kind;
        const cli::Table t = cli::run_bell_decay(cfg); // 81-point default grid
        if (std::abs(t.rows.front()[2] - kLn2) > 1e-4 ||
            std::abs(t.rows.front()[3] - kLn2) > 1e-4)
            return {false, std::string("family ") + kind +
                               " does not start at ln 2: E_psi = " +
                               g12(t.rows.front()[2]) +
                               ", E_phi = " + g12(t.rows.front()[3])};
        for (size_t i = 0; i < t.rows.size(); ++i) {
            const auto& row = t.rows[i];
            if (row[0] >= 0.1 && !(row[3] < row[2]))
                return {false, std::string("family ") + kind + " at l/L = " +
                                   g12(row[0]) +
                                   ": vacuum-bright value not strictly below"};
            if (i > 0) {
                const auto& prev = t.rows[i - 1];
                if (row[2] > prev[2] + 1e-6 || row[3] > prev[3] + 1e-6)
                    return {false, std::string("family ") + kind +
                                       " not monotone at l/L = " + g12(row[0])};
            }
            worst_slack = std::max({worst_slack, row[2] - row[4],
                                    row[3] - row[5]});
            if (row[2] > row[4] + 1e-4 || row[3] > row[5] + 1e-4)
                return {false, std::string("family ") + kind +
                                   " exceeds its bound at l/L = " + g12(row[0])};
        }
        for (const auto& [key, value] : t.summary)
            if (key == "max_residual")
                max_residual = std::max(max_residual, value);
    }
    return {true, "162 grid points, optimizer residual <= " +
                      g12(max_residual) + ", worst bound slack " +
                      g12(worst_slack)};
}

/// Detected separability crossings along the fiber length match the
/// closed-form maximal length for a (squeezing x heat) grid, and the
/// strong-squeezing crossing lands on the frozen reference value.
Outcome criterion_4() {
    double worst = 0.0;
    for (double zeta : {0.25, 0.5, 1.0, 3.0}) {
        for (double n_th : {0.5, 1.0, 2.0}) {
            const double formula = gaussian::lmax_fiber(zeta, n_th);
            cli::SweepConfig cfg;
            cfg.experiment = "tmsv-separability";
            cfg.zeta = zeta;
            cfg.n_th = n_th;
            cfg.grid_stop = 1.6 * formula + 0.05;
            cfg.grid_steps = 9;
            const cli::Table t = cli::run_tmsv_separability(cfg);
            worst = std::max(worst, std::abs(t.summary[0].second - formula));
        }
    }
    cli::SweepConfig strong;
    strong.experiment = "tmsv-separability";
    strong.zeta = 7.0;
    strong.n_th = 1.0;
    strong.grid_stop = 0.35;
    strong.grid_steps = 9;
    const cli::Table t = cli::run_tmsv_separability(strong);
    const double frozen_err = std::abs(t.summary[0].second - 0.20273);
    const bool pass = worst < 1e-6 && frozen_err < 1e-5;
    return {pass, "12 crossings within " + g12(worst) +
                      " of the formula; strong-squeezing crossing " +
                      g12(t.summary[0].second) + " (frozen target 0.20273)"};
}

/// Amplifier sign changes occur at |T|^2 = 2 / (1 + e^{-2 zeta}), and the
/// asymptotic working point doubles the intensity (excess gain -> 1).
Outcome criterion_5() {
    double worst = 0.0;
    for (double zeta : {0.25, 0.5, 1.0, 2.0}) {
        const double target = 2.0 / (1.0 + std::exp(-2.0 * zeta));
        cli::SweepConfig cfg;
        cfg.experiment = "amplifier-gain";
        cfg.zeta = zeta;
        cfg.grid_steps = 25;
        const cli::Table t = cli::run_amplifier_gain(cfg);
        worst = std::max(worst, std::abs(t.summary[0].second - target));
    }
    const double g_inf = gaussian::max_gain(30.0).g_max;
    const bool pass = worst < 1e-6 && std::abs(g_inf - 1.0) < 1e-10;
    return {pass, "4 crossings within " + g12(worst) +
                      " of the formula; asymptotic excess gain " + g12(g_inf)};
}

/// The truncated number-basis engine and the Gaussian moment engine agree on
/// the second moments of a squeezed pair sent through absorbing fibers.
Outcome criterion_6() {
    const double zeta = 0.5, q = std::tanh(zeta);
    const fock::ModeLayout layout({14, 14});
    const auto tmsv = fock::make_tmsv(q, layout);
    double worst = 0.0;
    const struct {
        double t, n_th;
    } cases[] = {{0.75, 0.0}, {0.8, 0.2}};
    for (const auto& c : cases) {
        const auto out = fourport::apply_channel(
            tmsv.state, fourport::scalar_device(c.t, c.t, +1, c.n_th),
            {.device_cutoff = 14});
        const auto via_fock = gaussian::moments_from_fock(out.state);
        const gaussian::ScalarDevice dev{c.t, c.n_th, +1};
        const auto via_moments = gaussian::transform_moments(
            gaussian::tmsv_covariance(zeta), dev, dev);
        worst = std::max(
            worst,
            (via_fock.cov - via_moments.cov).cwiseAbs().maxCoeff());
    }
    return {worst < 1e-6,
            "2 channel settings, max covariance deviation " + g12(worst)};
}

/// Entanglement never increases across per-fiber channels: negativity on 50
/// randomized trials (25 absorbing, 25 amplifying), relative entropy on the
/// absorbing one-photon-sector trials.
Outcome criterion_7() {
    std::mt19937_64 rng(0xacc7u);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const fock::ModeLayout qubits({1, 1});
    const auto cut = ent::Bipartition::against_rest(qubits, {0});

    auto random_mixture = [&](const fock::ModeLayout& layout) {
        Mat acc = Mat::Zero(layout.dim(), layout.dim());
        double total = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double w = 0.2 + uni(rng);
            const auto psi = random_pure(rng, qubits);
            const Vec amp = layout.dim() == qubits.dim()
                                ? psi.amplitudes()
                                : fock::embed(psi, layout).amplitudes();
            acc += w * (amp * amp.adjoint());
            total += w;
        }
        return fock::DensityOperator(layout, acc / total);
    };

    int ree_trials = 0;
    for (int trial = 0; trial < 25; ++trial) {
        const auto rho = random_mixture(qubits);
        const auto spec = fourport::scalar_device(0.3 + 0.65 * uni(rng),
                                                  0.3 + 0.65 * uni(rng), +1,
                                                  0.2 * uni(rng));
        // Cutoff 10 keeps the worst thermal tail (n_th = 0.2) below the
        // truncation budget.
        const fourport::ChannelOptions opt{.device_cutoff = 10};
        ent::monotonicity_check(rho, cut, spec, opt,
                                ent::Measure::negativity, 1e-8);
        ent::monotonicity_check(rho, cut, spec, opt,
                                ent::Measure::relative_entropy, 1e-4);
        ++ree_trials;
    }
    const fock::ModeLayout amplified({5, 5});
    const auto amp_cut = ent::Bipartition::against_rest(amplified, {0});
    for (int trial = 0; trial < 25; ++trial) {
        const auto rho = random_mixture(amplified);
        // A one-photon input reaches the register top with weight
        // 5 x^4, x = (g^2 - 1)/g^2; gains up to 1.01 keep that below the
        // truncation budget.
        const double g1 = std::sqrt(1.002 + 0.008 * uni(rng));
        const double g2 = std::sqrt(1.002 + 0.008 * uni(rng));
        const auto spec = fourport::scalar_device(g1, g2, -1, 0.0);
        ent::monotonicity_check(rho, amp_cut, spec,
                                {.device_cutoff = 6},
                                ent::Measure::negativity, 1e-8);
    }
    return {true, "50 negativity trials and " + std::to_string(ree_trials) +
                      " relative-entropy trials, no increase detected"};
}

/// On random two-qubit pure states the iterative measures collapse to the
/// reduced entropy.
Outcome criterion_8() {
    std::mt19937_64 rng(0xacc8u);
    const fock::ModeLayout layout({1, 1});
    const auto cut = ent::Bipartition::against_rest(layout, {0});
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto psi = random_pure(rng, layout);
        const double entropy = ent::reduced_entropy(psi, cut).value;
        const auto rho = fock::DensityOperator::from_pure(psi);
        const double ree =
            ent::relative_entropy_entanglement(rho, cut).value;
        const double ls = ent::lewenstein_sanpera(rho, cut).entanglement;
        worst = std::max({worst, std::abs(ree - entropy),
                          std::abs(ls - entropy)});
    }
    return {worst < 1e-4,
            "20 random pure states, max deviation from the reduced entropy " +
                g12(worst)};
}

} // namespace

int main() {
    const struct {
        int id;
        const char* title;
        std::function<Outcome()> body;
    } criteria[] = {
        {1, "closed-form Bell channel outputs", criterion_1},
        {2, "device energy constraint and metric preservation", criterion_2},
        {3, "Bell entanglement decay curves", criterion_3},
        {4, "fiber-length separability crossings", criterion_4},
        {5, "amplifier gain limits", criterion_5},
        {6, "number-basis vs moment engine agreement", criterion_6},
        {7, "monotonicity under randomized channels", criterion_7},
        {8, "pure-state measure consistency", criterion_8},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out{false, ""};
        try {
            out = c.body();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        std::printf("criterion %d (%s): %s — %s [%.1f s]\n", c.id, c.title,
                    out.pass ? "PASS" : "FAIL", out.detail.c_str(), secs);
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    if (failures == 0)
        std::printf("all 8 acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures;
}
