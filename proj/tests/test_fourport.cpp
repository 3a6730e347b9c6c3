#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include <qlink/errors.hpp>
#include <qlink/fock/factories.hpp>
#include <qlink/fock/ops.hpp>
#include <qlink/fourport/channel.hpp>
#include <qlink/fourport/device.hpp>
#include <qlink/fourport/dilation.hpp>
#include <qlink/fourport/lambda.hpp>

using namespace qlink;
using fourport::cxd;
using fourport::DeviceSpec;
using fourport::Mat2;
using fourport::Mat4;
using fock::DensityOperator;
using fock::FockState;
using fock::Index;
using fock::ModeLayout;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

namespace {

Mat2 random_unitary2(uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Mat2 m;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) m(i, j) = cxd(nd(rng), nd(rng));
    Eigen::HouseholderQR<Mat2> qr(m);
    return Mat2(qr.householderQ());
}

DeviceSpec random_absorber(uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(0.15, 0.9);
    const Mat2 t = random_unitary2(seed + 1) *
                   Eigen::Vector2cd(ud(rng), ud(rng)).asDiagonal() *
                   random_unitary2(seed + 2);
    return fourport::device_from_transmission(t, +1, 0.0);
}

DeviceSpec random_amplifier(uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(1.1, 1.8);
    const Mat2 t = random_unitary2(seed + 1) *
                   Eigen::Vector2cd(ud(rng), ud(rng)).asDiagonal() *
                   random_unitary2(seed + 2);
    return fourport::device_from_transmission(t, -1, 0.0);
}

} // namespace

TEST_CASE("device specs enforce the energy-conservation constraint") {
    const DeviceSpec ok = fourport::scalar_device(0.8, 0.6, +1);
    CHECK(ok.constraint_residual() < 1e-12);
    CHECK_NOTHROW(ok.validate());
    CHECK(std::abs(ok.absorption(0, 0) - 0.6) < 1e-12);
    CHECK(std::abs(ok.absorption(1, 1) - 0.8) < 1e-12);

    SUBCASE("sigma, n_th, and tolerance are validated") {
        DeviceSpec bad = ok;
        bad.sigma = 0;
        CHECK_THROWS_AS(bad.validate(), invalid_device_error);
        bad = ok;
        bad.n_th = -0.1;
        CHECK_THROWS_AS(bad.validate(), invalid_device_error);
        bad = ok;
        bad.tolerance = 0.0;
        CHECK_THROWS_AS(bad.validate(), invalid_device_error);
        bad = ok;
        bad.absorption(0, 0) = 0.9;
        CHECK_THROWS_AS(bad.validate(), invalid_device_error);
    }

    SUBCASE("gain must match the device type") {
        CHECK_THROWS_AS(fourport::scalar_device(1.2, 0.9, +1),
                        invalid_device_error);
        CHECK_THROWS_AS(fourport::scalar_device(0.9, 1.2, -1),
                        invalid_device_error);
    }

    SUBCASE("amplifiers get an emission block instead") {
        const DeviceSpec amp = fourport::scalar_device(1.25, 1.5, -1);
        CHECK(amp.constraint_residual() < 1e-12);
        CHECK(std::abs(amp.absorption(0, 0) - 0.75) < 1e-12);
        CHECK(std::abs(amp.absorption(1, 1) - std::sqrt(1.25)) < 1e-12);
    }

    SUBCASE("a complex transmission keeps |t| <= 1 semantics") {
        const DeviceSpec dev = fourport::scalar_device(cxd(0.0, 0.8), 0.5, +1);
        CHECK(dev.constraint_residual() < 1e-12);
        const auto cs = fourport::make_cs(dev);
        CHECK(std::abs(cs.c(0, 0) - 0.8) < 1e-12);
        CHECK(std::abs(cs.s(0, 0) - 0.6) < 1e-12);
    }
}

TEST_CASE("fiber transmission follows attenuation and phase accumulation") {
    fourport::FiberSpec fib;
    fib.l_over_att_length = 0.7;
    fib.omega_l_over_c = 2.0;
    fib.n_refr = 1.5;
    const cxd t = fourport::fiber_transmission(fib);
    CHECK(std::abs(std::abs(t) - std::exp(-0.7)) < 1e-14);
    CHECK(std::abs(std::arg(t) - 3.0) < 1e-14);
    fib.l_over_att_length = -0.1;
    CHECK_THROWS_AS(fourport::fiber_transmission(fib), domain_error);
}

TEST_CASE("the four-port transformation preserves the J form") {
    for (uint64_t seed : {101u, 202u, 303u}) {
        const auto lam_a = fourport::make_lambda(random_absorber(seed));
        CHECK(lam_a.j_residual() < 1e-10);
        CHECK((lam_a.lambda.topLeftCorner<2, 2>() -
               random_absorber(seed).transmission)
                  .norm() < 1e-12);
        // sigma=+1 transformations are genuinely unitary.
        CHECK((lam_a.lambda * lam_a.lambda.adjoint() - Mat4::Identity()).norm() <
              1e-10);

        const auto lam_g = fourport::make_lambda(random_amplifier(seed));
        CHECK(lam_g.j_residual() < 1e-10);
        CHECK((lam_g.lambda * lam_g.lambda.adjoint() - Mat4::Identity()).norm() >
              0.1); // amplifiers are not unitary in the plain sense
    }

    SUBCASE("fully absorbing and lossless fibers need the limit construction") {
        const DeviceSpec dark = fourport::scalar_device(0.0, 0.5, +1);
        CHECK_THROWS_AS(fourport::make_lambda(dark), degenerate_device_error);
        CHECK(fourport::make_lambda_limit(dark).j_residual() < 1e-10);

        const DeviceSpec clear = fourport::scalar_device(1.0, 1.0, +1);
        CHECK_THROWS_AS(fourport::make_lambda(clear), degenerate_device_error);
        const auto lim = fourport::make_lambda_limit(clear);
        CHECK(lim.j_residual() < 1e-10);
        CHECK((lim.lambda - Mat4::Identity()).norm() < 1e-10);

        const DeviceSpec mixed = fourport::scalar_device(1.0, 0.3, +1);
        CHECK(fourport::make_lambda_limit(mixed).j_residual() < 1e-10);
    }

    SUBCASE("limit and closed-form constructions agree away from the limits") {
        for (uint64_t seed : {11u, 22u}) {
            const DeviceSpec dev = random_absorber(seed);
            const auto a = fourport::make_lambda(dev);
            const auto b = fourport::make_lambda_limit(dev);
            CHECK((a.lambda - b.lambda).norm() < 1e-8);
        }
    }
}

TEST_CASE("passive generator reproduces an absorbing transformation") {
    const auto lam = fourport::make_lambda(random_absorber(404));
    const Mat4 h = fourport::passive_generator(lam);
    CHECK((h - h.adjoint()).norm() < 1e-12);
    const Mat4 rec = (cxd(0.0, -1.0) * h).exp();
    CHECK((rec - lam.lambda).norm() < 1e-8);

    const auto amp = fourport::make_lambda(random_amplifier(404));
    CHECK_THROWS_AS(fourport::passive_generator(amp), domain_error);
}

TEST_CASE("bogoliubov generator splits into hop and pair blocks") {
    // Passive devices go through the unitary generator instead.
    const auto lam_a = fourport::make_lambda(random_absorber(505));
    CHECK_THROWS_AS(fourport::bogoliubov_generator(lam_a), domain_error);

    const auto lam_g = fourport::make_lambda(random_amplifier(505));
    const auto gen_g = fourport::bogoliubov_generator(lam_g);
    CHECK((gen_g.field_hop - gen_g.field_hop.adjoint()).norm() < 1e-10);
    CHECK((gen_g.device_hop - gen_g.device_hop.adjoint()).norm() < 1e-10);
    CHECK(gen_g.pair.norm() > 0.1); // amplification is pair creation
}

TEST_CASE("dilation one-photon block equals the four-port matrix") {
    const ModeLayout field({1, 1});
    for (uint64_t seed : {606u, 707u}) {
        const DeviceSpec dev = random_absorber(seed);
        const auto lam = fourport::make_lambda(dev);
        const fourport::Dilation dil(lam, field, 1);
        const ModeLayout& joint = dil.joint();
        REQUIRE(joint.dim() == 16);
        // One-photon joint basis indices, mode order (a1, a2, d1, d2).
        const std::array<Index, 4> one{
            joint.index(std::array{1, 0, 0, 0}), joint.index(std::array{0, 1, 0, 0}),
            joint.index(std::array{0, 0, 1, 0}), joint.index(std::array{0, 0, 0, 1})};
        Mat m(4, 4);
        for (int i = 0; i < 4; ++i) {
            Vec e = Vec::Zero(16);
            e(one[static_cast<size_t>(i)]) = 1.0;
            const Vec out = dil.apply(e);
            for (int j = 0; j < 4; ++j) m(j, i) = out(one[static_cast<size_t>(j)]);
            // photon number is conserved: nothing leaks out of the sector
            double sector = 0.0;
            for (int j = 0; j < 4; ++j) sector += std::norm(m(j, i));
            CHECK(std::abs(sector - 1.0) < 1e-12);
        }
        CHECK((m - lam.lambda).norm() < 1e-10);
    }

    SUBCASE("independent fibers factor into small blocks") {
        const DeviceSpec dev = fourport::scalar_device(0.8, 0.5, +1);
        const fourport::Dilation dil(fourport::make_lambda(dev), ModeLayout({2, 2}), 2);
        CHECK(dil.block_count() > 1);
        CHECK(dil.max_block_dim() <= 9); // (cutoff+1)^2 per conserved pair
    }
}

TEST_CASE("mean field transforms by the transmission amplitude itself") {
    // Pins the operator-ordering convention: the annihilation-operator mean
    // picks up t, not its conjugate, exactly as a propagating carrier phase.
    const ModeLayout lay({2, 2});
    Vec amp = Vec::Zero(lay.dim());
    amp(lay.index(std::array{0, 0})) = 1.0;
    amp(lay.index(std::array{1, 0})) = 1.0; // (|0> + |1>)/sqrt(2) in mode 0
    const FockState psi(lay, amp);
    const cxd t1(0.0, 0.8); // quarter-wave phase
    const auto res = fourport::apply_channel(
        psi, fourport::scalar_device(t1, 0.5, +1), {.device_cutoff = 2});
    const auto mom = fock::ladder_moments(res.state);
    CHECK(std::abs(mom.mean(0) - 0.5 * t1) < 1e-12);
    CHECK(std::abs(mom.mean(1)) < 1e-14);
}

TEST_CASE("single-photon transmission through an absorbing fiber") {
    const ModeLayout lay({1, 1});
    const FockState one = fock::make_basis_state(lay, std::array{1, 0});
    const double t = 0.75;
    const auto res =
        fourport::apply_channel(one, fourport::scalar_device(t, 1.0, +1),
                                {.device_cutoff = 1});
    const Mat& r = res.state.matrix();
    CHECK(std::abs(r(lay.index(std::array{1, 0}), lay.index(std::array{1, 0})) -
                   t * t) < 1e-13);
    CHECK(std::abs(r(lay.index(std::array{0, 0}), lay.index(std::array{0, 0})) -
                   (1.0 - t * t)) < 1e-13);
    CHECK(std::abs(res.report.trace_delta) < 1e-12);

    SUBCASE("a fully absorbing fiber returns the vacuum") {
        const auto dark =
            fourport::apply_channel(one, fourport::scalar_device(0.0, 1.0, +1),
                                    {.device_cutoff = 1});
        CHECK(std::abs(dark.state.matrix()(0, 0) - 1.0) < 1e-13);
    }

    SUBCASE("an identity device returns the input state exactly") {
        const FockState bell = fock::make_bell_state(fock::BellKind::psi_plus, lay);
        const auto id =
            fourport::apply_channel(bell, fourport::scalar_device(1.0, 1.0, +1),
                                    {.device_cutoff = 1});
        const Mat expect = DensityOperator::from_pure(bell).matrix();
        CHECK((id.state.matrix() - expect).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("bell states decay to the closed-form output blocks") {
    const ModeLayout lay({1, 1});
    const cxd t1 = 0.9 * std::exp(cxd(0.0, 0.4));
    const cxd t2 = 0.65 * std::exp(cxd(0.0, -1.1));
    const fourport::ChannelOptions copt{.device_cutoff = 1};
    const auto dev = fourport::device_from_transmission(
        Mat2(Eigen::Vector2cd(t1, t2).asDiagonal()), +1, 0.0);
    const Index i00 = lay.index(std::array{0, 0}), i01 = lay.index(std::array{0, 1}),
                i10 = lay.index(std::array{1, 0}), i11 = lay.index(std::array{1, 1});
    const double a1 = std::norm(t1), a2 = std::norm(t2);

    SUBCASE("one-photon family") {
        for (auto kind : {fock::BellKind::psi_plus, fock::BellKind::psi_minus}) {
            const double sign = fock::bell_sign(kind);
            const auto res = fourport::apply_channel(
                fock::make_bell_state(kind, lay), dev, copt);
            const Mat& r = res.state.matrix();
            CHECK(std::abs(r(i00, i00) - (1.0 - 0.5 * (a1 + a2))) < 1e-12);
            CHECK(std::abs(r(i01, i01) - 0.5 * a2) < 1e-12);
            CHECK(std::abs(r(i10, i10) - 0.5 * a1) < 1e-12);
            CHECK(std::abs(r(i01, i10) - sign * 0.5 * t2 * std::conj(t1)) < 1e-12);
            CHECK(std::abs(r(i11, i11)) < 1e-13);
        }
    }

    SUBCASE("two-photon family") {
        for (auto kind : {fock::BellKind::phi_plus, fock::BellKind::phi_minus}) {
            const double sign = fock::bell_sign(kind);
            const auto res = fourport::apply_channel(
                fock::make_bell_state(kind, lay), dev, copt);
            const Mat& r = res.state.matrix();
            CHECK(std::abs(r(i00, i00) -
                           (0.5 * (1 - a1) * (1 - a2) + 0.5)) < 1e-12);
            CHECK(std::abs(r(i01, i01) - 0.5 * a2 * (1 - a1)) < 1e-12);
            CHECK(std::abs(r(i10, i10) - 0.5 * a1 * (1 - a2)) < 1e-12);
            CHECK(std::abs(r(i11, i11) - 0.5 * a1 * a2) < 1e-12);
            CHECK(std::abs(r(i00, i11) - sign * 0.5 * std::conj(t1 * t2)) < 1e-12);
        }
    }
}

TEST_CASE("pure-state and density evolutions agree on thermal devices") {
    const ModeLayout lay({4, 4});
    const auto tmsv = fock::make_tmsv(0.4, lay);
    const auto dev = fourport::scalar_device(0.8, 0.7, +1, 0.1);
    const fourport::ChannelOptions copt{.device_cutoff = 7};
    const auto from_pure = fourport::apply_channel(tmsv.state, dev, copt);
    const auto from_density = fourport::apply_channel(
        DensityOperator::from_pure(tmsv.state), dev, copt);
    CHECK((from_pure.state.matrix() - from_density.state.matrix())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK(from_pure.report.device_truncation_weight ==
          doctest::Approx(from_density.report.device_truncation_weight));

    SUBCASE("vacuum picks up the interchanged thermal quanta") {
        const auto warm = fourport::apply_channel(
            fock::make_vacuum(ModeLayout({5, 5})),
            fourport::scalar_device(std::sqrt(0.5), std::sqrt(0.5), +1, 0.2),
            {.device_cutoff = 8});
        const auto mom = fock::ladder_moments(warm.state);
        // occupation (1 - |t|^2) n_th per mode
        CHECK(std::abs(mom.number(0, 0) - 0.1) < 1e-5);
        CHECK(std::abs(mom.number(1, 1) - 0.1) < 1e-5);
        CHECK(std::abs(mom.pair(0, 1)) < 1e-12);
    }
}

TEST_CASE("amplified vacuum is per-fiber thermal with mean gain-squared minus one") {
    const ModeLayout lay({8, 8});
    const double g = std::sqrt(1.1);
    const auto res = fourport::apply_channel(
        fock::make_vacuum(lay), fourport::scalar_device(g, g, -1),
        {.device_cutoff = 8});
    const double nbar = g * g - 1.0;
    const auto mom = fock::ladder_moments(res.state);
    CHECK(std::abs(mom.number(0, 0) - nbar) < 1e-6);
    CHECK(std::abs(mom.number(1, 1) - nbar) < 1e-6);
    CHECK(std::abs(mom.pair(0, 1)) < 1e-12); // fibers stay uncorrelated
    const Mat& r = res.state.matrix();
    const double x = nbar / (1.0 + nbar);
    for (int n = 0; n <= 3; ++n) {
        const Index idx = lay.index(std::array{n, 0});
        CHECK(std::abs(r(idx, idx).real() -
                       std::pow(x, n) / (1.0 + nbar) / (1.0 + nbar)) < 1e-6);
    }

    SUBCASE("the dilation pairs each fiber with its own emission mode") {
        const auto lam = fourport::make_lambda(fourport::scalar_device(g, g, -1));
        const fourport::Dilation dil(lam, ModeLayout({4, 4}), 4);
        Vec vac = Vec::Zero(dil.joint().dim());
        vac(0) = 1.0;
        const Vec out = dil.apply(vac);
        const ModeLayout& joint = dil.joint();
        std::array<int, 4> occ{};
        const double s = std::sqrt(g * g - 1.0);
        for (Index i = 0; i < joint.dim(); ++i) {
            const double a = std::abs(out(i));
            if (a < 1e-12) continue;
            joint.occupation(i, occ);
            // field quanta arrive strictly paired with device quanta
            CHECK(occ[0] == occ[2]);
            CHECK(occ[1] == occ[3]);
            // Low rungs match the untruncated geometric ladder; the top of
            // the finite ladder feels the cutoff boundary.
            if (occ[0] + occ[1] <= 2) {
                const double expect = std::pow(s / g, occ[0] + occ[1]) / (g * g);
                CHECK(std::abs(a - expect) < 5e-5);
            }
        }
    }
}

TEST_CASE("truncation pressure raises typed errors") {
    const ModeLayout lay({2, 2});
    const FockState vac = fock::make_vacuum(lay);

    SUBCASE("hot devices need a deeper device ladder") {
        CHECK_THROWS_AS(fourport::apply_channel(
                            vac, fourport::scalar_device(0.7, 0.7, +1, 1.0),
                            {.device_cutoff = 6}),
                        truncation_error);
    }

    SUBCASE("strong gain needs field headroom") {
        CHECK_THROWS_AS(fourport::apply_channel(
                            vac, fourport::scalar_device(2.0, 2.0, -1),
                            {.device_cutoff = 6}),
                        truncation_error);
    }

    SUBCASE("the channel insists on two field modes") {
        CHECK_THROWS_AS(fourport::apply_channel(
                            fock::make_vacuum(ModeLayout({2})),
                            fourport::scalar_device(0.9, 0.9, +1), {}),
                        dimension_error);
    }
}

TEST_CASE("serial and parallel channel applications are bit-identical") {
    const ModeLayout lay({3, 3});
    const auto tmsv = fock::make_tmsv(0.35, lay);
    const auto dev = fourport::scalar_device(0.8, 0.75, +1, 0.05);
    fourport::ChannelOptions ser{.device_cutoff = 6, .truncation_tol = 1e-6,
                                 .exec = kernels::Exec::serial};
    fourport::ChannelOptions par{.device_cutoff = 6, .truncation_tol = 1e-6,
                                 .exec = kernels::Exec::parallel};
    const auto rs = fourport::apply_channel(tmsv.state, dev, ser);
    const auto rp = fourport::apply_channel(tmsv.state, dev, par);
    CHECK((rs.state.matrix() - rp.state.matrix()).cwiseAbs().maxCoeff() == 0.0);

    const auto rho = DensityOperator::from_pure(tmsv.state);
    const auto ds = fourport::apply_channel(rho, dev, ser);
    const auto dp = fourport::apply_channel(rho, dev, par);
    CHECK((ds.state.matrix() - dp.state.matrix()).cwiseAbs().maxCoeff() == 0.0);
}
