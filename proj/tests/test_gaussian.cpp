#include <doctest.h>

#include <cmath>
#include <complex>

#include <qlink/errors.hpp>
#include <qlink/fock/factories.hpp>
#include <qlink/fock/state.hpp>
#include <qlink/fourport/channel.hpp>
#include <qlink/fourport/device.hpp>
#include <qlink/gaussian/from_fock.hpp>
#include <qlink/gaussian/separability.hpp>
#include <qlink/gaussian/state.hpp>
#include <qlink/gaussian/thresholds.hpp>
#include <qlink/gaussian/transform.hpp>

using namespace qlink;
using gaussian::GaussianState;
using gaussian::RMat;
using gaussian::RVec;
using gaussian::ScalarDevice;
using cxd = std::complex<double>;

TEST_CASE("symplectic form and vacuum moments") {
    const RMat omega = gaussian::symplectic_form(2);
    CHECK((omega + omega.transpose()).norm() == 0.0);
    CHECK(omega(0, 1) == 1.0);
    CHECK(omega(3, 2) == -1.0);
    CHECK(omega(0, 2) == 0.0);

    const GaussianState vac = gaussian::make_vacuum_state(2);
    CHECK_NOTHROW(vac.validate());
    CHECK(vac.mean.norm() == 0.0);
    CHECK((vac.cov - 0.5 * RMat::Identity(4, 4)).norm() == 0.0);
    const RVec nus = gaussian::symplectic_eigenvalues(vac.cov);
    CHECK(nus(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(nus(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("two-mode squeezed covariance structure") {
    const double zeta = 0.37;
    const GaussianState g = gaussian::tmsv_covariance(zeta);
    CHECK_NOTHROW(g.validate());
    const double ch = 0.5 * std::cosh(2 * zeta), sh = 0.5 * std::sinh(2 * zeta);
    for (int k = 0; k < 4; ++k) CHECK(g.cov(k, k) == doctest::Approx(ch));
    CHECK(g.cov(0, 2) == doctest::Approx(sh));
    CHECK(g.cov(1, 3) == doctest::Approx(-sh));
    CHECK(g.cov(0, 1) == 0.0);
    CHECK(g.cov(0, 3) == 0.0);

    SUBCASE("the state is pure: both symplectic eigenvalues are 1/2") {
        const RVec nus = gaussian::symplectic_eigenvalues(g.cov);
        CHECK(nus(0) == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(nus(1) == doctest::Approx(0.5).epsilon(1e-10));
    }

    SUBCASE("zero squeezing is the vacuum") {
        const GaussianState z = gaussian::tmsv_covariance(0.0);
        CHECK((z.cov - 0.5 * RMat::Identity(4, 4)).norm() < 1e-15);
    }
}

TEST_CASE("symplectic eigenvalues on known spectra") {
    SUBCASE("thermal occupations shift each mode eigenvalue") {
        RMat cov = RMat::Identity(4, 4);
        cov(0, 0) = cov(1, 1) = 1.9 + 0.5;
        cov(2, 2) = cov(3, 3) = 0.7 + 0.5;
        const RVec nus = gaussian::symplectic_eigenvalues(cov);
        CHECK(nus(0) == doctest::Approx(1.2).epsilon(1e-12));
        CHECK(nus(1) == doctest::Approx(2.4).epsilon(1e-12));
    }

    SUBCASE("squeezing is symplectic and leaves the spectrum alone") {
        RMat s = RMat::Identity(2, 2);
        s(0, 0) = std::exp(0.8);
        s(1, 1) = std::exp(-0.8);
        const RMat cov = s * (0.5 * RMat::Identity(2, 2)) * s.transpose();
        const RVec nus = gaussian::symplectic_eigenvalues(cov);
        CHECK(nus(0) == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("invalid covariances are rejected by validate") {
        GaussianState bad;
        bad.mean = RVec::Zero(4);
        bad.cov = RMat::Identity(4, 4);
        bad.cov(0, 1) = 0.3; // not symmetric
        CHECK_THROWS_AS(bad.validate(), domain_error);
        bad.cov = 0.1 * RMat::Identity(4, 4); // below vacuum noise
        CHECK_THROWS_AS(bad.validate(), domain_error);
        bad.mean = RVec::Zero(3);
        CHECK_THROWS_AS(bad.validate(), domain_error);
    }
}

TEST_CASE("moment transformation through scalar devices") {
    SUBCASE("identity devices leave the state untouched") {
        const GaussianState in = gaussian::tmsv_covariance(0.3);
        const ScalarDevice id{1.0, 0.0, +1};
        const GaussianState out = gaussian::transform_moments(in, id, id);
        CHECK((out.cov - in.cov).norm() < 1e-14);
        CHECK(out.mean.norm() == 0.0);
    }

    SUBCASE("full absorption lands on the vacuum") {
        const GaussianState in = gaussian::tmsv_covariance(0.9);
        const ScalarDevice dark{0.0, 0.0, +1};
        const GaussianState out = gaussian::transform_moments(in, dark, dark);
        CHECK((out.cov - 0.5 * RMat::Identity(4, 4)).norm() < 1e-14);
    }

    SUBCASE("a complex transmission rotates the quadrature mean") {
        GaussianState in = gaussian::make_vacuum_state(2);
        in.mean(0) = 1.0;
        const ScalarDevice quarter{cxd(0.0, 0.8), 0.0, +1};
        const ScalarDevice id{1.0, 0.0, +1};
        const GaussianState out = gaussian::transform_moments(in, quarter, id);
        CHECK(std::abs(out.mean(0)) < 1e-15);
        CHECK(out.mean(1) == doctest::Approx(0.8).epsilon(1e-12));
    }

    SUBCASE("absorbers add environment noise, amplifiers add emission noise") {
        const GaussianState vac = gaussian::make_vacuum_state(2);
        const double t2 = 0.6, n_th = 0.4;
        const ScalarDevice warm{std::sqrt(t2), n_th, +1};
        const GaussianState wout = gaussian::transform_moments(vac, warm, warm);
        const double expect_abs = t2 * 0.5 + (1.0 - t2) * (n_th + 0.5);
        CHECK(wout.cov(0, 0) == doctest::Approx(expect_abs).epsilon(1e-12));

        const double g2 = 1.7;
        const ScalarDevice amp{std::sqrt(g2), 0.0, -1};
        const GaussianState aout = gaussian::transform_moments(vac, amp, amp);
        const double expect_amp = g2 * 0.5 + (g2 - 1.0) * 0.5;
        CHECK(aout.cov(3, 3) == doctest::Approx(expect_amp).epsilon(1e-12));
    }

    SUBCASE("squeezed input through equal fibers keeps the two-mode form") {
        const double zeta = 0.3, t2 = 0.5;
        const ScalarDevice fiber{std::sqrt(t2), 0.0, +1};
        const GaussianState out =
            gaussian::transform_moments(gaussian::tmsv_covariance(zeta), fiber,
                                        fiber);
        const double diag = 0.5 * (1.0 + t2 * (std::cosh(2 * zeta) - 1.0));
        CHECK(out.cov(0, 0) == doctest::Approx(diag).epsilon(1e-13));
        CHECK(out.cov(0, 0) == doctest::Approx(0.5463663045605669).epsilon(1e-13));
        CHECK(out.cov(0, 2) ==
              doctest::Approx(0.5 * t2 * std::sinh(2 * zeta)).epsilon(1e-13));
    }

    SUBCASE("device list and parameter validation") {
        const GaussianState in = gaussian::make_vacuum_state(2);
        CHECK_THROWS_AS(
            gaussian::transform_moments(in, std::vector<ScalarDevice>{1}),
            dimension_error);
        CHECK_THROWS_AS(gaussian::transform_moments(
                            in, ScalarDevice{1.2, 0.0, +1}, ScalarDevice{}),
                        invalid_device_error);
        CHECK_THROWS_AS(gaussian::transform_moments(
                            in, ScalarDevice{0.9, 0.0, -1}, ScalarDevice{}),
                        invalid_device_error);
        CHECK_THROWS_AS(gaussian::transform_moments(
                            in, ScalarDevice{1.0, -0.2, +1}, ScalarDevice{}),
                        invalid_device_error);
    }
}

TEST_CASE("the PPT criterion separates squeezed from thermalized states") {
    SUBCASE("a squeezed pair is entangled with the known tilde eigenvalue") {
        const auto res =
            gaussian::is_separable_ppt(gaussian::tmsv_covariance(0.5));
        CHECK_FALSE(res.separable);
        CHECK(res.nu_min ==
              doctest::Approx(0.18393972058572117).epsilon(1e-12));
        CHECK(res.margin == doctest::Approx(res.nu_min - 0.5).epsilon(1e-12));
    }

    SUBCASE("vacuum sits exactly on the boundary, thermal states inside") {
        const auto vac = gaussian::is_separable_ppt(gaussian::make_vacuum_state(2));
        CHECK(vac.separable);
        CHECK(std::abs(vac.margin) < 1e-12);
        GaussianState th = gaussian::make_vacuum_state(2);
        th.cov.diagonal().array() += 0.3;
        const auto res = gaussian::is_separable_ppt(th);
        CHECK(res.separable);
        CHECK(res.margin == doctest::Approx(0.3).epsilon(1e-10));
    }

    SUBCASE("only two-mode states are accepted") {
        CHECK_THROWS_AS(gaussian::is_separable_ppt(gaussian::make_vacuum_state(3)),
                        dimension_error);
    }
}

TEST_CASE("closed-form separability thresholds") {
    SUBCASE("maximal fiber length against thermal photons") {
        CHECK(gaussian::lmax_fiber(0.5, 1.0) ==
              doctest::Approx(0.13732131844007753).epsilon(1e-14));
        // More squeezing survives longer, more heat shortens the reach.
        CHECK(gaussian::lmax_fiber(1.0, 1.0) > gaussian::lmax_fiber(0.5, 1.0));
        CHECK(gaussian::lmax_fiber(0.5, 2.0) < gaussian::lmax_fiber(0.5, 1.0));
        CHECK(gaussian::lmax_fiber(0.0, 1.0) == 0.0);
        CHECK_THROWS_AS(gaussian::lmax_fiber(0.5, 0.0), singular_threshold_error);
    }

    SUBCASE("critical thermal occupation of an absorbing fiber") {
        gaussian::ThresholdInputs in;
        in.zeta = 0.5;
        in.transmission = std::sqrt(0.5);
        in.sigma = +1;
        CHECK(gaussian::nth_threshold(in) ==
              doctest::Approx(0.31606027941427883).epsilon(1e-14));
        in.transmission = 1.0; // |R|^2 + |T|^2 = 1 diverges
        CHECK_THROWS_AS(gaussian::nth_threshold(in), singular_threshold_error);
    }

    SUBCASE("critical occupation of an amplifier, with frozen value") {
        gaussian::ThresholdInputs in;
        in.zeta = std::atanh(0.5);
        in.transmission = std::sqrt(1.2);
        in.sigma = -1;
        CHECK(gaussian::nth_threshold(in) == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("maximal gain depends only on squeezing and reflection") {
        const auto mg = gaussian::max_gain(std::atanh(0.5));
        CHECK(mg.t_max_sq == doctest::Approx(1.5).epsilon(1e-14));
        CHECK(mg.g_max == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(gaussian::max_gain(0.0).t_max_sq == doctest::Approx(1.0));
        const auto refl = gaussian::max_gain(std::atanh(0.5), std::sqrt(0.2));
        CHECK(refl.t_max_sq == doctest::Approx(1.2).epsilon(1e-12));
        CHECK_THROWS_AS(gaussian::max_gain(0.5, 1.0), domain_error);
    }
}

TEST_CASE("thresholds and the PPT margin agree at the boundary") {
    SUBCASE("absorber at the maximal length") {
        const double zeta = 0.4, n_th = 0.7;
        const double lmax = gaussian::lmax_fiber(zeta, n_th);
        auto margin_at = [&](double l) {
            const ScalarDevice dev{std::exp(-l), n_th, +1};
            return gaussian::is_separable_ppt(
                       gaussian::transform_moments(
                           gaussian::tmsv_covariance(zeta), dev, dev))
                .margin;
        };
        CHECK(std::abs(margin_at(lmax)) < 1e-12);
        CHECK(margin_at(lmax - 0.01) < 0.0);
        CHECK(margin_at(lmax + 0.01) > 0.0);
    }

    SUBCASE("amplifier at the maximal gain") {
        const double zeta = 0.6;
        const auto mg = gaussian::max_gain(zeta);
        auto margin_at = [&](double t2) {
            const ScalarDevice dev{std::sqrt(t2), 0.0, -1};
            return gaussian::is_separable_ppt(
                       gaussian::transform_moments(
                           gaussian::tmsv_covariance(zeta), dev, dev))
                .margin;
        };
        CHECK(std::abs(margin_at(mg.t_max_sq)) < 1e-12);
        CHECK(margin_at(mg.t_max_sq - 0.01) < 0.0);
        CHECK(margin_at(mg.t_max_sq + 0.01) > 0.0);
    }

    SUBCASE("absorber at the critical occupation") {
        gaussian::ThresholdInputs in;
        in.zeta = 0.5;
        in.transmission = std::sqrt(0.5);
        in.sigma = +1;
        const double n_star = gaussian::nth_threshold(in);
        const ScalarDevice dev{in.transmission, n_star, +1};
        const auto res = gaussian::is_separable_ppt(gaussian::transform_moments(
            gaussian::tmsv_covariance(0.5), dev, dev));
        CHECK(std::abs(res.margin) < 1e-12);
    }
}

TEST_CASE("moments extracted from number-basis states") {
    SUBCASE("vacuum maps to vacuum moments") {
        const auto g = gaussian::moments_from_fock(
            fock::DensityOperator::from_pure(
                fock::make_vacuum(fock::ModeLayout({3, 3}))));
        CHECK((g.cov - 0.5 * RMat::Identity(4, 4)).norm() < 1e-14);
        CHECK(g.mean.norm() < 1e-14);
    }

    SUBCASE("a deep squeezed ladder reproduces the ideal covariance") {
        const double q = 0.3, zeta = std::atanh(q);
        const auto tmsv = fock::make_tmsv(q, fock::ModeLayout({14, 14}));
        const auto g = gaussian::moments_from_fock(
            fock::DensityOperator::from_pure(tmsv.state));
        const GaussianState ideal = gaussian::tmsv_covariance(zeta);
        CHECK((g.cov - ideal.cov).cwiseAbs().maxCoeff() < 1e-9);
    }

    SUBCASE("number-basis channel and moment transformation commute") {
        const double q = 0.3, zeta = std::atanh(q), t = 0.8, n_th = 0.1;
        const auto tmsv = fock::make_tmsv(q, fock::ModeLayout({10, 10}));
        const auto out = fourport::apply_channel(
            tmsv.state, fourport::scalar_device(t, t, +1, n_th),
            {.device_cutoff = 10});
        const GaussianState via_fock = gaussian::moments_from_fock(out.state);
        const ScalarDevice dev{t, n_th, +1};
        const GaussianState via_moments = gaussian::transform_moments(
            gaussian::tmsv_covariance(zeta), dev, dev);
        CHECK((via_fock.cov - via_moments.cov).cwiseAbs().maxCoeff() < 1e-7);
        CHECK(via_fock.mean.norm() < 1e-12);
    }
}
