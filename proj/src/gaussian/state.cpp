#include "qlink/gaussian/state.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qlink/errors.hpp"

namespace qlink::gaussian {

RMat symplectic_form(int modes) {
    RMat omega = RMat::Zero(2 * modes, 2 * modes);
    for (int m = 0; m < modes; ++m) {
        omega(2 * m, 2 * m + 1) = 1.0;
        omega(2 * m + 1, 2 * m) = -1.0;
    }
    return omega;
}

void GaussianState::validate() const {
    if (mean.size() % 2 != 0 || mean.size() == 0)
        throw domain_error("mean vector must have even, positive length");
    if (cov.rows() != mean.size() || cov.cols() != mean.size())
        throw domain_error("covariance shape does not match the mean");
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 *
            std::max(1.0, cov.cwiseAbs().maxCoeff()))
        throw domain_error("covariance matrix is not symmetric");
    const int n = modes();
    const RMat omega = symplectic_form(n);
    Eigen::MatrixXcd h =
        cov.cast<std::complex<double>>() +
        std::complex<double>(0.0, 0.5) * omega.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw domain_error("covariance violates the uncertainty relation");
}

GaussianState make_vacuum_state(int modes) {
    GaussianState g;
    g.mean = RVec::Zero(2 * modes);
    g.cov = 0.5 * RMat::Identity(2 * modes, 2 * modes);
    return g;
}

GaussianState tmsv_covariance(double zeta) {
    const double ch = std::cosh(2.0 * zeta), sh = std::sinh(2.0 * zeta);
    GaussianState g;
    g.mean = RVec::Zero(4);
    g.cov = RMat::Zero(4, 4);
    g.cov(0, 0) = g.cov(1, 1) = g.cov(2, 2) = g.cov(3, 3) = 0.5 * ch;
    g.cov(0, 2) = g.cov(2, 0) = 0.5 * sh;
    g.cov(1, 3) = g.cov(3, 1) = -0.5 * sh;
    return g;
}

RVec symplectic_eigenvalues(const RMat& cov) {
    const int n = static_cast<int>(cov.rows()) / 2;
    const RMat omega = symplectic_form(n);
    Eigen::EigenSolver<RMat> es(omega * cov);
    if (es.info() != Eigen::Success)
        throw error("eigensolver failed on Omega cov");
    // Spectrum is +- i nu_k; collect positive imaginary parts.
    std::vector<double> nus;
    for (int k = 0; k < 2 * n; ++k) {
        const double im = es.eigenvalues()(k).imag();
        if (im > 0.0) nus.push_back(im);
    }
    if (static_cast<int>(nus.size()) != n)
        throw error("could not pair the symplectic spectrum");
    std::sort(nus.begin(), nus.end());
    RVec out(n);
    for (int k = 0; k < n; ++k) out(k) = nus[static_cast<size_t>(k)];
    return out;
}

} // namespace qlink::gaussian
