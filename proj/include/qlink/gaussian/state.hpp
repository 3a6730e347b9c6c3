#pragma once

#include <Eigen/Dense>

namespace qlink::gaussian {

using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Gaussian state in quadrature form. Ordering is (x_1, p_1, x_2, p_2, ...)
/// with x = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)) and hbar = 1,
/// so the vacuum covariance is (1/2) I.
struct GaussianState {
    RVec mean;
    RMat cov;

    int modes() const { return static_cast<int>(mean.size()) / 2; }

    /// Shape, symmetry and the uncertainty relation cov + (i/2) Omega >= 0
    /// (within 1e-9). Throws domain_error on violation.
    void validate() const;
};

/// Symplectic form for n modes, block diag of [[0, 1], [-1, 0]].
RMat symplectic_form(int modes);

/// Vacuum on n modes.
GaussianState make_vacuum_state(int modes);

/// Two-mode squeezed vacuum with squeezing parameter zeta:
/// cov = (1/2) [[cosh(2 zeta) I, sinh(2 zeta) Z], [sinh(2 zeta) Z, cosh(2 zeta) I]]
/// with Z = diag(1, -1); zero mean.
GaussianState tmsv_covariance(double zeta);

/// Symplectic eigenvalues (moduli of the imaginary parts of the spectrum of
/// Omega cov), ascending. A state is physical iff all are >= 1/2.
RVec symplectic_eigenvalues(const RMat& cov);

} // namespace qlink::gaussian
