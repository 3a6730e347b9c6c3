#include "qlink/gaussian/from_fock.hpp"

#include <cmath>

#include "qlink/fock/ops.hpp"

namespace qlink::gaussian {

GaussianState moments_from_fock(const fock::DensityOperator& rho) {
    const fock::LadderMoments mom = fock::ladder_moments(rho);
    const int n = static_cast<int>(mom.mean.size());

    // Centered second moments.
    Eigen::MatrixXcd de(n, n), df(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            de(i, j) = mom.number(i, j) - std::conj(mom.mean(i)) * mom.mean(j);
            df(i, j) = mom.pair(i, j) - mom.mean(i) * mom.mean(j);
        }

    GaussianState out;
    out.mean = RVec::Zero(2 * n);
    out.cov = RMat::Zero(2 * n, 2 * n);
    const double rt2 = std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        out.mean(2 * i) = rt2 * mom.mean(i).real();
        out.mean(2 * i + 1) = rt2 * mom.mean(i).imag();
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double d = (i == j) ? 0.5 : 0.0;
            out.cov(2 * i, 2 * j) = df(i, j).real() + de(i, j).real() + d;
            out.cov(2 * i + 1, 2 * j + 1) =
                -df(i, j).real() + de(i, j).real() + d;
            const double xp = df(i, j).imag() + de(i, j).imag();
            out.cov(2 * i, 2 * j + 1) = xp;
            out.cov(2 * j + 1, 2 * i) = xp;
        }
    return out;
}

} // namespace qlink::gaussian
