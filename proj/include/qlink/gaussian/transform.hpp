#pragma once

#include <complex>
#include <vector>

#include "qlink/gaussian/state.hpp"

namespace qlink::gaussian {

using cxd = std::complex<double>;

/// Per-mode scalar device acting on one fiber: transmission T (|T| <= 1 for
/// sigma=+1, |T| >= 1 for sigma=-1) with thermal device occupation n_th.
struct ScalarDevice {
    cxd transmission = 1.0;
    double n_th = 0.0;
    int sigma = +1;

    void validate() const;
};

/// Moment map of the device channel on first and second moments:
///   mean -> X mean,  cov -> X cov X^T + N
/// where X applies |T| and a phase rotation by arg(T) on each mode and the
/// added noise per mode is  (1 - |T|^2)(n_th + 1/2) I  for an absorber and
/// (|T|^2 - 1)(n_th + 1/2) I  for an amplifier.
GaussianState transform_moments(const GaussianState& in,
                                const std::vector<ScalarDevice>& devices);

/// Two-mode convenience overload.
GaussianState transform_moments(const GaussianState& in, const ScalarDevice& m1,
                                const ScalarDevice& m2);

} // namespace qlink::gaussian
