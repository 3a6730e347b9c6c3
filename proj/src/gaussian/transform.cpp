#include "qlink/gaussian/transform.hpp"

#include <cmath>

#include "qlink/errors.hpp"

namespace qlink::gaussian {

void ScalarDevice::validate() const {
    if (sigma != 1 && sigma != -1)
        throw invalid_device_error("sigma must be +1 or -1");
    if (n_th < 0.0) throw invalid_device_error("n_th must be >= 0");
    const double t = std::abs(transmission);
    if (sigma == +1 && t > 1.0 + 1e-10)
        throw invalid_device_error("absorbing mode with |T| > 1");
    if (sigma == -1 && t < 1.0 - 1e-10)
        throw invalid_device_error("amplifying mode with |T| < 1");
}

GaussianState transform_moments(const GaussianState& in,
                                const std::vector<ScalarDevice>& devices) {
    in.validate();
    if (static_cast<int>(devices.size()) != in.modes())
        throw dimension_error("one scalar device per mode required");

    const int n = in.modes();
    RMat x = RMat::Zero(2 * n, 2 * n);
    RMat noise = RMat::Zero(2 * n, 2 * n);
    for (int m = 0; m < n; ++m) {
        const ScalarDevice& dev = devices[static_cast<size_t>(m)];
        dev.validate();
        const double t = std::abs(dev.transmission);
        const double ph = std::arg(dev.transmission);
        // |T| times a phase rotation on the (x, p) plane.
        x(2 * m, 2 * m) = t * std::cos(ph);
        x(2 * m, 2 * m + 1) = -t * std::sin(ph);
        x(2 * m + 1, 2 * m) = t * std::sin(ph);
        x(2 * m + 1, 2 * m + 1) = t * std::cos(ph);
        const double added = (dev.sigma == +1 ? (1.0 - t * t) : (t * t - 1.0)) *
                             (dev.n_th + 0.5);
        if (added < -1e-12)
            throw invalid_device_error("negative added noise; inconsistent device");
        noise(2 * m, 2 * m) = noise(2 * m + 1, 2 * m + 1) = std::max(0.0, added);
    }

    GaussianState out;
    out.mean = x * in.mean;
    out.cov = x * in.cov * x.transpose() + noise;
    out.validate();
    return out;
}

GaussianState transform_moments(const GaussianState& in, const ScalarDevice& m1,
                                const ScalarDevice& m2) {
    return transform_moments(in, std::vector<ScalarDevice>{m1, m2});
}

} // namespace qlink::gaussian
