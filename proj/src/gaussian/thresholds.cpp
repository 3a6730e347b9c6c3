#include "qlink/gaussian/thresholds.hpp"

#include <cmath>

#include "qlink/errors.hpp"

namespace qlink::gaussian {

double nth_threshold(const ThresholdInputs& in) {
    if (in.sigma != 1 && in.sigma != -1)
        throw domain_error("sigma must be +1 or -1");
    const double r2 = std::norm(in.reflection);
    const double t2 = std::norm(in.transmission);
    const double sg = double(in.sigma);
    const double denom = 2.0 * sg * (1.0 - r2 - t2);
    if (std::abs(denom) < 1e-12)
        throw singular_threshold_error(
            "threshold diverges as |R|^2 + |T|^2 -> 1");
    const double numer =
        (1.0 - sg) * (1.0 - r2) + t2 * (sg - std::exp(-2.0 * std::abs(in.zeta)));
    return numer / denom;
}

double lmax_fiber(double zeta, double n_th) {
    if (n_th <= 0.0)
        throw singular_threshold_error(
            "maximum length diverges for n_th <= 0; every length keeps the "
            "state entangled at zero temperature");
    return 0.5 * std::log1p((1.0 - std::exp(-2.0 * std::abs(zeta))) /
                            (2.0 * n_th));
}

MaxGain max_gain(double zeta, std::complex<double> reflection) {
    const double r2 = std::norm(reflection);
    if (r2 >= 1.0) throw domain_error("|R| must be < 1");
    const double t2 = 2.0 * (1.0 - r2) / (1.0 + std::exp(-2.0 * std::abs(zeta)));
    return {t2, t2 - 1.0};
}

} // namespace qlink::gaussian
