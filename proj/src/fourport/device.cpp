#include "qlink/fourport/device.hpp"

#include <cmath>

#include "qlink/errors.hpp"

namespace qlink::fourport {

double DeviceSpec::constraint_residual() const {
    const Mat2 r = transmission * transmission.adjoint() +
                   double(sigma) * absorption * absorption.adjoint() -
                   Mat2::Identity();
    return r.norm();
}

void DeviceSpec::validate() const {
    if (sigma != 1 && sigma != -1)
        throw invalid_device_error("sigma must be +1 (absorber) or -1 (amplifier)");
    if (n_th < 0.0)
        throw invalid_device_error("thermal occupation n_th must be >= 0");
    if (!(tolerance > 0.0))
        throw invalid_device_error("tolerance must be positive");
    const double res = constraint_residual();
    if (res > tolerance)
        throw invalid_device_error(
            "energy-conservation constraint violated (residual " +
            std::to_string(res) + ")");
    // Singular values of T: <= 1 for an absorber, >= 1 for an amplifier.
    Eigen::JacobiSVD<Mat2> svd(transmission);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (sigma == +1 && smax > 1.0 + 1e-8)
        throw invalid_device_error("absorbing device with gain > 1");
    if (sigma == -1 && smin < 1.0 - 1e-8)
        throw invalid_device_error("amplifying device with gain < 1");
}

DeviceSpec device_from_transmission(const Mat2& transmission, int sigma,
                                    double n_th, double tolerance) {
    if (sigma != 1 && sigma != -1)
        throw invalid_device_error("sigma must be +1 or -1");
    const Mat2 g =
        double(sigma) * (Mat2::Identity() - transmission * transmission.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat2> es(g);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw invalid_device_error(
            "sigma (I - T T^dag) is not PSD; no absorption block exists");
    const Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0);
    DeviceSpec spec;
    spec.transmission = transmission;
    spec.absorption = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
                      es.eigenvectors().adjoint();
    spec.sigma = sigma;
    spec.n_th = n_th;
    spec.tolerance = tolerance;
    spec.validate();
    return spec;
}

DeviceSpec scalar_device(cxd t1, cxd t2, int sigma, double n_th) {
    Mat2 t = Mat2::Zero();
    t(0, 0) = t1;
    t(1, 1) = t2;
    return device_from_transmission(t, sigma, n_th);
}

CsPair make_cs(const DeviceSpec& spec) {
    auto psd_sqrt = [](const Mat2& m) {
        Eigen::SelfAdjointEigenSolver<Mat2> es(m);
        const Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0);
        return Mat2(es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
                    es.eigenvectors().adjoint());
    };
    return {psd_sqrt(spec.transmission * spec.transmission.adjoint()),
            psd_sqrt(spec.absorption * spec.absorption.adjoint())};
}

cxd fiber_transmission(const FiberSpec& fiber) {
    if (fiber.l_over_att_length < 0.0)
        throw domain_error("fiber length ratio l/L must be >= 0");
    return std::exp(cxd(0.0, fiber.phase())) * std::exp(-fiber.l_over_att_length);
}

} // namespace qlink::fourport
