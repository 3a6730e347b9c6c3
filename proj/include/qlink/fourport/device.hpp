#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qlink::fourport {

using cxd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

/// Two-fiber absorbing or amplifying device. `transmission` (T) and
/// `absorption` (A) are the 2x2 blocks coupling the two field modes to the
/// two internal device modes; energy conservation requires
/// T T^dag + sigma A A^dag = I with sigma = +1 for an absorber (||T|| <= 1)
/// and sigma = -1 for an amplifier (gains >= 1). The device modes enter in a
/// thermal state with mean occupation n_th.
struct DeviceSpec {
    Mat2 transmission = Mat2::Identity();
    Mat2 absorption = Mat2::Zero();
    int sigma = +1;
    double n_th = 0.0;
    double tolerance = 1e-10; ///< allowed constraint residual

    /// Frobenius norm of T T^dag + sigma A A^dag - I.
    double constraint_residual() const;
    /// Throws invalid_device_error on any violated requirement.
    void validate() const;
};

/// Complete A from T as the PSD square root of sigma (I - T T^dag); throws
/// invalid_device_error when that matrix is not PSD for the given sigma.
DeviceSpec device_from_transmission(const Mat2& transmission, int sigma,
                                    double n_th, double tolerance = 1e-10);

/// Diagonal device with per-fiber scalar transmissions.
DeviceSpec scalar_device(cxd t1, cxd t2, int sigma, double n_th = 0.0);

/// Commuting PSD factors C = sqrt(T T^dag), S = sqrt(A A^dag).
struct CsPair {
    Mat2 c;
    Mat2 s;
};
CsPair make_cs(const DeviceSpec& spec);

/// Fiber segment: scalar transmission e^{i phi} e^{-l/L} with phase
/// phi = n_refr * omega * l / c.
struct FiberSpec {
    double l_over_att_length = 0.0; ///< propagation length over attenuation length
    double omega_l_over_c = 0.0;    ///< optical path phase for unit refractive index
    double n_refr = 1.0;            ///< real part of the refractive index

    double phase() const { return n_refr * omega_l_over_c; }
};
cxd fiber_transmission(const FiberSpec& fiber);

} // namespace qlink::fourport
