#pragma once

#include "qlink/fourport/device.hpp"

namespace qlink::fourport {

/// 4x4 mode-transformation matrix acting on (field_1, field_2, dev_1, dev_2)
/// annihilation operators for an absorber (sigma=+1) or on
/// (field, field, dev^dag, dev^dag) for an amplifier (sigma=-1). It satisfies
/// Lambda J Lambda^dag = J with J = diag(1, 1, sigma, sigma).
struct LambdaMatrix {
    Mat4 lambda = Mat4::Identity();
    int sigma = +1;

    Mat4 j_form() const;
    /// Frobenius norm of Lambda J Lambda^dag - J.
    double j_residual() const;
};

/// Closed-form block construction
///   [ T                A          ]
///   [ -sigma S C^{-1} T   C S^{-1} A ]
/// with C = sqrt(T T^dag), S = sqrt(A A^dag). Throws degenerate_device_error
/// when C or S is singular (fully absorbing / fully transmitting fiber).
LambdaMatrix make_lambda(const DeviceSpec& spec);

/// Same matrix family, extended continuously to singular C or S by replacing
/// C^{-1} T and S^{-1} A with their limits along the device family (SVD-based
/// pseudoinverse plus null-space completion). Agrees with make_lambda on
/// nondegenerate devices and always verifies the J relation before returning.
LambdaMatrix make_lambda_limit(const DeviceSpec& spec);

/// Hermitian generator of a passive (sigma=+1) transformation:
/// Lambda = exp(-i H). Throws degenerate_device_error if Lambda is not
/// unitary within tolerance.
Mat4 passive_generator(const LambdaMatrix& lam);

/// Quadratic generator of an amplifying (sigma=-1) transformation,
/// Lambda = exp(-i M) with M = [[P, R], [-R^dag, -Q^T]] for Hermitian P, Q.
/// The corresponding Fock-space Hamiltonian is
///   H = sum P_jk a_j^dag a_k + sum Q_jk g_j^dag g_k
///     + sum (R_jk a_j^dag g_k^dag + conj(R_jk) g_k a_j),
/// which conserves (field photons - device photons).
struct BogoliubovGenerator {
    Mat2 field_hop;  ///< P
    Mat2 device_hop; ///< Q
    Mat2 pair;       ///< R
};
BogoliubovGenerator bogoliubov_generator(const LambdaMatrix& lam);

} // namespace qlink::fourport
