#include "qlink/fourport/lambda.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "qlink/errors.hpp"

namespace qlink::fourport {

namespace {
// Below this scale an eigenvalue of C or S counts as singular: the closed
// block formula loses the corresponding row direction.
constexpr double kSingularTol = 1e-7;
} // namespace

Mat4 LambdaMatrix::j_form() const {
    Mat4 j = Mat4::Identity();
    j(2, 2) = j(3, 3) = double(sigma);
    return j;
}

double LambdaMatrix::j_residual() const {
    const Mat4 j = j_form();
    return (lambda * j * lambda.adjoint() - j).norm();
}

LambdaMatrix make_lambda(const DeviceSpec& spec) {
    spec.validate();
    const auto cs = make_cs(spec);
    Eigen::SelfAdjointEigenSolver<Mat2> ec(cs.c), es(cs.s);
    if (ec.eigenvalues().minCoeff() <= kSingularTol)
        throw degenerate_device_error(
            "C = sqrt(T T^dag) is singular (fully absorbing fiber); the "
            "closed-form blocks are undefined");
    if (es.eigenvalues().minCoeff() <= kSingularTol)
        throw degenerate_device_error(
            "S = sqrt(A A^dag) is singular (lossless fiber); the closed-form "
            "blocks are undefined");
    LambdaMatrix out;
    out.sigma = spec.sigma;
    out.lambda.topLeftCorner<2, 2>() = spec.transmission;
    out.lambda.topRightCorner<2, 2>() = spec.absorption;
    out.lambda.bottomLeftCorner<2, 2>() =
        -double(spec.sigma) * cs.s * cs.c.inverse() * spec.transmission;
    out.lambda.bottomRightCorner<2, 2>() = cs.c * cs.s.inverse() * spec.absorption;
    const double res = out.j_residual();
    if (res > 1e-9)
        throw degenerate_device_error(
            "block construction violates the J relation (residual " +
            std::to_string(res) + ")");
    return out;
}

LambdaMatrix make_lambda_limit(const DeviceSpec& spec) {
    spec.validate();
    const Mat2& t = spec.transmission;
    const Mat2& a = spec.absorption;
    const double sg = double(spec.sigma);

    Eigen::JacobiSVD<Mat2> svd_t(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Mat2 u = svd_t.matrixU();
    const Eigen::Vector2d c = svd_t.singularValues();

    // A A^dag = sigma (I - T T^dag) shares eigenvectors with T T^dag, so it
    // is diagonal in the u basis up to the constraint residual.
    const Mat2 aa_u = u.adjoint() * (a * a.adjoint()) * u;
    if (std::abs(aa_u(0, 1)) > 1e-6)
        throw invalid_device_error(
            "A A^dag does not commute with T T^dag; inconsistent device");
    Eigen::Vector2d s;
    for (int k = 0; k < 2; ++k)
        s(k) = std::sqrt(std::max(0.0, aa_u(k, k).real()));

    Eigen::JacobiSVD<Mat2> svd_a(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const int null_count =
        int(s(0) <= kSingularTol) + int(s(1) <= kSingularTol);

    Mat2 b21 = Mat2::Zero(), b22 = Mat2::Zero();
    for (int k = 0; k < 2; ++k) {
        // Row direction of C^{-1} T: u_k^dag T / c_k, continued by the right
        // singular vector when the fiber absorbs this channel completely.
        Eigen::RowVector2cd trow;
        if (c(k) > kSingularTol)
            trow = (u.col(k).adjoint() * t) / c(k);
        else
            trow = svd_t.matrixV().col(k).adjoint();
        // Row direction of S^{-1} A, continued by A's right null space when
        // this channel is lossless.
        Eigen::RowVector2cd arow;
        if (s(k) > kSingularTol)
            arow = (u.col(k).adjoint() * a) / s(k);
        else if (null_count == 2)
            arow = u.col(k).adjoint();
        else
            arow = svd_a.matrixV().col(1).adjoint(); // unique null direction
        b21.noalias() += -sg * s(k) * (u.col(k) * trow);
        b22.noalias() += c(k) * (u.col(k) * arow);
    }

    LambdaMatrix out;
    out.sigma = spec.sigma;
    out.lambda.topLeftCorner<2, 2>() = t;
    out.lambda.topRightCorner<2, 2>() = a;
    out.lambda.bottomLeftCorner<2, 2>() = b21;
    out.lambda.bottomRightCorner<2, 2>() = b22;
    const double res = out.j_residual();
    if (res > 1e-9)
        throw degenerate_device_error(
            "limit construction violates the J relation (residual " +
            std::to_string(res) + ")");
    return out;
}

Mat4 passive_generator(const LambdaMatrix& lam) {
    if (lam.sigma != +1)
        throw domain_error("passive generator is defined for sigma=+1 only");
    if ((lam.lambda * lam.lambda.adjoint() - Mat4::Identity()).norm() > 1e-8)
        throw degenerate_device_error("sigma=+1 transformation is not unitary");
    // Spectral logarithm through a Schur form; unitary matrices are normal,
    // so the triangular factor is diagonal up to roundoff.
    Eigen::ComplexSchur<Mat4> schur(lam.lambda);
    if (schur.info() != Eigen::Success)
        throw degenerate_device_error("Schur decomposition failed");
    const Mat4& tri = schur.matrixT();
    const Mat4& q = schur.matrixU();
    double off = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) off += std::norm(tri(i, j));
    if (std::sqrt(off) > 1e-7)
        throw degenerate_device_error("unitary factor is not normal");
    Eigen::Vector4d theta;
    for (int k = 0; k < 4; ++k) theta(k) = -std::arg(tri(k, k));
    Mat4 h = q * theta.cast<cxd>().asDiagonal() * q.adjoint();
    h = 0.5 * (h + h.adjoint()).eval();
    const Mat4 rec = (cxd(0.0, -1.0) * h).exp();
    if ((rec - lam.lambda).norm() > 1e-8)
        throw degenerate_device_error("generator does not reproduce the "
                                      "transformation");
    return h;
}

namespace {

// i log(Lambda) on a branch chosen away from the eigenvalue phases, then
// projected onto the algebra M = J M^dag J that quadratic Hamiltonians
// generate. Any single consistent branch preserves the (lambda, 1/conj
// lambda) eigenvalue pairing as long as no eigenvalue sits on the cut.
Mat4 j_compatible_log(const LambdaMatrix& lam) {
    Eigen::ComplexEigenSolver<Mat4> es(lam.lambda);
    if (es.info() != Eigen::Success)
        throw degenerate_device_error("eigendecomposition failed");
    const Eigen::Vector4cd d = es.eigenvalues();
    const Mat4 v = es.eigenvectors();

    std::array<double, 4> ang{};
    for (int k = 0; k < 4; ++k) {
        if (std::abs(d(k)) < 1e-12)
            throw degenerate_device_error("transformation is singular");
        ang[static_cast<size_t>(k)] = std::arg(d(k)); // in (-pi, pi]
    }
    std::sort(ang.begin(), ang.end());
    // Place the branch cut in the middle of the widest phase gap.
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double best_gap = ang[0] + two_pi - ang[3];
    double cut = ang[3] + 0.5 * best_gap;
    for (int k = 0; k < 3; ++k) {
        const double gap = ang[static_cast<size_t>(k) + 1] - ang[static_cast<size_t>(k)];
        if (gap > best_gap) {
            best_gap = gap;
            cut = ang[static_cast<size_t>(k)] + 0.5 * gap;
        }
    }

    Eigen::Vector4cd lg;
    for (int k = 0; k < 4; ++k) {
        double a = std::arg(d(k));
        while (a > cut) a -= two_pi;
        while (a <= cut - two_pi) a += two_pi;
        lg(k) = cxd(std::log(std::abs(d(k))), a);
    }
    Mat4 m = cxd(0.0, 1.0) * (v * lg.asDiagonal() * v.inverse());

    const Mat4 j = lam.j_form();
    m = 0.5 * (m + j * m.adjoint() * j).eval();

    const Mat4 rec = (cxd(0.0, -1.0) * m).exp();
    const double res = (rec - lam.lambda).norm();
    if (res > 1e-8 * std::max(1.0, lam.lambda.norm()))
        throw degenerate_device_error(
            "no quadratic generator reproduces the transformation (residual " +
            std::to_string(res) + ")");
    return m;
}

} // namespace

BogoliubovGenerator bogoliubov_generator(const LambdaMatrix& lam) {
    if (lam.sigma != -1)
        throw domain_error("pair-creation generator is defined for sigma=-1 only");
    const Mat4 m = j_compatible_log(lam);
    BogoliubovGenerator g;
    g.field_hop = 0.5 * (m.topLeftCorner<2, 2>() +
                         m.topLeftCorner<2, 2>().adjoint());
    g.pair = m.topRightCorner<2, 2>();
    const Mat2 qt = -m.bottomRightCorner<2, 2>().transpose();
    g.device_hop = 0.5 * (qt + qt.adjoint());
    return g;
}

} // namespace qlink::fourport
