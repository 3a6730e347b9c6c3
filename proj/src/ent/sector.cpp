#include "qlink/ent/sector.hpp"

#include <algorithm>

#include "qlink/errors.hpp"
#include "qlink/fock/ops.hpp"

namespace qlink::ent {

namespace {
constexpr double kSupportTol = 1e-12;
constexpr double kLeakTol = 1e-8;

// Support basis (eigenvalue > tol), eigenvalues descending, at most rank 2.
Mat support_basis(const fock::DensityOperator& marginal) {
    Eigen::SelfAdjointEigenSolver<Mat> es(marginal.matrix());
    const Eigen::VectorXd ev = es.eigenvalues(); // ascending
    const Index d = ev.size();
    int rank = 0;
    for (Index k = 0; k < d; ++k)
        if (ev(k) > kSupportTol) ++rank;
    if (rank > 2)
        throw unsupported_dimension_error(
            "marginal support has rank " + std::to_string(rank) +
            "; the two-qubit entanglement optimizers do not apply");
    if (rank == 0) rank = 1; // degenerate all-zero guard; keep top vector
    Mat basis(d, rank);
    for (int k = 0; k < rank; ++k) basis.col(k) = es.eigenvectors().col(d - 1 - k);
    return basis;
}
} // namespace

QubitSector project_qubit_sector(const fock::DensityOperator& rho,
                                 const Bipartition& cut) {
    cut.validate(rho.layout());
    const fock::DensityOperator rho_l = fock::partial_trace(rho, cut.left);
    const fock::DensityOperator rho_r = fock::partial_trace(rho, cut.right);
    const Mat wl = support_basis(rho_l);
    const Mat wr = support_basis(rho_r);
    const Index dl = wl.cols(), dr = wr.cols();

    // Split every full index into (left, right) sub-indices.
    const fock::ModeLayout& L = rho.layout();
    const fock::ModeLayout lay_l = L.select(cut.left);
    const fock::ModeLayout lay_r = L.select(cut.right);
    const Index n = L.dim();
    std::vector<Index> il(static_cast<size_t>(n)), ir(static_cast<size_t>(n));
    {
        std::vector<int> occ(static_cast<size_t>(L.modes()));
        std::vector<int> occ_l(cut.left.size()), occ_r(cut.right.size());
        for (Index idx = 0; idx < n; ++idx) {
            L.occupation(idx, occ);
            for (size_t k = 0; k < cut.left.size(); ++k)
                occ_l[k] = occ[static_cast<size_t>(cut.left[k])];
            for (size_t k = 0; k < cut.right.size(); ++k)
                occ_r[k] = occ[static_cast<size_t>(cut.right[k])];
            il[static_cast<size_t>(idx)] = lay_l.index(occ_l);
            ir[static_cast<size_t>(idx)] = lay_r.index(occ_r);
        }
    }

    Mat w = Mat::Zero(n, dl * dr);
    for (Index idx = 0; idx < n; ++idx)
        for (Index al = 0; al < dl; ++al)
            for (Index ar = 0; ar < dr; ++ar)
                w(idx, al * dr + ar) = wl(il[static_cast<size_t>(idx)], al) *
                                       wr(ir[static_cast<size_t>(idx)], ar);

    QubitSector sec;
    sec.dim_left = dl;
    sec.dim_right = dr;
    sec.isometry = w;
    Mat compressed = w.adjoint() * rho.matrix() * w;
    compressed = 0.5 * (compressed + compressed.adjoint()).eval();
    const double kept = compressed.trace().real();
    sec.discarded = 1.0 - kept;
    if (sec.discarded > kLeakTol)
        throw domain_error("state carries weight " +
                           std::to_string(sec.discarded) +
                           " outside the product of its local supports");
    sec.rho = compressed / kept;
    return sec;
}

} // namespace qlink::ent
