#pragma once

#include <vector>

#include "qlink/fock/layout.hpp"
#include "qlink/fourport/lambda.hpp"
#include "qlink/kernels/dense.hpp"

namespace qlink::fourport {

using fock::Index;
using fock::ModeLayout;
using kernels::Exec;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Fock-space unitary U = exp(-i H) whose quadratic Hamiltonian H implements
/// a mode transformation Lambda on two field modes plus two device modes:
/// U^dag (a; g or g^dag) U = Lambda (a; g or g^dag). H conserves total photon
/// number for sigma=+1 and (field - device) photon number for sigma=-1, so U
/// is block diagonal over the connected components of H's sparsity graph;
/// each block is exponentiated exactly by a dense Hermitian eigensolve, which
/// keeps the truncated U exactly unitary.
class Dilation {
  public:
    Dilation(const LambdaMatrix& lam, const ModeLayout& field_layout,
             int device_cutoff);

    const ModeLayout& joint() const { return joint_; }

    /// U |psi> on the joint register.
    Vec apply(const Vec& joint_state, Exec ex = kernels::default_exec()) const;

    /// U rho U^dag on the joint register.
    Mat sandwich(const Mat& joint_rho, Exec ex = kernels::default_exec()) const;

    Index block_count() const { return static_cast<Index>(blocks_.size()); }
    Index max_block_dim() const;

  private:
    ModeLayout joint_;
    std::vector<Index> perm_;     ///< permuted position -> joint index
    std::vector<Index> inv_perm_; ///< joint index -> permuted position
    std::vector<kernels::BlockU> blocks_;
};

} // namespace qlink::fourport
