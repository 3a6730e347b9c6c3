#include "qlink/fock/state.hpp"

#include <cmath>

#include "qlink/errors.hpp"

namespace qlink::fock {

namespace {
constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kLeakageBudget = 1e-4;
constexpr double kEigenFloor = -1e-10;
} // namespace

FockState::FockState(ModeLayout layout, Vec amplitudes)
    : layout_(std::move(layout)), amp_(std::move(amplitudes)) {
    if (amp_.size() != layout_.dim())
        throw dimension_error("amplitude vector does not match layout dimension");
    const double n = amp_.norm();
    if (n < 1e-14) throw domain_error("cannot normalize a null state vector");
    amp_ /= n;
}

DensityOperator::DensityOperator(ModeLayout layout, Mat matrix,
                                 bool truncated_output, Validation level)
    : layout_(std::move(layout)), mat_(std::move(matrix)),
      truncated_output_(truncated_output) {
    if (mat_.rows() != layout_.dim() || mat_.cols() != layout_.dim())
        throw dimension_error("density matrix does not match layout dimension");
    validate(level);
}

std::optional<std::string> DensityOperator::validate(Validation level) const {
    const double scale = std::max(1.0, mat_.cwiseAbs().maxCoeff());
    const double herm = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermTol * scale)
        throw domain_error("density operator not Hermitian (residual " +
                           std::to_string(herm) + ")");
    std::optional<std::string> note;
    const double deficit = 1.0 - mat_.trace().real();
    if (std::abs(deficit) > kTraceTol) {
        if (truncated_output_ && deficit > 0.0 && deficit < kLeakageBudget)
            note = "truncated-channel output is missing " +
                   std::to_string(deficit) + " of trace";
        else
            throw domain_error("density operator trace deviates from one by " +
                               std::to_string(deficit));
    }
    if (level == Validation::deep) {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (mat_ + mat_.adjoint()),
                                              Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < kEigenFloor)
            throw domain_error("density operator has eigenvalue below floor: " +
                               std::to_string(es.eigenvalues().minCoeff()));
    }
    return note;
}

DensityOperator DensityOperator::from_pure(const FockState& psi) {
    Mat m = psi.amplitudes() * psi.amplitudes().adjoint();
    return DensityOperator(psi.layout(), std::move(m));
}

} // namespace qlink::fock
