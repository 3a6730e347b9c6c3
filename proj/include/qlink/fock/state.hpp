#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "qlink/fock/layout.hpp"

namespace qlink::fock {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

/// How much checking a density operator gets. `fast` verifies shape,
/// hermiticity and trace (O(n^2)); `deep` additionally bounds the most
/// negative eigenvalue (O(n^3)).
enum class Validation { fast, deep };

/// Normalized pure state over a ModeLayout. Immutable after construction.
class FockState {
  public:
    FockState(ModeLayout layout, Vec amplitudes);

    const ModeLayout& layout() const { return layout_; }
    const Vec& amplitudes() const { return amp_; }
    cxd amplitude(std::span<const int> occ) const {
        return amp_(layout_.index(occ));
    }

  private:
    ModeLayout layout_;
    Vec amp_;
};

/// Density operator over a ModeLayout. Hermitian, unit trace, PSD up to the
/// validation tolerances. Operators produced by a truncated channel carry
/// `truncated_output() == true`, which relaxes the trace check to a 1e-4
/// leakage budget (the deficit is reported, not silently repaired).
class DensityOperator {
  public:
    DensityOperator(ModeLayout layout, Mat matrix, bool truncated_output = false,
                    Validation level = Validation::fast);

    const ModeLayout& layout() const { return layout_; }
    const Mat& matrix() const { return mat_; }
    Index dim() const { return mat_.rows(); }
    bool truncated_output() const { return truncated_output_; }

    double trace_real() const { return mat_.trace().real(); }

    /// Throws on violation; returns a human-readable note when a tolerated
    /// deviation was observed (truncated-output trace deficit).
    std::optional<std::string> validate(Validation level) const;

    static DensityOperator from_pure(const FockState& psi);

  private:
    ModeLayout layout_;
    Mat mat_;
    bool truncated_output_ = false;
};

} // namespace qlink::fock
