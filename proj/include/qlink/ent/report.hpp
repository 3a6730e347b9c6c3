#pragma once

#include <string>
#include <vector>

#include "qlink/fock/layout.hpp"

namespace qlink::ent {

/// Which entanglement quantity a report carries. All entropic values are in
/// nats (natural logarithm).
enum class Measure {
    reduced_entropy,
    negativity,
    log_negativity,
    relative_entropy,
    ls_entanglement,
    upper_bound,
};

std::string measure_name(Measure m);

/// Value plus convergence metadata. Closed-form measures report
/// converged = true with zero iterations and zero residual; iterative ones
/// report their certificate residual (duality gap or constraint violation).
struct EntanglementReport {
    Measure measure;
    double value = 0.0;
    bool converged = true;
    int iterations = 0;
    double residual = 0.0;
};

/// Two-block split of a mode register.
struct Bipartition {
    std::vector<int> left;
    std::vector<int> right;

    /// Left block = the listed modes (strictly increasing), right block = the
    /// rest. Throws dimension_error if the split is invalid.
    static Bipartition against_rest(const fock::ModeLayout& layout,
                                    std::vector<int> left_modes);
    void validate(const fock::ModeLayout& layout) const;
};

} // namespace qlink::ent
