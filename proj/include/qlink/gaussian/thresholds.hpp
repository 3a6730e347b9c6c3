#pragma once

#include <complex>

namespace qlink::gaussian {

/// Inputs for the thermal-occupation separability threshold of a two-mode
/// squeezed vacuum sent through a beam-splitter-like device with scalar
/// reflection R and transmission T on the probed arm.
struct ThresholdInputs {
    double zeta = 0.0;                   ///< squeezing parameter
    std::complex<double> reflection = 0.0;
    std::complex<double> transmission = 0.0;
    int sigma = +1;
};

/// Device thermal occupation above which the transmitted state becomes
/// separable:
///   n_th >= [(1-sigma)(1-|R|^2) + |T|^2 (sigma - e^{-2|zeta|})]
///           / [2 sigma (1 - |R|^2 - |T|^2)].
/// Throws singular_threshold_error when the denominator vanishes
/// (|R|^2 + |T|^2 -> 1).
double nth_threshold(const ThresholdInputs& in);

/// Maximum fiber length (as l/L) with surviving entanglement for a two-mode
/// squeezed vacuum against thermal noise n_th > 0:
///   l_max/L = (1/2) ln[1 + (1 - e^{-2|zeta|}) / (2 n_th)].
/// Throws singular_threshold_error for n_th <= 0 (the bound diverges).
double lmax_fiber(double zeta, double n_th);

/// Largest amplifier working point with surviving entanglement at zero
/// temperature: |T_max|^2 = 2 (1 - |R|^2) / (1 + e^{-2|zeta|}); the excess
/// intensity gain is g_max = |T_max|^2 - 1 (= tanh|zeta| at R = 0).
struct MaxGain {
    double t_max_sq;
    double g_max;
};
MaxGain max_gain(double zeta, std::complex<double> reflection = 0.0);

} // namespace qlink::gaussian
