#pragma once

#include <optional>
#include <span>
#include <vector>

#include "faswave/types.hpp"

namespace faswave {

/// A root of the leaky-wave dispersion relation (lower medium as half-space):
///   rho1 * alpha2 * tan(alpha2 H2) + i * rho2 * alpha1 = 0,
/// with alpha1 on the outgoing branch (principal square root, Re >= 0), so
/// the radiation leaks downward into the half-space.
struct LeakyRoot {
    Complex omega;
    Complex xi;
    double residual = 0.0;
};

struct LeakyOptions {
    double tol = 1e-12;
    int max_iterations = 50;
};

/// Newton solve from `seed` (default omega/c2 * 1.05 + 0.1i).  For real omega
/// a root with Im[xi] <= 0 is rejected and the solve retries from perturbed
/// seeds; ConvergenceError if all fail.
LeakyRoot solve_leaky(Complex omega, const WaveguideConfig& cfg,
                      std::optional<Complex> seed = std::nullopt,
                      const LeakyOptions& opt = {});

/// Warm-started sweep over Re omega at fixed Im omega.
std::vector<LeakyRoot> sweep_leaky(std::span<const double> omega_re, double omega_im,
                                   const WaveguideConfig& cfg, const LeakyOptions& opt = {});

/// v = 1/Re[d xi_L/d omega] (centered difference, delta = 0.1);
/// kappa = Im[xi_L(omega0)].
FasEstimate estimate_fas_leaky(double omega0, const WaveguideConfig& cfg,
                               double delta = 0.1);

}  // namespace faswave
