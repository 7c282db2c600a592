#pragma once

#include <span>
#include <vector>

#include "faswave/dispersion.hpp"
#include "faswave/types.hpp"

namespace faswave {

/// Least-squares line k = omega/v + c through the peak points, plus the
/// per-pair finite-difference velocities.
struct LinearFit {
    double v = 0.0;
    double c = 0.0;
    std::vector<double> pair_v;  // size peaks-1
};

LinearFit fit_linear(std::span<const GvPeak> peaks);

/// beta ~ pi / peak spacing, per gap and averaged.
struct BetaEstimate {
    double mean = 0.0;
    std::vector<double> per_gap;  // size peaks-1
};

BetaEstimate estimate_beta(std::span<const GvPeak> peaks);

/// Per-peak looseness a_n = (slope_n - 1/v)/beta_n, with beta_n the mean of
/// the adjacent per-gap values.  Negative values are flagged, not fatal.
struct AnchorDecay {
    double omega_star = 0.0;
    double a = 0.0;
    bool negative = false;
};

std::vector<AnchorDecay> estimate_a(std::span<const GvPeak> peaks, double v);

/// The tangent-plus-line approximation of the dispersion diagram near the
/// pseudo-branch:  xi_a(omega) = a(omega) tan(beta omega + gamma) + omega/v + c,
/// with the tangent zeros anchored at the group-velocity peaks and a(omega)
/// interpolated linearly between the per-peak values.
struct TangentModel {
    double beta = 0.0;
    double gamma = 0.0;
    double v = 0.0;
    double c = 0.0;
    struct Anchor {
        double omega_star;
        double k_star;
        double a;
    };
    std::vector<Anchor> anchors;
    std::vector<double> pair_v;

    /// Piecewise-linear a(omega); constant extrapolation outside the anchors.
    double a_at(double omega) const;
    /// xi_a(omega); unbounded near tangent poles.
    double eval(double omega) const;
    /// d xi_a / d omega.
    double slope(double omega) const;
};

TangentModel build_model(std::span<const GvPeak> peaks);

/// v from the global linear fit, kappa = a(omega0).  Values outside the
/// anchor span extrapolate (constant a) and are accepted silently; callers
/// wanting stricter behavior can check the anchor range themselves.
FasEstimate estimate_fas_pseudo(std::span<const GvPeak> peaks, double omega0);

}  // namespace faswave
