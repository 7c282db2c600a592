#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "faswave/kernels.hpp"
#include "faswave/types.hpp"

namespace faswave {

/// One solution of N(k, omega) = 0 at real omega.  Propagating roots have
/// real k >= 0; evanescent roots store k = |xi| with the flag set (xi = i*k).
struct DispersionRoot {
    double omega = 0.0;
    double k = 0.0;
    bool evanescent = false;
    double residual = 0.0;  // |N| at the root
};

/// A traced dispersion curve, ordered by increasing omega.
struct Branch {
    int index = 0;
    std::vector<DispersionRoot> points;
    std::optional<double> cutoff_omega;  // set when the branch opened inside the sweep
};

/// A local maximum of group velocity along a branch.
struct GvPeak {
    double omega_star = 0.0;
    double k_star = 0.0;
    double v_gr = 0.0;
    double slope = 0.0;  // dk/domega = 1/v_gr
    int branch_index = -1;
};

struct RootScanOptions {
    bool include_evanescent = false;
    double evanescent_k_max = 0.0;  // 0: reuse k_max
    bool validate_resolution = true;
    double min_separation = 1e-6;
};

/// All propagating roots in [0, min(k_max, omega/c1)], ascending in k.
/// Scans N on a union of grids fine enough for both layers' oscillation,
/// brackets sign changes and refines by bisection with a secant polish.
/// With validate_resolution the scan is repeated at half the step and a
/// mismatch raises ResolutionError.
std::vector<DispersionRoot> find_real_roots(double omega, double k_max,
                                            const WaveguideConfig& cfg,
                                            double tol = 1e-10,
                                            const RootScanOptions& opt = {});

struct TraceOptions {
    double k_max = 0.0;  // 0: omega/c1 at each node
    double tol = 1e-10;
};

/// Connects per-omega root sets into branches by nearest predicted k.
/// New branches open at cutoffs; indices are stable across the sweep.
std::vector<Branch> trace_branches(std::span<const double> omega_grid,
                                   const WaveguideConfig& cfg,
                                   const TraceOptions& opt = {});

/// Group velocity (dk/domega)^-1 = -dN/dk / dN/domega at a propagating root.
/// Throws CutoffError when dN/dk is vanishingly small.
double group_velocity(const DispersionRoot& root, const WaveguideConfig& cfg);

/// Strict interior local maxima of group velocity along each branch, refined
/// by a parabolic fit of three samples and re-solving the root at the refined
/// frequency.  Peaks on the window edge are excluded (and reported through
/// `excluded` when given).  Result is sorted by omega_star.
std::vector<GvPeak> find_gv_peaks(std::span<const Branch> branches,
                                  std::pair<double, double> omega_window,
                                  const WaveguideConfig& cfg,
                                  std::vector<GvPeak>* excluded = nullptr);

/// Cutoff frequencies in [omega_lo, omega_hi]: real solutions of N(0, omega) = 0.
std::vector<double> find_cutoffs(double omega_lo, double omega_hi,
                                 const WaveguideConfig& cfg);

namespace detail {

/// Parabolic refinement of a sampled maximum: given three abscissae/values
/// around a discrete peak, returns the vertex abscissa (clamped to [x0, x2]).
double parabolic_peak(double x0, double x1, double x2, double y0, double y1, double y2);

/// Refines one root of N(., omega) = 0 near k0 by a guarded Newton.
double polish_root(double k0, double omega, const WaveguideConfig& cfg);

}  // namespace detail

}  // namespace faswave
