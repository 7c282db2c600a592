#pragma once

#include <span>
#include <string>
#include <vector>

#include "faswave/dispersion.hpp"
#include "faswave/types.hpp"

namespace faswave {

/// A dispersion root continued into the complex omega plane.
struct ComplexRoot {
    Complex omega;
    Complex k;
    double residual = 0.0;
    std::string sheet_tag;  // origin of the continuation path
};

/// An order-2 branch point of xi(omega): N = 0 and dN/dk = 0.
struct BranchPoint {
    Complex omega_bp;
    Complex k_bp;
    int order = 2;
    int group = 0;  // +1 above the real axis, 0 on it, -1 below
};

struct ContinuationOptions {
    double tol = 1e-11;          // relative Newton residual target
    int newton_limit = 5;        // iterations before the step is halved
    int max_halvings = 40;
    double bp_guard = 1e-8;      // relative |dN/dk| collision threshold
};

/// Predictor-corrector continuation of a root of N(., omega) = 0 along a
/// polyline of omega waypoints.  Returns the root at every waypoint
/// (excluding the start).  Throws BranchPointCollisionError when dN/dk
/// collapses on the way and ConvergenceError when stepping stalls.
std::vector<ComplexRoot> continue_root(const ComplexRoot& start,
                                       std::span<const Complex> path,
                                       const WaveguideConfig& cfg,
                                       const ContinuationOptions& opt = {});

struct BranchPointSearchOptions {
    double dedup_tol = 1e-4;
    double coarse_step_re = 1.0;
    double coarse_step_im = 0.5;
};

/// All branch points inside the closed rectangle [re_lo, re_hi] x [im_lo, im_hi]
/// of complex omega.  Off-axis points solve {N = 0, dN/dk = 0} by a damped
/// 2x2 Newton seeded from quasi-crossings of the real diagram and from a
/// coarse grid; on-axis points are the cutoffs (k = 0).
std::vector<BranchPoint> find_branch_points(double re_lo, double re_hi, double im_lo,
                                            double im_hi, const WaveguideConfig& cfg,
                                            const BranchPointSearchOptions& opt = {});

struct Sheet0Options {
    double trace_step = 0.02;     // omega step for the real-diagram trace
    bool validate_height = true;  // require im_height above the branch points
    double ambiguity_ratio = 0.10;
};

/// The xi_0' branch at fixed Im omega = im_height: seeds at the real-diagram
/// group-velocity peaks, continues each vertically, sweeps across the grid,
/// and returns the curve with minimal Im xi.  Extra seeds on the steep branch
/// segments provide the competing sheets for the identification.
std::vector<ComplexRoot> sheet0prime(std::span<const double> omega_re_grid,
                                     double im_height, const WaveguideConfig& cfg,
                                     const Sheet0Options& opt = {});

/// FAS velocity and decay from a sheet-0' curve at fixed Im omega:
/// v = 1/Re[(xi(w0+d) - xi(w0-d))/(2d)], kappa = Im[xi(w0)] - Im[omega]/v.
/// A zero slope_half_step picks d automatically: about one quasi-crossing
/// period, capped by the distance to the curve ends, which suppresses the
/// residual tangent-term modulation of the local derivative.
FasEstimate estimate_fas_mr(std::span<const ComplexRoot> curve, double omega0,
                            double slope_half_step = 0.0);

}  // namespace faswave
