#pragma once

#include <array>
#include <span>
#include <vector>

#include "faswave/dispersion.hpp"
#include "faswave/types.hpp"

namespace faswave {

/// Gaussian-windowed cosine probe: f(t) = A exp(-(t-t0)^2/(2 sigma^2)) cos(omega0 (t-t0)).
/// The band limits the synthesis quadrature; the spectrum must be negligible
/// outside it.
struct ProbePulse {
    double omega0 = 28.0;
    double sigma = 0.5;
    std::array<double, 2> band{20.0, 40.0};
    double amplitude = 1.0;
    double t0 = 0.0;
};

/// F(omega) = A sigma sqrt(pi/2) [exp(-sigma^2 (w-w0)^2/2) + exp(-sigma^2 (w+w0)^2/2)]
/// times exp(i omega t0).  Real and even for t0 = 0.
Complex pulse_spectrum(const ProbePulse& p, double omega);

/// Receiver record u2(L, H2, t) with its one-sided-band envelope.
struct TimeSeries {
    std::vector<double> t;
    std::vector<double> u;
    std::vector<double> envelope;  // |2 u2'|, filled by the synthesizers
    double L = 0.0;
};

struct SynthesisOptions {
    double omega_step = 0.0;        // 0: min(2pi/(8 T_window), 4e-3)
    bool validate_resolution = true;
    bool include_evanescent = false;
    double evanescent_kappa_max = 0.0;  // 0: 30/L
    // direct inversion only:
    double epsilon = 0.0;  // 0: cfg.absorption_epsilon
    double k_max = 0.0;    // 0: 3 * band_hi / c1
    double k_step = 0.0;   // 0: from the pole-width rule eps*band_lo/c2 / 5
    bool richardson = true;  // extrapolate the (eps, eps/2) pair to eps -> 0
};

/// Modal residue expansion: u2' = (i/2pi) Int F(w) Sum_n M/N' exp(i xi_n L - i w t) dw,
/// u2 = 2 Re[u2'].  The omega grid is refined geometrically around every
/// cutoff in the band, where the residue weights have integrable 1/sqrt
/// singularities.  With validate_resolution the synthesis is repeated at half
/// the base step; >1% RMS change raises ResolutionError.
TimeSeries modal_sum_field(double L, std::span<const double> t_grid, const ProbePulse& p,
                           const WaveguideConfig& cfg, const SynthesisOptions& opt = {});

/// Direct inversion of the (omega, k) double integral with the limiting-
/// absorption poles displaced off the real k axis.  Serves as the independent
/// oracle for the modal expansion.  A pole narrower than four k-grid points
/// raises ResolutionError.
TimeSeries direct_inversion_field(double L, std::span<const double> t_grid,
                                  const ProbePulse& p, const WaveguideConfig& cfg,
                                  const SynthesisOptions& opt = {});

/// Envelope-peak time and value of the first arriving signal.
struct FasMeasurement {
    double L = 0.0;
    double tof = 0.0;
    double amplitude = 0.0;
};

struct FasExtractOptions {
    double noise_floor = 1e-4;    // absolute envelope floor
    double v_max_guided = 0.0;    // 0: computed from the dispersion diagram
    double window_lo_factor = 0.8;
    double window_hi_factor = 0.98;
};

/// Largest strict local maximum of the envelope inside
/// [0.8 L/c2, 0.98 L/v_g,max]; FasNotFoundError when nothing clears the floor.
FasMeasurement extract_fas(const TimeSeries& series, const WaveguideConfig& cfg,
                           const ProbePulse& p, const FasExtractOptions& opt = {});

/// kappa from ln(amplitude) vs L, incremental v from L vs ToF; plain L/ToF
/// velocities reported alongside.
struct DecayFit {
    double kappa = 0.0;
    double v_fas = 0.0;
    std::vector<double> plain_v;
    bool monotone = true;
};

DecayFit fit_decay(std::span<const FasMeasurement> measurements);

/// Uniform time grid [0, t_max) with step dt.
std::vector<double> make_time_grid(double t_max, double dt);

/// Fastest guided group velocity over the band (used for the FAS window).
double max_guided_velocity(const WaveguideConfig& cfg, double band_lo, double band_hi);

}  // namespace faswave
