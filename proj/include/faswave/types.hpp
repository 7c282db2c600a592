#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace faswave {

using Complex = std::complex<double>;

/// One homogeneous acoustic layer.
struct Medium {
    double density = 1.0;      // rho > 0
    double sound_speed = 1.0;  // c > 0
};

/// Two-layer waveguide: medium1 fills -h1 <= y <= 0 (rigid bottom),
/// medium2 fills 0 <= y <= h2 (rigid top carrying the source line).
struct WaveguideConfig {
    double h1 = 1.0;
    double h2 = 0.4;
    Medium medium1{1.0, 1.0};
    Medium medium2{1.0, 5.0};
    double absorption_epsilon = 1e-3;

    /// Throws ConfigError on hard violations (non-positive sizes or media).
    void validate() const;

    /// Soft issues, e.g. medium2 not faster than medium1.
    std::vector<std::string> warnings() const;

    double rho_ratio() const { return medium1.density / medium2.density; }
};

/// A point of the complex spectral plane.
struct SpectralPoint {
    Complex k;
    Complex omega;
};

/// Kernel evaluations at one spectral point.  m and n are even functions of
/// alpha1 and alpha2 separately, so they are single-valued in (k, omega).
struct KernelValues {
    Complex alpha1;
    Complex alpha2;
    Complex m;
    Complex n;
    Complex dn_dk;
    Complex dn_domega;
};

enum class FasMethod { miklowitz_randles, leaky, pseudo_branch, measured };

const char* to_string(FasMethod m);

/// A (velocity, decay) estimate of the first arriving signal.
struct FasEstimate {
    FasMethod method;
    double v_fas = 0.0;
    double kappa = 0.0;
    double omega0 = 0.0;
};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration input.
struct ConfigError : Error {
    using Error::Error;
};

/// A grid or quadrature was too coarse for a reliable answer.
struct ResolutionError : Error {
    using Error::Error;
};

/// An iterative solver failed to converge.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, Complex last_good)
        : Error(what), last_good_omega(last_good) {}
    Complex last_good_omega;
};

/// Group velocity requested at (or too near) a cutoff where dN/dk -> 0.
struct CutoffError : Error {
    using Error::Error;
};

/// A continuation path ran into a branch point.
struct BranchPointCollisionError : Error {
    BranchPointCollisionError(const std::string& what, Complex omega, Complex k)
        : Error(what), omega_bp(omega), k_bp(k) {}
    Complex omega_bp;
    Complex k_bp;
};

/// Sheet identification could not separate two candidate branches.
struct AmbiguousSheetError : Error {
    using Error::Error;
};

/// No first-arriving-signal pulse above the noise floor.
struct FasNotFoundError : Error {
    using Error::Error;
};

}  // namespace faswave
