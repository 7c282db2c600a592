#pragma once

#include "faswave/types.hpp"

namespace faswave {

/// Waveguide parameters with complex sound speeds (limiting absorption).
struct AbsorbedConfig {
    double h1;
    double h2;
    double rho1;
    double rho2;
    Complex c1;
    Complex c2;

    double rho_ratio() const { return rho1 / rho2; }
};

/// Plain complex view of a real config (no absorption applied).
AbsorbedConfig as_complex(const WaveguideConfig& cfg);

/// Adds the vanishing imaginary parts to the sound speeds:
/// c_j -> c_j - i*eps*c_j*sign(omega).
AbsorbedConfig apply_limiting_absorption(const WaveguideConfig& cfg, double omega);

/// Transverse wavenumber alpha_j = sqrt(omega^2/c_j^2 - k^2) for layer j in
/// {1, 2}.  Principal square root, then the sign is fixed so Im[alpha] >= 0
/// unless alpha lies on the positive real axis.
Complex alpha(int layer, const SpectralPoint& p, const WaveguideConfig& cfg);

/// Kernels M, N and the analytic derivatives of N at a spectral point.
/// Removable singularities (alpha_j = 0) evaluate to their finite limits.
KernelValues eval_kernels(const SpectralPoint& p, const WaveguideConfig& cfg);
KernelValues eval_kernels(const SpectralPoint& p, const AbsorbedConfig& cfg);

/// Naive evaluation of (m, n) straight from given alpha values.  Exists so
/// tests can flip alpha signs independently; the production path works in
/// z = alpha^2 and never takes a square root of the kernels' arguments.
std::pair<Complex, Complex> kernels_from_alphas(Complex alpha1, Complex alpha2,
                                                const WaveguideConfig& cfg);

namespace detail {

/// cos(sqrt(z) H): entire in z.
Complex cos_sqrt(Complex z, double h);
/// sin(sqrt(z) H)/sqrt(z): entire in z, value H at z = 0.
Complex sinc_sqrt(Complex z, double h);

double cos_sqrt(double z, double h);
double sinc_sqrt(double z, double h);

/// N evaluated from real z_j = omega^2/c_j^2 - k^2; real for real (k, omega)
/// and also for purely imaginary k.  Fast path for root scanning.
double n_of_z(double z1, double z2, const WaveguideConfig& cfg);

}  // namespace detail

}  // namespace faswave
