#include "faswave/kernels.hpp"

#include <cmath>

namespace faswave {

void WaveguideConfig::validate() const {
    if (!(h1 > 0.0) || !(h2 > 0.0))
        throw ConfigError("layer thicknesses must be positive");
    if (!(medium1.density > 0.0) || !(medium2.density > 0.0))
        throw ConfigError("densities must be positive");
    if (!(medium1.sound_speed > 0.0) || !(medium2.sound_speed > 0.0))
        throw ConfigError("sound speeds must be positive");
    if (absorption_epsilon < 0.0)
        throw ConfigError("absorption epsilon must be non-negative");
}

std::vector<std::string> WaveguideConfig::warnings() const {
    std::vector<std::string> w;
    if (medium2.sound_speed <= medium1.sound_speed)
        w.push_back("medium2 is not faster than medium1; the first-arriving-signal "
                    "analysis assumes the upper layer carries the fast wave");
    return w;
}

const char* to_string(FasMethod m) {
    switch (m) {
        case FasMethod::miklowitz_randles: return "miklowitz_randles";
        case FasMethod::leaky: return "leaky";
        case FasMethod::pseudo_branch: return "pseudo_branch";
        case FasMethod::measured: return "measured";
    }
    return "?";
}

AbsorbedConfig as_complex(const WaveguideConfig& cfg) {
    return {cfg.h1, cfg.h2, cfg.medium1.density, cfg.medium2.density,
            Complex(cfg.medium1.sound_speed, 0.0), Complex(cfg.medium2.sound_speed, 0.0)};
}

AbsorbedConfig apply_limiting_absorption(const WaveguideConfig& cfg, double omega) {
    AbsorbedConfig out = as_complex(cfg);
    const double s = omega >= 0.0 ? 1.0 : -1.0;
    out.c1 -= Complex(0.0, cfg.absorption_epsilon * cfg.medium1.sound_speed * s);
    out.c2 -= Complex(0.0, cfg.absorption_epsilon * cfg.medium2.sound_speed * s);
    return out;
}

Complex alpha(int layer, const SpectralPoint& p, const WaveguideConfig& cfg) {
    const double c = layer == 1 ? cfg.medium1.sound_speed : cfg.medium2.sound_speed;
    const Complex z = (p.omega / c) * (p.omega / c) - p.k * p.k;
    Complex a = std::sqrt(z);
    if (a.imag() < 0.0) a = -a;
    return a;
}

namespace detail {

Complex cos_sqrt(Complex z, double h) {
    const Complex w = z * (h * h);
    if (std::abs(w) < 1e-6)
        return 1.0 - w / 2.0 + w * w / 24.0 - w * w * w / 720.0;
    const Complex a = std::sqrt(z);
    return std::cos(a * h);
}

Complex sinc_sqrt(Complex z, double h) {
    const Complex w = z * (h * h);
    if (std::abs(w) < 1e-6)
        return h * (1.0 - w / 6.0 + w * w / 120.0 - w * w * w / 5040.0);
    const Complex a = std::sqrt(z);
    return std::sin(a * h) / a;
}

double cos_sqrt(double z, double h) {
    const double w = z * (h * h);
    if (std::fabs(w) < 1e-6)
        return 1.0 - w / 2.0 + w * w / 24.0 - w * w * w / 720.0;
    if (z > 0.0) return std::cos(std::sqrt(z) * h);
    return std::cosh(std::sqrt(-z) * h);
}

double sinc_sqrt(double z, double h) {
    const double w = z * (h * h);
    if (std::fabs(w) < 1e-6)
        return h * (1.0 - w / 6.0 + w * w / 120.0 - w * w * w / 5040.0);
    if (z > 0.0) {
        const double a = std::sqrt(z);
        return std::sin(a * h) / a;
    }
    const double b = std::sqrt(-z);
    return std::sinh(b * h) / b;
}

double n_of_z(double z1, double z2, const WaveguideConfig& cfg) {
    const double r = cfg.rho_ratio();
    const double c1v = cos_sqrt(z1, cfg.h1);
    const double s1 = sinc_sqrt(z1, cfg.h1);
    const double c2v = cos_sqrt(z2, cfg.h2);
    const double s2 = sinc_sqrt(z2, cfg.h2);
    return r * c1v * (z2 * s2) + (z1 * s1) * c2v;
}

// Shared complex kernel core.  N and M only depend on z_j = alpha_j^2, which
// makes their evenness in each alpha automatic and keeps the removable
// alpha_j = 0 points finite.
struct Core {
    Complex c1, s1, c2, s2;  // cos(a_j h_j), sin(a_j h_j)/a_j
    Complex p1, p2;          // a_j sin(a_j h_j) = z_j s_j
    Complex n, m;
    Complex dn_dz1, dn_dz2;
};

static Core core(Complex z1, Complex z2, double h1, double h2, double r) {
    Core k;
    k.c1 = cos_sqrt(z1, h1);
    k.s1 = sinc_sqrt(z1, h1);
    k.c2 = cos_sqrt(z2, h2);
    k.s2 = sinc_sqrt(z2, h2);
    k.p1 = z1 * k.s1;
    k.p2 = z2 * k.s2;
    k.n = r * k.c1 * k.p2 + k.p1 * k.c2;
    k.m = k.p1 * k.s2 - r * k.c1 * k.c2;
    // d cos(a h)/dz = -(h/2) s;  d(a sin(a h))/dz = (s + h cos(a h))/2
    k.dn_dz1 = r * (-0.5 * h1 * k.s1) * k.p2 + 0.5 * (k.s1 + h1 * k.c1) * k.c2;
    k.dn_dz2 = r * k.c1 * 0.5 * (k.s2 + h2 * k.c2) + k.p1 * (-0.5 * h2 * k.s2);
    return k;
}

static KernelValues assemble(const SpectralPoint& p, Complex c1, Complex c2,
                             double h1, double h2, double r) {
    const Complex z1 = (p.omega / c1) * (p.omega / c1) - p.k * p.k;
    const Complex z2 = (p.omega / c2) * (p.omega / c2) - p.k * p.k;
    const Core k = core(z1, z2, h1, h2, r);
    KernelValues out;
    out.alpha1 = std::sqrt(z1);
    if (out.alpha1.imag() < 0.0) out.alpha1 = -out.alpha1;
    out.alpha2 = std::sqrt(z2);
    if (out.alpha2.imag() < 0.0) out.alpha2 = -out.alpha2;
    out.m = k.m;
    out.n = k.n;
    const Complex dsum = k.dn_dz1 + k.dn_dz2;
    out.dn_dk = -2.0 * p.k * dsum;
    out.dn_domega = 2.0 * p.omega * (k.dn_dz1 / (c1 * c1) + k.dn_dz2 / (c2 * c2));
    return out;
}

}  // namespace detail

KernelValues eval_kernels(const SpectralPoint& p, const WaveguideConfig& cfg) {
    return detail::assemble(p, Complex(cfg.medium1.sound_speed, 0.0),
                            Complex(cfg.medium2.sound_speed, 0.0), cfg.h1, cfg.h2,
                            cfg.rho_ratio());
}

KernelValues eval_kernels(const SpectralPoint& p, const AbsorbedConfig& cfg) {
    return detail::assemble(p, cfg.c1, cfg.c2, cfg.h1, cfg.h2, cfg.rho_ratio());
}

std::pair<Complex, Complex> kernels_from_alphas(Complex a1, Complex a2,
                                                const WaveguideConfig& cfg) {
    const double r = cfg.rho_ratio();
    const Complex s1 = std::sin(a1 * cfg.h1), c1 = std::cos(a1 * cfg.h1);
    const Complex s2 = std::sin(a2 * cfg.h2), c2 = std::cos(a2 * cfg.h2);
    const Complex m = (a1 / a2) * s1 * s2 - r * c1 * c2;
    const Complex n = a2 * r * c1 * s2 + a1 * s1 * c2;
    return {m, n};
}

}  // namespace faswave
