#include "faswave/leaky.hpp"

#include <cmath>

#include "faswave/kernels.hpp"

namespace faswave {

namespace {

// G(xi) = rho1 * alpha2 sin(alpha2 H2) + i rho2 alpha1 cos(alpha2 H2),
// written through z2 = alpha2^2 so the alpha2 branch drops out; alpha1 is the
// principal root (outgoing radiation).  tan poles are multiplied away.
struct GVal {
    Complex g;
    Complex dg;
};

GVal eval_g(Complex xi, Complex omega, const WaveguideConfig& cfg) {
    const double c1 = cfg.medium1.sound_speed, c2 = cfg.medium2.sound_speed;
    const double rho1 = cfg.medium1.density, rho2 = cfg.medium2.density;
    const Complex z1 = (omega / c1) * (omega / c1) - xi * xi;
    const Complex z2 = (omega / c2) * (omega / c2) - xi * xi;
    const Complex a1 = std::sqrt(z1);
    const Complex c2v = detail::cos_sqrt(z2, cfg.h2);
    const Complex s2 = detail::sinc_sqrt(z2, cfg.h2);
    const Complex p2 = z2 * s2;
    GVal out;
    out.g = rho1 * p2 + Complex(0.0, 1.0) * rho2 * a1 * c2v;
    // dz_j/dxi = -2 xi; d(z s)/dz = (s + h cos)/2; d cos/dz = -(h/2) s;
    // d alpha1/dxi = -xi/alpha1
    const Complex dp2 = 0.5 * (s2 + cfg.h2 * c2v) * (-2.0 * xi);
    const Complex dc2 = -0.5 * cfg.h2 * s2 * (-2.0 * xi);
    const Complex da1 = -xi / a1;
    out.dg = rho1 * dp2 + Complex(0.0, 1.0) * rho2 * (da1 * c2v + a1 * dc2);
    return out;
}

bool newton(Complex& xi, Complex omega, const WaveguideConfig& cfg,
            const LeakyOptions& opt, double* residual) {
    for (int i = 0; i < opt.max_iterations; ++i) {
        const GVal gv = eval_g(xi, omega, cfg);
        if (std::abs(gv.dg) < 1e-300) return false;
        const Complex step = gv.g / gv.dg;
        xi -= step;
        if (std::abs(step) < opt.tol * std::max(1.0, std::abs(xi))) {
            *residual = std::abs(eval_g(xi, omega, cfg).g);
            return true;
        }
    }
    return false;
}

}  // namespace

LeakyRoot solve_leaky(Complex omega, const WaveguideConfig& cfg,
                      std::optional<Complex> seed, const LeakyOptions& opt) {
    if (omega == Complex(0.0, 0.0)) throw ConfigError("solve_leaky: omega must be nonzero");
    cfg.validate();
    const Complex base =
        seed.value_or(omega / cfg.medium2.sound_speed * 1.05 + Complex(0.0, 0.1));
    const bool real_omega = omega.imag() == 0.0;
    const Complex offsets[] = {Complex(0.0, 0.0),  Complex(0.3, 0.0),  Complex(-0.3, 0.0),
                               Complex(0.8, 0.1),  Complex(-0.8, 0.1), Complex(0.0, 0.3),
                               Complex(1.6, 0.2),  Complex(-1.6, 0.2), Complex(2.5, 0.3)};
    for (const Complex& off : offsets) {
        Complex xi = base + off;
        double residual = 0.0;
        if (!newton(xi, omega, cfg, opt, &residual)) continue;
        if (real_omega && xi.imag() <= 0.0) continue;  // decay in +x required
        if (xi.real() <= 0.0) continue;
        return LeakyRoot{omega, xi, residual};
    }
    throw ConvergenceError("solve_leaky: no admissible root from any seed", omega);
}

std::vector<LeakyRoot> sweep_leaky(std::span<const double> omega_re, double omega_im,
                                   const WaveguideConfig& cfg, const LeakyOptions& opt) {
    std::vector<LeakyRoot> out;
    out.reserve(omega_re.size());
    std::optional<Complex> seed;
    for (double re : omega_re) {
        const LeakyRoot r = solve_leaky(Complex(re, omega_im), cfg, seed, opt);
        seed = r.xi;  // warm start; Newton basins are narrow near mode pileups
        out.push_back(r);
    }
    return out;
}

FasEstimate estimate_fas_leaky(double omega0, const WaveguideConfig& cfg, double delta) {
    const LeakyRoot mid = solve_leaky(Complex(omega0, 0.0), cfg);
    const LeakyRoot up = solve_leaky(Complex(omega0 + delta, 0.0), cfg, mid.xi);
    const LeakyRoot dn = solve_leaky(Complex(omega0 - delta, 0.0), cfg, mid.xi);
    const Complex dxi = (up.xi - dn.xi) / (2.0 * delta);
    FasEstimate est;
    est.method = FasMethod::leaky;
    est.omega0 = omega0;
    est.v_fas = 1.0 / dxi.real();
    est.kappa = mid.xi.imag();
    return est;
}

}  // namespace faswave
