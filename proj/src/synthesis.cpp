#include "faswave/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace faswave {

Complex pulse_spectrum(const ProbePulse& p, double omega) {
    const double s2 = p.sigma * p.sigma;
    const double g = std::exp(-0.5 * s2 * (omega - p.omega0) * (omega - p.omega0)) +
                     std::exp(-0.5 * s2 * (omega + p.omega0) * (omega + p.omega0));
    const double mag = p.amplitude * p.sigma * std::sqrt(M_PI / 2.0) * g;
    if (p.t0 == 0.0) return Complex(mag, 0.0);
    return mag * std::exp(Complex(0.0, omega * p.t0));
}

namespace {

// Frequency nodes over the band: a uniform base grid plus geometric clusters
// around each cutoff, where modal residues behave like 1/sqrt(omega - omega_c).
std::vector<double> omega_nodes(const ProbePulse& p, const WaveguideConfig& cfg,
                                double base_step) {
    const double lo = p.band[0], hi = p.band[1];
    std::set<double> nodes;
    for (double w = lo; w < hi; w += base_step) nodes.insert(w);
    nodes.insert(hi);
    const auto cuts = find_cutoffs(lo, hi, cfg);
    for (double wc : cuts) {
        double s = 1e-5;
        while (s < 2.0 * base_step) {
            if (wc + s < hi) nodes.insert(wc + s);
            if (wc - s > lo) nodes.insert(wc - s);
            s *= 1.45;
        }
    }
    std::vector<double> out;
    out.reserve(nodes.size());
    for (double w : nodes) {
        bool near_cut = false;
        for (double wc : cuts)
            if (std::fabs(w - wc) < 1e-6) near_cut = true;
        if (!near_cut) out.push_back(w);
    }
    return out;
}

std::vector<double> trapezoid_weights(const std::vector<double>& x) {
    std::vector<double> w(x.size(), 0.0);
    for (size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = 0.5 * (x[i + 1] - x[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    return w;
}

// Maps per-node spectral amplitudes A(omega_j) to the time grid:
// u2'(t) = pref * Sum_j w_j A_j exp(-i omega_j t).
void to_time(const std::vector<double>& ws, const std::vector<Complex>& amp,
             Complex pref, std::span<const double> t, std::vector<Complex>& u2p) {
    const std::vector<double> wts = trapezoid_weights(ws);
    u2p.assign(t.size(), Complex(0.0, 0.0));
    for (size_t j = 0; j < ws.size(); ++j) {
        const Complex a = pref * wts[j] * amp[j];
        if (a == Complex(0.0, 0.0)) continue;
        for (size_t i = 0; i < t.size(); ++i)
            u2p[i] += a * std::exp(Complex(0.0, -ws[j] * t[i]));
    }
}

TimeSeries pack_series(double L, std::span<const double> t, const std::vector<Complex>& u2p) {
    TimeSeries s;
    s.L = L;
    s.t.assign(t.begin(), t.end());
    s.u.resize(t.size());
    s.envelope.resize(t.size());
    for (size_t i = 0; i < t.size(); ++i) {
        s.u[i] = 2.0 * u2p[i].real();
        s.envelope[i] = 2.0 * std::abs(u2p[i]);
    }
    return s;
}

double base_step_for(std::span<const double> t_grid, const SynthesisOptions& opt) {
    if (opt.omega_step > 0.0) return opt.omega_step;
    const double T = t_grid.empty() ? 1.0 : t_grid.back();
    return std::min(2.0 * M_PI / (8.0 * std::max(T, 1e-9)), 4e-3);
}

double rms(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s / static_cast<double>(v.size()));
}

std::vector<Complex> modal_amplitudes(const std::vector<double>& ws, double L,
                                      const ProbePulse& p, const WaveguideConfig& cfg,
                                      const SynthesisOptions& opt) {
    std::vector<Complex> amp(ws.size());
    RootScanOptions ropt;
    ropt.include_evanescent = opt.include_evanescent;
    ropt.evanescent_k_max =
        opt.evanescent_kappa_max > 0.0 ? opt.evanescent_kappa_max : 30.0 / std::max(L, 1.0);
    for (size_t j = 0; j < ws.size(); ++j) {
        const double w = ws[j];
        const auto roots = find_real_roots(w, w / cfg.medium1.sound_speed, cfg, 1e-10, ropt);
        Complex sum(0.0, 0.0);
        for (const DispersionRoot& r : roots) {
            const Complex xi = r.evanescent ? Complex(0.0, r.k) : Complex(r.k, 0.0);
            const KernelValues kv = eval_kernels({xi, Complex(w, 0.0)}, cfg);
            sum += kv.m / kv.dn_dk * std::exp(Complex(0.0, 1.0) * xi * L);
        }
        amp[j] = pulse_spectrum(p, w) * sum;
    }
    return amp;
}

}  // namespace

TimeSeries modal_sum_field(double L, std::span<const double> t_grid, const ProbePulse& p,
                           const WaveguideConfig& cfg, const SynthesisOptions& opt) {
    if (!(L > 0.0)) throw ConfigError("modal_sum_field: L must be positive");
    cfg.validate();
    const double base = base_step_for(t_grid, opt);
    const Complex pref(0.0, 1.0 / (2.0 * M_PI));

    const std::vector<double> ws = omega_nodes(p, cfg, base);
    std::vector<Complex> u2p;
    to_time(ws, modal_amplitudes(ws, L, p, cfg, opt), pref, t_grid, u2p);
    TimeSeries series = pack_series(L, t_grid, u2p);

    if (opt.validate_resolution) {
        const std::vector<double> wfine = omega_nodes(p, cfg, base * 0.5);
        std::vector<Complex> u2f;
        to_time(wfine, modal_amplitudes(wfine, L, p, cfg, opt), pref, t_grid, u2f);
        TimeSeries fine = pack_series(L, t_grid, u2f);
        std::vector<double> diff(series.u.size());
        for (size_t i = 0; i < diff.size(); ++i) diff[i] = series.u[i] - fine.u[i];
        const double denom = rms(fine.u);
        if (denom > 0.0 && rms(diff) / denom > 0.01)
            throw ResolutionError("modal_sum_field: quadrature changed by more than 1% "
                                  "when the omega step was halved");
        return fine;
    }
    return series;
}

namespace {

// In-place k quadrature of M/N cos(kL) for one omega with absorbed speeds:
// a fine zone covering the pole band [0, band_hi/c1 + 2] and a coarse tail.
Complex k_integral(double w, double L, const AbsorbedConfig& acfg, double k_fine_max,
                   double dk_fine, double k_max, const WaveguideConfig& cfg) {
    (void)cfg;
    Complex acc(0.0, 0.0);
    const Complex iw(w, 0.0);
    for (double k = 0.5 * dk_fine; k < k_fine_max; k += dk_fine) {
        const KernelValues kv = eval_kernels({Complex(k, 0.0), iw}, acfg);
        acc += kv.m / kv.n * (std::cos(k * L) * dk_fine);
    }
    const double dk_coarse = 0.01;
    for (double k = k_fine_max + 0.5 * dk_coarse; k < k_max; k += dk_coarse) {
        const KernelValues kv = eval_kernels({Complex(k, 0.0), iw}, acfg);
        acc += kv.m / kv.n * (std::cos(k * L) * dk_coarse);
    }
    return acc;
}

std::vector<Complex> direct_amplitudes(const std::vector<double>& ws, double L, double eps,
                                       const ProbePulse& p, const WaveguideConfig& cfg,
                                       double k_fine_max, double dk_fine, double k_max) {
    std::vector<Complex> amp(ws.size());
    WaveguideConfig c = cfg;
    c.absorption_epsilon = eps;
    for (size_t j = 0; j < ws.size(); ++j) {
        const AbsorbedConfig acfg = apply_limiting_absorption(c, ws[j]);
        amp[j] = pulse_spectrum(p, ws[j]) *
                 k_integral(ws[j], L, acfg, k_fine_max, dk_fine, k_max, cfg);
    }
    return amp;
}

}  // namespace

TimeSeries direct_inversion_field(double L, std::span<const double> t_grid,
                                  const ProbePulse& p, const WaveguideConfig& cfg,
                                  const SynthesisOptions& opt) {
    if (!(L > 0.0)) throw ConfigError("direct_inversion_field: L must be positive");
    cfg.validate();
    const double eps = opt.epsilon > 0.0 ? opt.epsilon : cfg.absorption_epsilon;
    if (!(eps > 0.0))
        throw ConfigError("direct_inversion_field: needs a positive absorption epsilon");

    const double c1 = cfg.medium1.sound_speed, c2 = cfg.medium2.sound_speed;
    const double k_max = opt.k_max > 0.0 ? opt.k_max : 3.0 * p.band[1] / c1;
    const double k_fine_max = std::min(p.band[1] / c1 + 2.0, k_max);
    // Sharpest pole width along the sweep: about eps * omega / v_g with the
    // fastest group velocity bounded by c2.
    const double eps_small = opt.richardson ? 0.5 * eps : eps;
    const double pole_width = eps_small * p.band[0] / c2;
    const double dk = opt.k_step > 0.0 ? opt.k_step : pole_width / 5.0;
    if (dk > pole_width / 4.0)
        throw ResolutionError("direct_inversion_field: epsilon poles are sharper than "
                              "four k-grid points; reduce k_step or raise epsilon");

    const double base = base_step_for(t_grid, opt);
    const std::vector<double> ws = omega_nodes(p, cfg, base);
    // u2 = 2 Re[u2'], u2' = (1/4pi^2) Int_0^inf F(w) [2 P(w)] e^{-iwt} dw
    const Complex pref(1.0 / (2.0 * M_PI * M_PI), 0.0);

    std::vector<Complex> amp =
        direct_amplitudes(ws, L, eps, p, cfg, k_fine_max, dk, k_max);
    if (opt.richardson) {
        const std::vector<Complex> amp_half =
            direct_amplitudes(ws, L, 0.5 * eps, p, cfg, k_fine_max, dk, k_max);
        for (size_t j = 0; j < amp.size(); ++j) amp[j] = 2.0 * amp_half[j] - amp[j];
    }
    std::vector<Complex> u2p;
    to_time(ws, amp, pref, t_grid, u2p);
    return pack_series(L, t_grid, u2p);
}

double max_guided_velocity(const WaveguideConfig& cfg, double band_lo, double band_hi) {
    std::vector<double> grid;
    for (double w = band_lo; w <= band_hi + 1e-9; w += 0.05) grid.push_back(w);
    const auto branches = trace_branches(grid, cfg);
    double vmax = 0.0;
    for (const Branch& b : branches)
        for (const DispersionRoot& r : b.points) {
            try {
                vmax = std::max(vmax, group_velocity(r, cfg));
            } catch (const CutoffError&) {
            }
        }
    if (vmax <= 0.0) throw ConfigError("max_guided_velocity: no propagating modes in band");
    return vmax;
}

FasMeasurement extract_fas(const TimeSeries& series, const WaveguideConfig& cfg,
                           const ProbePulse& p, const FasExtractOptions& opt) {
    if (series.t.size() < 3 || series.envelope.size() != series.t.size())
        throw ConfigError("extract_fas: series lacks an envelope");
    const double c2 = cfg.medium2.sound_speed;
    const double vmax = opt.v_max_guided > 0.0
                            ? opt.v_max_guided
                            : max_guided_velocity(cfg, p.band[0], p.band[1]);
    const double wlo = opt.window_lo_factor * series.L / c2;
    const double whi = opt.window_hi_factor * series.L / vmax;
    if (!(whi > wlo) || series.t.back() < whi)
        throw ConfigError("extract_fas: series does not cover the FAS window");

    double best_t = 0.0, best_a = 0.0;
    const auto& t = series.t;
    const auto& e = series.envelope;
    for (size_t i = 1; i + 1 < t.size(); ++i) {
        if (t[i] < wlo || t[i] > whi) continue;
        if (!(e[i] > e[i - 1] && e[i] > e[i + 1])) continue;
        if (e[i] < opt.noise_floor) continue;
        if (e[i] > best_a) {
            best_t = detail::parabolic_peak(t[i - 1], t[i], t[i + 1], e[i - 1], e[i], e[i + 1]);
            const double d = e[i - 1] - 2.0 * e[i] + e[i + 1];
            best_a = d == 0.0 ? e[i]
                              : e[i] - 0.125 * (e[i + 1] - e[i - 1]) * (e[i + 1] - e[i - 1]) / d;
        }
    }
    if (best_a <= 0.0)
        throw FasNotFoundError("extract_fas: no envelope maximum above the noise floor in "
                               "the FAS window");
    return FasMeasurement{series.L, best_t, best_a};
}

DecayFit fit_decay(std::span<const FasMeasurement> measurements) {
    if (measurements.size() < 2)
        throw ConfigError("fit_decay: need at least two measurements");
    DecayFit out;
    double mL = 0.0, mln = 0.0, mt = 0.0;
    for (const FasMeasurement& m : measurements) {
        mL += m.L;
        mln += std::log(m.amplitude);
        mt += m.tof;
        out.plain_v.push_back(m.L / m.tof);
    }
    const double n = static_cast<double>(measurements.size());
    mL /= n;
    mln /= n;
    mt /= n;
    double cov_lnA = 0.0, var_L = 0.0, cov_Lt = 0.0, var_t = 0.0;
    for (const FasMeasurement& m : measurements) {
        cov_lnA += (m.L - mL) * (std::log(m.amplitude) - mln);
        var_L += (m.L - mL) * (m.L - mL);
        cov_Lt += (m.tof - mt) * (m.L - mL);
        var_t += (m.tof - mt) * (m.tof - mt);
    }
    if (var_L == 0.0 || var_t == 0.0) throw ConfigError("fit_decay: distances must differ");
    out.kappa = -cov_lnA / var_L;
    out.v_fas = cov_Lt / var_t;
    for (size_t i = 0; i + 1 < measurements.size(); ++i)
        if (measurements[i + 1].amplitude >= measurements[i].amplitude) out.monotone = false;
    return out;
}

std::vector<double> make_time_grid(double t_max, double dt) {
    std::vector<double> t;
    for (double x = 0.0; x < t_max; x += dt) t.push_back(x);
    return t;
}

}  // namespace faswave
