#include "faswave/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace faswave {

namespace {

// Union scan grid in k: a uniform grid plus grids uniform in alpha1 and in
// alpha2 (where real).  The alpha-parameterized points resolve the root
// accumulation towards k = omega/c_j that a uniform k grid undersamples.
std::vector<double> scan_grid(double omega, double k_max, const WaveguideConfig& cfg,
                              double refine = 1.0) {
    const double c1 = cfg.medium1.sound_speed;
    const double c2 = cfg.medium2.sound_speed;
    std::set<double> pts;
    const double base = M_PI / (4.0 * (cfg.h1 / c1 + cfg.h2 / c2)) * refine;
    for (double k = 0.0; k < k_max; k += base) pts.insert(k);
    pts.insert(k_max);
    const double da1 = M_PI / (8.0 * cfg.h1) * refine;
    for (double a1 = 0.0; a1 < omega / c1; a1 += da1) {
        const double kk = (omega / c1) * (omega / c1) - a1 * a1;
        if (kk > 0.0 && kk <= k_max * k_max) pts.insert(std::sqrt(kk));
    }
    const double da2 = M_PI / (8.0 * cfg.h2) * refine;
    for (double a2 = 0.0; a2 < omega / c2; a2 += da2) {
        const double kk = (omega / c2) * (omega / c2) - a2 * a2;
        if (kk > 0.0 && kk <= k_max * k_max) pts.insert(std::sqrt(kk));
    }
    return {pts.begin(), pts.end()};
}

double n_at(double k, double omega, const WaveguideConfig& cfg) {
    const double z1 = (omega / cfg.medium1.sound_speed) * (omega / cfg.medium1.sound_speed) - k * k;
    const double z2 = (omega / cfg.medium2.sound_speed) * (omega / cfg.medium2.sound_speed) - k * k;
    return detail::n_of_z(z1, z2, cfg);
}

// N along the imaginary k axis (k = i*kappa); real-valued since N depends on k^2.
double n_at_imag(double kappa, double omega, const WaveguideConfig& cfg) {
    const double z1 = (omega / cfg.medium1.sound_speed) * (omega / cfg.medium1.sound_speed) + kappa * kappa;
    const double z2 = (omega / cfg.medium2.sound_speed) * (omega / cfg.medium2.sound_speed) + kappa * kappa;
    return detail::n_of_z(z1, z2, cfg);
}

template <class F>
double bisect(F&& f, double a, double b, double fa) {
    for (int i = 0; i < 80 && b - a > 1e-15 * std::max(1.0, std::fabs(b)); ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fa * fm <= 0.0) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> roots_on_grid(const std::vector<double>& grid, double omega,
                                  const WaveguideConfig& cfg, bool imag_axis) {
    auto f = [&](double x) {
        return imag_axis ? n_at_imag(x, omega, cfg) : n_at(x, omega, cfg);
    };
    std::vector<double> out;
    double prev = f(grid.front());
    for (size_t i = 1; i < grid.size(); ++i) {
        const double cur = f(grid[i]);
        if (prev == 0.0) out.push_back(grid[i - 1]);
        else if (prev * cur < 0.0) out.push_back(bisect(f, grid[i - 1], grid[i], prev));
        prev = cur;
    }
    return out;
}

}  // namespace

namespace detail {

double parabolic_peak(double x0, double x1, double x2, double y0, double y1, double y2) {
    const double a = x1 - x0, b = x1 - x2;
    const double num = a * a * (y1 - y2) - b * b * (y1 - y0);
    const double den = a * (y1 - y2) - b * (y1 - y0);
    if (den == 0.0) return x1;
    return std::clamp(x1 - 0.5 * num / den, x0, x2);
}

double polish_root(double k0, double omega, const WaveguideConfig& cfg) {
    double k = k0;
    for (int i = 0; i < 50; ++i) {
        const KernelValues kv = eval_kernels({Complex(k, 0.0), Complex(omega, 0.0)}, cfg);
        const double dn = kv.dn_dk.real();
        if (dn == 0.0) break;
        const double step = kv.n.real() / dn;
        k -= step;
        if (std::fabs(step) < 1e-14 * std::max(1.0, std::fabs(k))) break;
    }
    return k;
}

}  // namespace detail

std::vector<DispersionRoot> find_real_roots(double omega, double k_max,
                                            const WaveguideConfig& cfg, double tol,
                                            const RootScanOptions& opt) {
    if (!(omega > 0.0) || !(k_max > 0.0))
        throw ConfigError("find_real_roots: omega and k_max must be positive");
    cfg.validate();
    const double edge = omega / cfg.medium1.sound_speed;
    const double kmax_eff = std::min(k_max, edge * (1.0 - 1e-12));

    auto run = [&](double refine) {
        return roots_on_grid(scan_grid(omega, kmax_eff, cfg, refine), omega, cfg, false);
    };
    std::vector<double> ks = run(1.0);
    if (opt.validate_resolution) {
        const std::vector<double> fine = run(0.5);
        bool ok = fine.size() == ks.size();
        for (size_t i = 0; ok && i < ks.size(); ++i)
            ok = std::fabs(fine[i] - ks[i]) < 1e-6 * std::max(1.0, ks[i]);
        if (!ok)
            throw ResolutionError("find_real_roots: root set changed when the scan "
                                  "grid was halved (omega = " + std::to_string(omega) + ")");
        ks = fine;
    }

    std::vector<DispersionRoot> out;
    double last = -1.0;
    for (double k : ks) {
        if (!out.empty() && k - last < opt.min_separation) continue;
        DispersionRoot r;
        r.omega = omega;
        r.k = k;
        r.residual = std::fabs(n_at(k, omega, cfg));
        if (r.residual > tol * std::max(1.0, std::fabs(omega)))
            r.k = detail::polish_root(k, omega, cfg);
        r.residual = std::fabs(n_at(r.k, omega, cfg));
        out.push_back(r);
        last = r.k;
    }

    if (opt.include_evanescent) {
        const double km = opt.evanescent_k_max > 0.0 ? opt.evanescent_k_max : k_max;
        std::vector<double> grid;
        const double step = M_PI / (8.0 * std::max(cfg.h1, cfg.h2));
        for (double x = 1e-9; x < km; x += step) grid.push_back(x);
        grid.push_back(km);
        for (double kap : roots_on_grid(grid, omega, cfg, true)) {
            DispersionRoot r;
            r.omega = omega;
            r.k = kap;
            r.evanescent = true;
            r.residual = std::fabs(n_at_imag(kap, omega, cfg));
            out.push_back(r);
        }
    }
    return out;
}

std::vector<Branch> trace_branches(std::span<const double> omega_grid,
                                   const WaveguideConfig& cfg, const TraceOptions& opt) {
    std::vector<Branch> branches;
    if (omega_grid.empty()) return branches;

    struct Tip {
        int branch;
        double k;
        double slope;  // dk/domega
    };
    std::vector<Tip> tips;
    double prev_omega = 0.0;

    auto slope_at = [&](double k, double omega) {
        const KernelValues kv = eval_kernels({Complex(k, 0.0), Complex(omega, 0.0)}, cfg);
        const double dk = kv.dn_dk.real(), dw = kv.dn_domega.real();
        return dk == 0.0 ? 0.0 : -dw / dk;
    };

    for (double omega : omega_grid) {
        const double kmax = opt.k_max > 0.0 ? opt.k_max : omega / cfg.medium1.sound_speed;
        std::vector<DispersionRoot> roots = find_real_roots(omega, kmax, cfg, opt.tol);
        const double dw = tips.empty() ? 0.0 : omega - prev_omega;

        // Greedy match: each tip predicts its next k; nearest unclaimed root wins.
        std::vector<int> owner(roots.size(), -1);
        std::vector<double> dist(roots.size(), std::numeric_limits<double>::max());
        for (const Tip& t : tips) {
            const double pred = t.k + t.slope * dw;
            int best = -1;
            double bd = std::numeric_limits<double>::max();
            for (size_t j = 0; j < roots.size(); ++j) {
                const double d = std::fabs(roots[j].k - pred);
                if (d < bd) {
                    bd = d;
                    best = static_cast<int>(j);
                }
            }
            if (best >= 0 && bd < dist[best]) {
                owner[best] = t.branch;
                dist[best] = bd;
            }
        }

        std::vector<Tip> next;
        for (size_t j = 0; j < roots.size(); ++j) {
            int b = owner[j];
            const double match_tol = std::max(0.05, 4.0 * dw);
            if (b < 0 || dist[j] > match_tol) {
                b = static_cast<int>(branches.size());
                branches.push_back(Branch{b, {}, tips.empty() ? std::nullopt
                                                              : std::optional<double>(omega)});
            }
            branches[b].points.push_back(roots[j]);
            next.push_back(Tip{b, roots[j].k, slope_at(roots[j].k, omega)});
        }
        tips = std::move(next);
        prev_omega = omega;
    }
    return branches;
}

double group_velocity(const DispersionRoot& root, const WaveguideConfig& cfg) {
    if (root.evanescent)
        throw CutoffError("group_velocity: root is evanescent");
    const KernelValues kv =
        eval_kernels({Complex(root.k, 0.0), Complex(root.omega, 0.0)}, cfg);
    const double dk = kv.dn_dk.real(), dw = kv.dn_domega.real();
    if (std::fabs(dk) < 1e-10 * std::max(1.0, std::fabs(dw)))
        throw CutoffError("group_velocity: dN/dk vanishes (cutoff) at omega = " +
                          std::to_string(root.omega));
    return -dk / dw;
}

std::vector<GvPeak> find_gv_peaks(std::span<const Branch> branches,
                                  std::pair<double, double> omega_window,
                                  const WaveguideConfig& cfg,
                                  std::vector<GvPeak>* excluded) {
    std::vector<GvPeak> peaks;
    const auto [wlo, whi] = omega_window;
    for (const Branch& br : branches) {
        const auto& pts = br.points;
        if (pts.size() < 3) continue;
        std::vector<double> vg(pts.size());
        for (size_t i = 0; i < pts.size(); ++i) {
            try {
                vg[i] = group_velocity(pts[i], cfg);
            } catch (const CutoffError&) {
                vg[i] = 0.0;
            }
        }
        for (size_t i = 1; i + 1 < pts.size(); ++i) {
            if (!(vg[i] > vg[i - 1] && vg[i] > vg[i + 1])) continue;
            const double w = detail::parabolic_peak(pts[i - 1].omega, pts[i].omega,
                                                    pts[i + 1].omega, vg[i - 1], vg[i],
                                                    vg[i + 1]);
            GvPeak p;
            p.omega_star = w;
            p.k_star = detail::polish_root(pts[i].k, w, cfg);
            DispersionRoot r;
            r.omega = w;
            r.k = p.k_star;
            p.v_gr = group_velocity(r, cfg);
            p.slope = 1.0 / p.v_gr;
            p.branch_index = br.index;
            const bool interior = p.omega_star > wlo && p.omega_star < whi &&
                                  pts[i - 1].omega >= wlo - 1e-12 &&
                                  pts[i + 1].omega <= whi + 1e-12;
            if (interior) {
                peaks.push_back(p);
            } else if (excluded && p.omega_star >= wlo - 1.0 && p.omega_star <= whi + 1.0) {
                excluded->push_back(p);
            }
        }
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const GvPeak& a, const GvPeak& b) { return a.omega_star < b.omega_star; });
    return peaks;
}

std::vector<double> find_cutoffs(double omega_lo, double omega_hi,
                                 const WaveguideConfig& cfg) {
    auto f = [&](double w) { return n_at(0.0, w, cfg); };
    std::vector<double> out;
    const double c1 = cfg.medium1.sound_speed, c2 = cfg.medium2.sound_speed;
    // N(0, omega) oscillates with rates h_j/c_j in omega.
    const double step = M_PI / (8.0 * (cfg.h1 / c1 + cfg.h2 / c2));
    double prev = f(omega_lo);
    for (double w = omega_lo + step; w <= omega_hi + step * 0.5; w += step) {
        const double ww = std::min(w, omega_hi);
        const double cur = f(ww);
        if (prev * cur < 0.0)
            out.push_back(bisect(f, ww - step, ww, prev));
        prev = cur;
        if (ww == omega_hi) break;
    }
    return out;
}

}  // namespace faswave
