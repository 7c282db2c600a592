#include "faswave/continuation.hpp"

#include <algorithm>
#include <cmath>

namespace faswave {

namespace {

struct NewtonResult {
    Complex k;
    double residual;
    int iterations;
    bool converged;
    bool bp_collision;
};

double kernel_scale(const KernelValues& kv, Complex k, Complex omega) {
    return std::abs(k) * std::abs(kv.dn_dk) + std::abs(omega) * std::abs(kv.dn_domega) + 1e-300;
}

NewtonResult newton_k(Complex k, Complex omega, const WaveguideConfig& cfg,
                      double tol, int itmax, double bp_guard) {
    NewtonResult res{k, 0.0, 0, false, false};
    for (res.iterations = 0; res.iterations < itmax; ++res.iterations) {
        const KernelValues kv = eval_kernels({res.k, omega}, cfg);
        res.residual = std::abs(kv.n);
        if (std::abs(kv.dn_dk) < bp_guard * std::abs(kv.dn_domega)) {
            res.bp_collision = true;
            return res;
        }
        const Complex step = kv.n / kv.dn_dk;
        res.k -= step;
        if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(res.k)) ||
            res.residual < tol * kernel_scale(kv, res.k, omega)) {
            const KernelValues kf = eval_kernels({res.k, omega}, cfg);
            res.residual = std::abs(kf.n);
            res.converged = res.residual < 1e3 * tol * kernel_scale(kf, res.k, omega);
            return res;
        }
    }
    return res;
}

Complex implicit_slope(Complex k, Complex omega, const WaveguideConfig& cfg) {
    const KernelValues kv = eval_kernels({k, omega}, cfg);
    return -kv.dn_domega / kv.dn_dk;
}

// One adaptive continuation leg from (omega_a, k) to omega_b.
Complex continue_segment(Complex k, Complex omega_a, Complex omega_b,
                         const WaveguideConfig& cfg, const ContinuationOptions& opt) {
    struct Frame {
        Complex a, b;
        int depth;
    };
    std::vector<Frame> stack{{omega_a, omega_b, 0}};
    Complex cur_omega = omega_a;
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        const Complex step = f.b - f.a;
        const Complex pred = k + implicit_slope(k, f.a, cfg) * step;
        NewtonResult nr = newton_k(pred, f.b, cfg, opt.tol, opt.newton_limit, opt.bp_guard);
        const bool correction_ok =
            std::abs(nr.k - pred) <= 0.5 * std::max(std::abs(pred - k), 1e-12);
        if (nr.bp_collision) {
            throw BranchPointCollisionError(
                "continuation hit a vanishing dN/dk near omega = (" +
                    std::to_string(f.b.real()) + ", " + std::to_string(f.b.imag()) + "i)",
                f.b, nr.k);
        }
        if (!nr.converged || !correction_ok) {
            if (f.depth >= opt.max_halvings)
                throw ConvergenceError("continuation stalled", cur_omega);
            const Complex mid = 0.5 * (f.a + f.b);
            stack.push_back({mid, f.b, f.depth + 1});
            stack.push_back({f.a, mid, f.depth + 1});
            continue;
        }
        k = nr.k;
        cur_omega = f.b;
    }
    return k;
}

}  // namespace

std::vector<ComplexRoot> continue_root(const ComplexRoot& start,
                                       std::span<const Complex> path,
                                       const WaveguideConfig& cfg,
                                       const ContinuationOptions& opt) {
    NewtonResult chk = newton_k(start.k, start.omega, cfg, opt.tol, 30, opt.bp_guard);
    if (!chk.converged)
        throw ConvergenceError("continue_root: start is not a root", start.omega);
    std::vector<ComplexRoot> out;
    Complex k = chk.k;
    Complex omega = start.omega;
    for (const Complex& target : path) {
        if (std::abs(target - omega) > 0.0)
            k = continue_segment(k, omega, target, cfg, opt);
        omega = target;
        const KernelValues kv = eval_kernels({k, omega}, cfg);
        out.push_back(ComplexRoot{omega, k, std::abs(kv.n), start.sheet_tag});
    }
    return out;
}

namespace {

// Off-axis branch points satisfy N = 0 and D = 0, where dN/dk = -2k D.
// Using D avoids the spurious dN/dk zero at k = 0.
Complex d_reduced(Complex k, Complex omega, const WaveguideConfig& cfg) {
    const KernelValues kv = eval_kernels({k, omega}, cfg);
    return kv.dn_dk / (-2.0 * k);
}

bool bp_newton(Complex& k, Complex& omega, const WaveguideConfig& cfg) {
    const double h = 1e-6;
    for (int it = 0; it < 80; ++it) {
        if (std::abs(k) < 1e-8) return false;
        const KernelValues kv = eval_kernels({k, omega}, cfg);
        const Complex f1 = kv.n;
        const Complex f2 = d_reduced(k, omega, cfg);
        const Complex a11 = kv.dn_dk, a12 = kv.dn_domega;
        const Complex a21 = (d_reduced(k + h, omega, cfg) - d_reduced(k - h, omega, cfg)) / (2.0 * h);
        const Complex a22 = (d_reduced(k, omega + h, cfg) - d_reduced(k, omega - h, cfg)) / (2.0 * h);
        const Complex det = a11 * a22 - a12 * a21;
        if (std::abs(det) < 1e-300) return false;
        const Complex dk = (f1 * a22 - f2 * a12) / det;
        const Complex dw = (a11 * f2 - a21 * f1) / det;
        k -= dk;
        omega -= dw;
        if (std::abs(dk) + std::abs(dw) < 1e-13 * std::max({1.0, std::abs(k), std::abs(omega)}))
            return true;
    }
    return false;
}

}  // namespace

std::vector<BranchPoint> find_branch_points(double re_lo, double re_hi, double im_lo,
                                            double im_hi, const WaveguideConfig& cfg,
                                            const BranchPointSearchOptions& opt) {
    std::vector<BranchPoint> found;
    auto accept = [&](Complex k, Complex omega) {
        if (omega.real() < re_lo - 1e-9 || omega.real() > re_hi + 1e-9) return;
        if (omega.imag() < im_lo - 1e-9 || omega.imag() > im_hi + 1e-9) return;
        for (const BranchPoint& b : found)
            if (std::abs(b.omega_bp - omega) < opt.dedup_tol) return;
        const KernelValues kv = eval_kernels({k, omega}, cfg);
        const double scale = kernel_scale(kv, k, omega);
        if (std::abs(kv.n) > 1e-8 * scale || std::abs(kv.dn_dk) > 1e-8 * scale) return;
        BranchPoint bp;
        bp.omega_bp = omega;
        bp.k_bp = k;
        bp.group = std::fabs(omega.imag()) < 1e-6 ? 0 : (omega.imag() > 0.0 ? 1 : -1);
        found.push_back(bp);
    };

    // Cutoffs: every (k = 0, omega_c) pair is an order-2 point connecting a
    // propagating branch with an evanescent one.
    if (im_lo <= 0.0 && im_hi >= 0.0) {
        for (double wc : find_cutoffs(re_lo, re_hi, cfg)) {
            BranchPoint bp;
            bp.omega_bp = Complex(wc, 0.0);
            bp.k_bp = Complex(0.0, 0.0);
            bp.group = 0;
            bool dup = false;
            for (const BranchPoint& b : found)
                if (std::abs(b.omega_bp - bp.omega_bp) < opt.dedup_tol) dup = true;
            if (!dup) found.push_back(bp);
        }
    }

    // Seeds at quasi-crossings: local minima of the gap between adjacent
    // roots along the real diagram.
    std::vector<double> grid;
    for (double w = re_lo; w <= re_hi; w += 0.05) grid.push_back(w);
    struct Gap {
        double omega, kmid, gap;
    };
    std::vector<Gap> gaps;
    for (double w : grid) {
        auto roots = find_real_roots(w, w / cfg.medium1.sound_speed, cfg);
        for (size_t j = 0; j + 1 < roots.size(); ++j)
            gaps.push_back({w, 0.5 * (roots[j].k + roots[j + 1].k),
                            roots[j + 1].k - roots[j].k});
    }
    std::vector<std::pair<Complex, Complex>> seeds;  // (k, omega)
    // pick gap records that are locally minimal among records with similar kmid
    for (size_t i = 0; i < gaps.size(); ++i) {
        bool minimal = true;
        for (size_t j = 0; j < gaps.size(); ++j) {
            if (i == j) continue;
            if (std::fabs(gaps[j].kmid - gaps[i].kmid) < 0.4 &&
                std::fabs(gaps[j].omega - gaps[i].omega) < 1.0 && gaps[j].gap < gaps[i].gap)
                minimal = false;
        }
        if (minimal && gaps[i].gap < 1.5)
            for (double im : {0.3, -0.3, 0.7, -0.7})
                seeds.push_back({Complex(gaps[i].kmid, 0.0), Complex(gaps[i].omega, im)});
    }
    // coarse grid seeds
    for (double re = re_lo; re <= re_hi; re += opt.coarse_step_re)
        for (double im = im_lo; im <= im_hi; im += opt.coarse_step_im) {
            if (std::fabs(im) < 1e-9) continue;
            seeds.push_back({Complex(re / 4.0 + 1.0, 0.2), Complex(re, im)});
        }

    for (auto [k, w] : seeds) {
        Complex kk = k, ww = w;
        if (bp_newton(kk, ww, cfg)) accept(kk, ww);
    }
    std::sort(found.begin(), found.end(), [](const BranchPoint& a, const BranchPoint& b) {
        if (a.omega_bp.real() != b.omega_bp.real())
            return a.omega_bp.real() < b.omega_bp.real();
        return a.omega_bp.imag() < b.omega_bp.imag();
    });
    return found;
}

namespace {

struct Candidate {
    std::vector<Complex> xi;  // aligned with the grid
    std::string tag;
    double mean_im = 0.0;
};

bool same_curve(const Candidate& a, const Candidate& b) {
    double scale = 0.0, diff = 0.0;
    for (size_t i = 0; i < a.xi.size(); i += std::max<size_t>(1, a.xi.size() / 8)) {
        scale = std::max({scale, std::abs(a.xi[i]), 1.0});
        diff = std::max(diff, std::abs(a.xi[i] - b.xi[i]));
    }
    return diff < 1e-6 * scale;
}

}  // namespace

std::vector<ComplexRoot> sheet0prime(std::span<const double> omega_re_grid,
                                     double im_height, const WaveguideConfig& cfg,
                                     const Sheet0Options& opt) {
    if (omega_re_grid.size() < 3)
        throw ConfigError("sheet0prime: need at least three grid points");
    const double lo = omega_re_grid.front(), hi = omega_re_grid.back();

    if (opt.validate_height) {
        auto bps = find_branch_points(lo, hi, 0.0, im_height + 0.5, cfg);
        for (const BranchPoint& b : bps)
            if (b.group > 0 && b.omega_bp.imag() >= im_height)
                throw ConfigError("sheet0prime: im_height " + std::to_string(im_height) +
                                  " does not clear the branch point at Im omega = " +
                                  std::to_string(b.omega_bp.imag()));
    }

    // Real-diagram context: traced branches and their gv peaks.
    std::vector<double> tgrid;
    for (double w = lo - 0.5; w <= hi + 0.5; w += opt.trace_step) tgrid.push_back(w);
    const auto branches = trace_branches(tgrid, cfg);
    const auto peaks = find_gv_peaks(branches, {lo - 0.4, hi + 0.4}, cfg);
    if (peaks.empty())
        throw ConfigError("sheet0prime: no group-velocity peaks to seed from");

    // Seed set: the peaks themselves plus all roots at the midpoints between
    // adjacent peaks (those sit on the steep segments and continue onto the
    // competing sheets).
    struct Seed {
        double omega, k;
        std::string tag;
    };
    std::vector<Seed> seeds;
    for (size_t i = 0; i < peaks.size(); ++i)
        seeds.push_back({peaks[i].omega_star, peaks[i].k_star, "peak" + std::to_string(i)});
    for (size_t i = 0; i + 1 < peaks.size(); ++i) {
        const double wm = 0.5 * (peaks[i].omega_star + peaks[i + 1].omega_star);
        auto roots = find_real_roots(wm, wm / cfg.medium1.sound_speed, cfg);
        for (const auto& r : roots) {
            if (r.k < peaks.front().k_star - 1.0 || r.k > peaks.back().k_star + 1.0) continue;
            seeds.push_back({wm, r.k, "mid" + std::to_string(i)});
        }
    }

    ContinuationOptions copt;
    std::vector<Candidate> cands;
    for (const Seed& s : seeds) {
        try {
            // vertical leg
            std::vector<Complex> up;
            const int n_up = std::max(4, static_cast<int>(im_height / 0.1));
            for (int i = 1; i <= n_up; ++i)
                up.push_back(Complex(s.omega, im_height * i / n_up));
            ComplexRoot start{Complex(s.omega, 0.0), Complex(s.k, 0.0), 0.0, s.tag};
            auto lifted = continue_root(start, up, cfg, copt);
            Complex k_top = lifted.back().k;

            // sweep across the grid
            Candidate cand;
            cand.xi.assign(omega_re_grid.size(), Complex(0, 0));
            cand.tag = s.tag;
            size_t i0 = 0;
            double best = 1e300;
            for (size_t i = 0; i < omega_re_grid.size(); ++i)
                if (std::fabs(omega_re_grid[i] - s.omega) < best) {
                    best = std::fabs(omega_re_grid[i] - s.omega);
                    i0 = i;
                }
            Complex k0 = continue_segment(k_top, Complex(s.omega, im_height),
                                          Complex(omega_re_grid[i0], im_height), cfg, copt);
            cand.xi[i0] = k0;
            Complex k = k0;
            for (size_t i = i0 + 1; i < omega_re_grid.size(); ++i) {
                k = continue_segment(k, Complex(omega_re_grid[i - 1], im_height),
                                     Complex(omega_re_grid[i], im_height), cfg, copt);
                cand.xi[i] = k;
            }
            k = k0;
            for (size_t i = i0; i-- > 0;) {
                k = continue_segment(k, Complex(omega_re_grid[i + 1], im_height),
                                     Complex(omega_re_grid[i], im_height), cfg, copt);
                cand.xi[i] = k;
            }
            for (const Complex& x : cand.xi) cand.mean_im += x.imag();
            cand.mean_im /= static_cast<double>(cand.xi.size());
            bool dup = false;
            for (const Candidate& c : cands)
                if (same_curve(c, cand)) dup = true;
            if (!dup) cands.push_back(std::move(cand));
        } catch (const BranchPointCollisionError&) {
            // a competing-sheet seed may run into a branch point; skip it
        } catch (const ConvergenceError&) {
        }
    }
    if (cands.empty())
        throw ConvergenceError("sheet0prime: no candidate sheet was traced", Complex(lo, im_height));

    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) { return a.mean_im < b.mean_im; });
    if (cands.size() > 1) {
        const double b0 = cands[0].mean_im, b1 = cands[1].mean_im;
        if (b1 - b0 < opt.ambiguity_ratio * std::fabs(b0))
            throw AmbiguousSheetError(
                "sheet0prime: two sheets have comparable attenuation (mean Im xi " +
                std::to_string(b0) + " vs " + std::to_string(b1) + ")");
    }

    std::vector<ComplexRoot> out;
    out.reserve(omega_re_grid.size());
    for (size_t i = 0; i < omega_re_grid.size(); ++i) {
        const Complex omega(omega_re_grid[i], im_height);
        const KernelValues kv = eval_kernels({cands[0].xi[i], omega}, cfg);
        out.push_back(ComplexRoot{omega, cands[0].xi[i], std::abs(kv.n), cands[0].tag});
    }
    return out;
}

namespace {

Complex interp_xi(std::span<const ComplexRoot> curve, double x) {
    if (x < curve.front().omega.real() || x > curve.back().omega.real())
        throw ConfigError("estimate_fas_mr: omega0 outside the curve span");
    size_t i = 1;
    while (i < curve.size() && curve[i].omega.real() < x) ++i;
    if (i == curve.size()) return curve.back().k;
    const double x0 = curve[i - 1].omega.real(), x1 = curve[i].omega.real();
    const double t = x1 == x0 ? 0.0 : (x - x0) / (x1 - x0);
    return curve[i - 1].k * (1.0 - t) + curve[i].k * t;
}

}  // namespace

FasEstimate estimate_fas_mr(std::span<const ComplexRoot> curve, double omega0,
                            double slope_half_step) {
    if (curve.size() < 3) throw ConfigError("estimate_fas_mr: curve too short");
    const double lo = curve.front().omega.real(), hi = curve.back().omega.real();
    if (omega0 < lo || omega0 > hi)
        throw ConfigError("estimate_fas_mr: omega0 outside the curve span");
    double d = slope_half_step;
    if (d <= 0.0)
        d = std::min({3.0, omega0 - lo, hi - omega0});
    const double grid = (hi - lo) / static_cast<double>(curve.size() - 1);
    d = std::max(d, grid);
    const Complex dxi = (interp_xi(curve, omega0 + d) - interp_xi(curve, omega0 - d)) / (2.0 * d);
    FasEstimate est;
    est.method = FasMethod::miklowitz_randles;
    est.omega0 = omega0;
    est.v_fas = 1.0 / dxi.real();
    est.kappa = interp_xi(curve, omega0).imag() - curve.front().omega.imag() / est.v_fas;
    return est;
}

}  // namespace faswave
