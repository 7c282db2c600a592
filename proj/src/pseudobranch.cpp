#include "faswave/pseudobranch.hpp"

#include <cmath>

namespace faswave {

LinearFit fit_linear(std::span<const GvPeak> peaks) {
    if (peaks.size() < 2) throw ConfigError("fit_linear: need at least two peaks");
    LinearFit out;
    double sw = 0.0, sk = 0.0;
    for (const GvPeak& p : peaks) {
        sw += p.omega_star;
        sk += p.k_star;
    }
    const double n = static_cast<double>(peaks.size());
    const double mw = sw / n, mk = sk / n;
    double cov = 0.0, var = 0.0;
    for (const GvPeak& p : peaks) {
        cov += (p.omega_star - mw) * (p.k_star - mk);
        var += (p.omega_star - mw) * (p.omega_star - mw);
    }
    const double slope = cov / var;
    out.v = 1.0 / slope;
    out.c = mk - slope * mw;
    for (size_t i = 0; i + 1 < peaks.size(); ++i)
        out.pair_v.push_back((peaks[i + 1].omega_star - peaks[i].omega_star) /
                             (peaks[i + 1].k_star - peaks[i].k_star));
    return out;
}

BetaEstimate estimate_beta(std::span<const GvPeak> peaks) {
    if (peaks.size() < 2) throw ConfigError("estimate_beta: need at least two peaks");
    BetaEstimate out;
    for (size_t i = 0; i + 1 < peaks.size(); ++i)
        out.per_gap.push_back(M_PI / (peaks[i + 1].omega_star - peaks[i].omega_star));
    for (double b : out.per_gap) out.mean += b;
    out.mean /= static_cast<double>(out.per_gap.size());
    return out;
}

std::vector<AnchorDecay> estimate_a(std::span<const GvPeak> peaks, double v) {
    const BetaEstimate beta = estimate_beta(peaks);
    std::vector<AnchorDecay> out;
    for (size_t i = 0; i < peaks.size(); ++i) {
        double b;
        if (i == 0)
            b = beta.per_gap.front();
        else if (i + 1 == peaks.size())
            b = beta.per_gap.back();
        else
            b = 0.5 * (beta.per_gap[i - 1] + beta.per_gap[i]);
        AnchorDecay d;
        d.omega_star = peaks[i].omega_star;
        d.a = (peaks[i].slope - 1.0 / v) / b;
        d.negative = d.a < 0.0;
        out.push_back(d);
    }
    return out;
}

double TangentModel::a_at(double omega) const {
    if (anchors.empty()) return 0.0;
    if (omega <= anchors.front().omega_star) return anchors.front().a;
    if (omega >= anchors.back().omega_star) return anchors.back().a;
    for (size_t i = 1; i < anchors.size(); ++i) {
        if (omega <= anchors[i].omega_star) {
            const double t = (omega - anchors[i - 1].omega_star) /
                             (anchors[i].omega_star - anchors[i - 1].omega_star);
            return anchors[i - 1].a * (1.0 - t) + anchors[i].a * t;
        }
    }
    return anchors.back().a;
}

double TangentModel::eval(double omega) const {
    return a_at(omega) * std::tan(beta * omega + gamma) + omega / v + c;
}

double TangentModel::slope(double omega) const {
    const double s = 1.0 / std::cos(beta * omega + gamma);
    return a_at(omega) * beta * s * s + 1.0 / v;
}

TangentModel build_model(std::span<const GvPeak> peaks) {
    if (peaks.size() < 2) throw ConfigError("build_model: need at least two peaks");
    const LinearFit lin = fit_linear(peaks);
    const BetaEstimate beta = estimate_beta(peaks);
    TangentModel model;
    model.beta = beta.mean;
    model.v = lin.v;
    model.c = lin.c;
    model.pair_v = lin.pair_v;
    // Anchor the tangent zeros at the (weighted-central) peak: there the
    // tangent term vanishes and the slope is at its minimum a*beta + 1/v,
    // which is exactly what the per-peak a formula inverts.
    const GvPeak& mid = peaks[peaks.size() / 2];
    double gamma = -model.beta * mid.omega_star;
    gamma = std::remainder(gamma, M_PI);
    model.gamma = gamma;
    for (const AnchorDecay& d : estimate_a(peaks, lin.v)) {
        size_t i = model.anchors.size();
        model.anchors.push_back({d.omega_star, peaks[i].k_star, d.a});
    }
    return model;
}

FasEstimate estimate_fas_pseudo(std::span<const GvPeak> peaks, double omega0) {
    const TangentModel model = build_model(peaks);
    FasEstimate est;
    est.method = FasMethod::pseudo_branch;
    est.omega0 = omega0;
    est.v_fas = model.v;
    est.kappa = model.a_at(omega0);
    return est;
}

}  // namespace faswave
