//==============================================================================
// decay_fit.hpp
// Exponent extraction from norm time series: ordinary least squares of
// log(value) against log(1 + t), matching the (1 + t) envelopes of the decay
// bounds, plus the lower-bound envelope verifier.
//==============================================================================
#pragma once

#include "oldb/linear_oracle.hpp"

namespace oldb {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r_squared = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    int n_samples = 0;
};

using Series = std::vector<std::pair<double, double>>; // (t, value)

inline FitResult fit_exponent(const Series& series, double t_lo, double t_hi) {
    if (!(t_lo < t_hi)) throw std::invalid_argument("fit_exponent: window must have t_lo < t_hi");
    std::vector<double> x, y;
    for (const auto& [t, v] : series) {
        if (t < t_lo || t > t_hi) continue;
        if (!(v > 0.0))
            throw std::invalid_argument("fit_exponent: non-positive value in window at t = " +
                                        std::to_string(t));
        x.push_back(std::log1p(t));
        y.push_back(std::log(v));
    }
    const int n = static_cast<int>(x.size());
    if (n < 8) throw std::invalid_argument("fit_exponent: need at least 8 samples in window, got " +
                                           std::to_string(n));

    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (int i = 0; i < n; ++i) {
        const double res = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += res * res;
    }
    fit.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - ssr / syy) : 1.0;
    fit.stderr_slope = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.n_samples = n;
    return fit;
}

struct EnvelopeReport {
    bool pass = false;
    bool degenerate = false;  // c0 = 0: envelope identically zero, vacuous
    double constant = 0.0;    // C0 (beta = 1) or the inferred C_beta
    double exponent = 0.0;    // envelope decays like (1 + t)^exponent
    double min_margin = 0.0;  // min of value - envelope over the samples
    double min_margin_time = 0.0;
    int n_checked = 0;
};

// Verifies value(t) >= (C/2) (1 + t)^(-(s1+1)/(2 beta)) at every sample.
// For beta = 1 the constant comes from lower_bound_constant(c0, eta, s1).
// For beta < 1 no closed form is available; C_beta is taken as the infimum
// of value * (1 + t)^((s1+1)/(2 beta)) over a reference linear run (or over
// the series itself when no reference is supplied), and the series must stay
// above half that infimum.
inline EnvelopeReport check_lower_envelope(const Series& series, double c0, double eta, double s1,
                                           double beta, const Series& reference = {}) {
    EnvelopeReport rep;
    rep.exponent = -(s1 + 1.0) / (2.0 * beta);
    if (c0 == 0.0) {
        rep.degenerate = true;
        rep.pass = true;
        rep.constant = 0.0;
        rep.n_checked = static_cast<int>(series.size());
        return rep;
    }
    if (beta == 1.0) {
        rep.constant = lower_bound_constant(c0, eta, s1);
    } else {
        const Series& ref = reference.empty() ? series : reference;
        double inf = std::numeric_limits<double>::infinity();
        for (const auto& [t, v] : ref)
            inf = std::min(inf, v * std::pow(1.0 + t, (s1 + 1.0) / (2.0 * beta)));
        rep.constant = inf;
    }
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& [t, v] : series) {
        const double envelope = 0.5 * rep.constant * std::pow(1.0 + t, rep.exponent);
        const double margin = v - envelope;
        if (margin < rep.min_margin) {
            rep.min_margin = margin;
            rep.min_margin_time = t;
        }
        ++rep.n_checked;
    }
    if (rep.n_checked == 0) rep.min_margin = 0.0;
    // Exact-envelope series sit at margin zero; allow roundoff only.
    rep.pass = rep.min_margin >= -1e-12 * std::max(1.0, std::abs(rep.constant));
    return rep;
}

} // namespace oldb
