//==============================================================================
// diagnostics.hpp
// Norms and functionals tracked by the decay analysis:
//   * Sobolev norms, spectral weights evaluated exactly per mode.
//   * The cross pairing <tau, -grad u> in inhomogeneous and homogeneous
//     weighted forms (the dissipation-producing sign).
//   * Energy/dissipation functionals:
//       E_theta = ||L^th (u,tau)||^2_{H^(s-th)} + 2 k <tau, -grad u>_{H^(s-b-th)}
//       D_theta = (k/2) ||grad L^th u||^2_{H^(s-b-th)} + ||L^b L^th tau||^2_{H^(s-th)}
//       Et_s    = k (1+t) ||L^s (u,tau)||^2 + <L^(s-1) tau, -grad L^(s-1) u>
//       Dt_s    = k (1+t) ||grad L^s tau||^2 + (1/4) ||grad L^(s-1) u||^2
//       Eb_b    = (1+t)^a ||L^s (u,tau)||^2 + k <L^(s-b) tau, -grad L^(s-b) u>
//       Db_b    = (1+t)^a ||L^(s+b) tau||^2 + (k/4) ||grad L^(s-b) u||^2,
//     with a = 2 - 1/b. For b = 1 the E/D pair is the theta-indexed family;
//     for b < 1 the cross pairing sits at H^(s-b-th) as in the global energy
//     estimate.
//   * Homogeneous Besov B^(-1)_(2,inf) via the Littlewood-Paley shells.
//   * Low-frequency splitting masses over S(t), S0(t), S^beta(t).
//   * A finite-difference monitor for d/dt E + D <= 0.
//==============================================================================
#pragma once

#include "oldb/linear_oracle.hpp"
#include "oldb/state.hpp"

namespace oldb {

enum class FunctionalKind {
    E0,
    D0,
    E1,
    D1,
    E_tilde_s,
    D_tilde_s,
    E_bar_beta,
    D_bar_beta,
    sobolev,
    besov_neg1,
    low_freq_mass,
    cross_term
};

enum class SplitSet { S, S0, Sbeta };

struct FunctionalSpec {
    FunctionalKind kind = FunctionalKind::E0;
    double s = 2.5;       // Sobolev index of the energy framework
    double s1 = 0.0;      // order for sobolev / cross_term kinds
    double beta = 1.0;
    double k_c = 0.125;   // the small cross coefficient
    double c2 = 4.0;      // C2 of the splitting sets
    SplitSet set = SplitSet::S;
    bool homogeneous = false;
};

namespace detail {

// Frobenius mode intensity |uhat|^2 + |tauhat|^2 (tau12 counted twice).
inline double state_intensity(const SpectralState& st, int idx) {
    return std::norm(st.u_hat.x[idx]) + std::norm(st.u_hat.y[idx]) + std::norm(st.tau_hat.xx[idx]) +
           2.0 * std::norm(st.tau_hat.xy[idx]) + std::norm(st.tau_hat.yy[idx]);
}

inline void guard_mean_free(const std::vector<const SpectralScalar*>& comps, const Grid& grid,
                            const char* who) {
    const int origin = grid.index(0, 0);
    double mean2 = 0.0, total2 = 0.0;
    for (const SpectralScalar* f : comps) {
        mean2 += std::norm((*f)[origin]);
        for (const Complex& z : *f) total2 += std::norm(z);
    }
    if (std::sqrt(mean2) > 1e-14 * std::sqrt(total2))
        throw std::invalid_argument(std::string(who) +
                                    ": negative homogeneous order requires a mean-free field");
}

} // namespace detail

// ||f||: homogeneous (box^2 sum |xi|^(2 sigma) |fhat|^2)^(1/2) with xi = 0
// excluded, or inhomogeneous with weight (1 + |xi|^2)^sigma including xi = 0.
// Component weights allow the Frobenius count of symmetric tensors.
inline double sobolev_norm(const std::vector<const SpectralScalar*>& comps,
                           const std::vector<double>& comp_weights, double sigma, bool homogeneous,
                           const Grid& grid) {
    if (homogeneous && sigma < 0.0) detail::guard_mean_free(comps, grid, "sobolev_norm");
    std::vector<double> acc;
    acc.reserve(static_cast<std::size_t>(grid.size()));
    for (int idx = 0; idx < grid.size(); ++idx) {
        const double k2 = grid.k2_at(idx);
        double w;
        if (homogeneous) {
            if (k2 == 0.0) continue;
            w = std::pow(k2, sigma);
        } else {
            w = std::pow(1.0 + k2, sigma);
        }
        double q = 0.0;
        for (std::size_t c = 0; c < comps.size(); ++c)
            q += comp_weights[c] * std::norm((*comps[c])[idx]);
        acc.push_back(w * q);
    }
    const double l2 = grid.box_length * grid.box_length;
    return std::sqrt(l2 * pairwise_sum(acc));
}

inline double sobolev_norm(const SpectralScalar& f, double sigma, bool homogeneous,
                           const Grid& grid) {
    return sobolev_norm({&f}, {1.0}, sigma, homogeneous, grid);
}

inline double sobolev_norm(const SpectralVector& v, double sigma, bool homogeneous,
                           const Grid& grid) {
    return sobolev_norm({&v.x, &v.y}, {1.0, 1.0}, sigma, homogeneous, grid);
}

inline double sobolev_norm(const SpectralTensor& t, double sigma, bool homogeneous,
                           const Grid& grid) {
    return sobolev_norm({&t.xx, &t.xy, &t.yy}, {1.0, 2.0, 1.0}, sigma, homogeneous, grid);
}

inline double sobolev_norm(const SpectralState& st, double sigma, bool homogeneous,
                           const Grid& grid) {
    return sobolev_norm({&st.u_hat.x, &st.u_hat.y, &st.tau_hat.xx, &st.tau_hat.xy, &st.tau_hat.yy},
                        {1.0, 1.0, 1.0, 2.0, 1.0}, sigma, homogeneous, grid);
}

// Weighted Parseval pairing <tau, -grad u> = box^2 sum w(xi) P(xi) with
// P(xi) = Re[tauhat : conj(-i xi (x) uhat)] (Frobenius contraction). The
// gradient factor makes the xi = 0 term vanish identically, so homogeneous
// negative orders only ever weight mean-free content.
inline double cross_term(const SpectralState& st, double sigma, bool homogeneous,
                         const Grid& grid) {
    std::vector<double> acc;
    acc.reserve(static_cast<std::size_t>(grid.size()));
    for (int idx = 0; idx < grid.size(); ++idx) {
        const double k2 = grid.k2_at(idx);
        if (k2 == 0.0) continue;
        const double w = homogeneous ? std::pow(k2, sigma) : std::pow(1.0 + k2, sigma);
        const double k1v = grid.kx_at(idx), k2v = grid.ky_at(idx);
        const Complex z = k1v * st.tau_hat.xx[idx] * std::conj(st.u_hat.x[idx]) +
                          k2v * st.tau_hat.xy[idx] * std::conj(st.u_hat.x[idx]) +
                          k1v * st.tau_hat.xy[idx] * std::conj(st.u_hat.y[idx]) +
                          k2v * st.tau_hat.yy[idx] * std::conj(st.u_hat.y[idx]);
        acc.push_back(-w * z.imag()); // Re[i z] with the -grad sign
    }
    const double l2 = grid.box_length * grid.box_length;
    return l2 * pairwise_sum(acc);
}

//------------------------------------------------------------------------------
// Besov and splitting masses
//------------------------------------------------------------------------------

struct BesovResult {
    double value = 0.0;       // sup_j 2^(-j) ||Ddot_j f||_L2 over covered shells
    int argmax_shell = 0;
    double uncovered_mass = 0.0; // L2 mass at nonzero modes below shell coverage
};

inline BesovResult besov_neg1_detail(const std::vector<const SpectralScalar*>& comps,
                                     const std::vector<double>& comp_weights, const Grid& grid,
                                     const ShellWeights& shells) {
    BesovResult out;
    const double l2 = grid.box_length * grid.box_length;
    for (const auto& [j, mult] : shells.shells) {
        std::vector<double> acc;
        for (int idx = 0; idx < grid.size(); ++idx) {
            const double w = mult.values[idx];
            if (w == 0.0) continue;
            double q = 0.0;
            for (std::size_t c = 0; c < comps.size(); ++c)
                q += comp_weights[c] * std::norm((*comps[c])[idx]);
            acc.push_back(w * w * q);
        }
        const double shell_norm = std::sqrt(l2 * pairwise_sum(acc));
        const double v = std::ldexp(shell_norm, -j); // 2^(-j) * shell_norm
        if (v > out.value) {
            out.value = v;
            out.argmax_shell = j;
        }
    }
    std::vector<double> unc;
    for (int idx = 0; idx < grid.size(); ++idx) {
        if (grid.k2_at(idx) == 0.0 || shells.covered[idx]) continue;
        double q = 0.0;
        for (std::size_t c = 0; c < comps.size(); ++c)
            q += comp_weights[c] * std::norm((*comps[c])[idx]);
        unc.push_back(q);
    }
    out.uncovered_mass = l2 * pairwise_sum(unc);
    return out;
}

inline double besov_neg1(const SpectralState& st, const Grid& grid, const ShellWeights& shells) {
    return besov_neg1_detail(
               {&st.u_hat.x, &st.u_hat.y, &st.tau_hat.xx, &st.tau_hat.xy, &st.tau_hat.yy},
               {1.0, 1.0, 1.0, 2.0, 1.0}, grid, shells)
        .value;
}

inline double besov_neg1(const SpectralScalar& f, const Grid& grid, const ShellWeights& shells) {
    return besov_neg1_detail({&f}, {1.0}, grid, shells).value;
}

// Squared-radius threshold of the splitting set at time t.
inline double split_radius2(SplitSet set, double t, double c2, double beta) {
    switch (set) {
        case SplitSet::S:
            return c2 / (1.0 + t);
        case SplitSet::S0: {
            // f(t) = ln^3(e + t): f'/f = 3 / ((e + t) ln(e + t)); the cubic
            // exponent is part of the construction, not a knob.
            const double fp_over_f = 3.0 / ((std::exp(1.0) + t) * std::log(std::exp(1.0) + t));
            return 2.0 * c2 * fp_over_f;
        }
        case SplitSet::Sbeta:
            return std::pow(4.0 * c2 / (1.0 + t), 1.0 / beta);
    }
    return 0.0;
}

// mode_measure-weighted spectral mass over the splitting set.
inline double low_freq_mass(const SpectralState& st, double t, const Params& params, SplitSet set,
                            const Grid& grid) {
    const double r2 = split_radius2(set, t, params.c2_split, params.beta);
    std::vector<double> acc;
    for (int idx = 0; idx < grid.size(); ++idx) {
        if (grid.k2_at(idx) > r2) continue;
        acc.push_back(detail::state_intensity(st, idx));
    }
    return grid.mode_measure * pairwise_sum(acc);
}

//------------------------------------------------------------------------------
// Functional evaluation
//------------------------------------------------------------------------------

struct DiagnosticsContext {
    const Grid& grid;
    ShellWeights shells;

    explicit DiagnosticsContext(const Grid& g) : grid(g), shells(lp_shell_weights(g)) {}
};

inline double functional(const SpectralState& st, const FunctionalSpec& spec,
                         const DiagnosticsContext& ctx) {
    const Grid& grid = ctx.grid;
    const double s = spec.s, beta = spec.beta, kc = spec.k_c;
    const double t = st.time;
    const double boxsq = grid.box_length * grid.box_length;

    // One fused pass computing (weight_u * |uhat|^2, weight_tau * |tauhat|^2,
    // weight_x * P) sums keeps every functional a single reduction.
    auto fused = [&](auto&& weight_u, auto&& weight_tau, auto&& weight_cross) {
        std::vector<double> au, at, ax;
        au.reserve(static_cast<std::size_t>(grid.size()));
        at.reserve(static_cast<std::size_t>(grid.size()));
        ax.reserve(static_cast<std::size_t>(grid.size()));
        for (int idx = 0; idx < grid.size(); ++idx) {
            const double k2 = grid.k2_at(idx);
            const double uu = std::norm(st.u_hat.x[idx]) + std::norm(st.u_hat.y[idx]);
            const double tt = std::norm(st.tau_hat.xx[idx]) + 2.0 * std::norm(st.tau_hat.xy[idx]) +
                              std::norm(st.tau_hat.yy[idx]);
            au.push_back(weight_u(k2) * uu);
            at.push_back(weight_tau(k2) * tt);
            if (k2 > 0.0) {
                const double k1v = grid.kx_at(idx), k2v = grid.ky_at(idx);
                const Complex z = k1v * st.tau_hat.xx[idx] * std::conj(st.u_hat.x[idx]) +
                                  k2v * st.tau_hat.xy[idx] * std::conj(st.u_hat.x[idx]) +
                                  k1v * st.tau_hat.xy[idx] * std::conj(st.u_hat.y[idx]) +
                                  k2v * st.tau_hat.yy[idx] * std::conj(st.u_hat.y[idx]);
                ax.push_back(-weight_cross(k2) * z.imag());
            }
        }
        struct Sums {
            double u, tau, cross;
        };
        return Sums{boxsq * pairwise_sum(au), boxsq * pairwise_sum(at), boxsq * pairwise_sum(ax)};
    };

    const auto hom = [](double k2, double sigma) { return k2 == 0.0 ? 0.0 : std::pow(k2, sigma); };

    switch (spec.kind) {
        case FunctionalKind::E0: {
            auto r = fused([&](double k2) { return std::pow(1.0 + k2, s); },
                           [&](double k2) { return std::pow(1.0 + k2, s); },
                           [&](double k2) { return std::pow(1.0 + k2, s - beta); });
            return r.u + r.tau + 2.0 * kc * r.cross;
        }
        case FunctionalKind::D0: {
            auto r = fused([&](double k2) { return std::pow(1.0 + k2, s - beta) * k2; },
                           [&](double k2) { return std::pow(1.0 + k2, s) * hom(k2, beta); },
                           [](double) { return 0.0; });
            return 0.5 * kc * r.u + r.tau;
        }
        case FunctionalKind::E1: {
            auto r = fused([&](double k2) { return std::pow(1.0 + k2, s - 1.0) * k2; },
                           [&](double k2) { return std::pow(1.0 + k2, s - 1.0) * k2; },
                           [&](double k2) { return std::pow(1.0 + k2, s - beta - 1.0) * k2; });
            return r.u + r.tau + 2.0 * kc * r.cross;
        }
        case FunctionalKind::D1: {
            auto r = fused([&](double k2) { return std::pow(1.0 + k2, s - beta - 1.0) * k2 * k2; },
                           [&](double k2) { return std::pow(1.0 + k2, s - 1.0) * k2 * hom(k2, beta); },
                           [](double) { return 0.0; });
            return 0.5 * kc * r.u + r.tau;
        }
        case FunctionalKind::E_tilde_s: {
            auto r = fused([&](double k2) { return hom(k2, s); },
                           [&](double k2) { return hom(k2, s); },
                           [&](double k2) { return hom(k2, s - 1.0); });
            return kc * (1.0 + t) * (r.u + r.tau) + r.cross;
        }
        case FunctionalKind::D_tilde_s: {
            auto r = fused([&](double k2) { return hom(k2, s - 1.0) * k2; },
                           [&](double k2) { return hom(k2, s) * k2; },
                           [](double) { return 0.0; });
            return kc * (1.0 + t) * r.tau + 0.25 * r.u;
        }
        case FunctionalKind::E_bar_beta: {
            const double a = 2.0 - 1.0 / beta;
            auto r = fused([&](double k2) { return hom(k2, s); },
                           [&](double k2) { return hom(k2, s); },
                           [&](double k2) { return hom(k2, s - beta); });
            return std::pow(1.0 + t, a) * (r.u + r.tau) + kc * r.cross;
        }
        case FunctionalKind::D_bar_beta: {
            const double a = 2.0 - 1.0 / beta;
            auto r = fused([&](double k2) { return hom(k2, s - beta) * k2; },
                           [&](double k2) { return hom(k2, s + beta); },
                           [](double) { return 0.0; });
            return std::pow(1.0 + t, a) * r.tau + 0.25 * kc * r.u;
        }
        case FunctionalKind::sobolev:
            return sobolev_norm(st, spec.s1, spec.homogeneous, grid);
        case FunctionalKind::besov_neg1:
            return besov_neg1(st, grid, ctx.shells);
        case FunctionalKind::low_freq_mass: {
            Params p;
            p.c2_split = spec.c2;
            p.beta = spec.beta;
            return low_freq_mass(st, t, p, spec.set, grid);
        }
        case FunctionalKind::cross_term:
            return cross_term(st, spec.s1, spec.homogeneous, grid);
    }
    throw std::logic_error("functional: unknown kind");
}

//------------------------------------------------------------------------------
// Sampled records and the inequality monitor
//------------------------------------------------------------------------------

struct DiagnosticsRecord {
    double t = 0.0;
    double l2 = 0.0;
    double hs = 0.0;
    std::vector<std::pair<double, double>> lambda_s1; // (order, value)
    double e0 = 0.0, d0 = 0.0, e1 = 0.0, d1 = 0.0;
    double e_tilde = 0.0, d_tilde = 0.0, e_bar = 0.0, d_bar = 0.0;
    double besov_neg1 = 0.0;
    double lowfreq_S = 0.0, lowfreq_S0 = 0.0, lowfreq_Sbeta = 0.0;
    double cross_hs = 0.0;  // <tau, -grad u>_{H^(s-beta)}
    double cross_low = 0.0; // homogeneous pairing at order beta - 1
    double mean_u = 0.0, mean_tau = 0.0;
};

inline DiagnosticsRecord compute_record(const SpectralState& st, const Params& params,
                                        const DiagnosticsContext& ctx,
                                        const std::vector<double>& s1_list) {
    DiagnosticsRecord r;
    r.t = st.time;
    const Grid& grid = ctx.grid;
    r.l2 = sobolev_norm(st, 0.0, false, grid);
    r.hs = sobolev_norm(st, params.sobolev_s, false, grid);
    for (double s1 : s1_list)
        r.lambda_s1.emplace_back(s1, sobolev_norm(st, s1, true, grid));

    FunctionalSpec spec;
    spec.s = params.sobolev_s;
    spec.beta = params.beta;
    spec.k_c = params.cross_k;
    spec.c2 = params.c2_split;

    auto eval = [&](FunctionalKind kind) {
        spec.kind = kind;
        return functional(st, spec, ctx);
    };
    r.e0 = eval(FunctionalKind::E0);
    r.d0 = eval(FunctionalKind::D0);
    r.e1 = eval(FunctionalKind::E1);
    r.d1 = eval(FunctionalKind::D1);
    r.e_tilde = eval(FunctionalKind::E_tilde_s);
    r.d_tilde = eval(FunctionalKind::D_tilde_s);
    r.e_bar = eval(FunctionalKind::E_bar_beta);
    r.d_bar = eval(FunctionalKind::D_bar_beta);
    r.besov_neg1 = besov_neg1(st, grid, ctx.shells);
    r.lowfreq_S = low_freq_mass(st, st.time, params, SplitSet::S, grid);
    r.lowfreq_S0 = low_freq_mass(st, st.time, params, SplitSet::S0, grid);
    r.lowfreq_Sbeta = low_freq_mass(st, st.time, params, SplitSet::Sbeta, grid);
    r.cross_hs = cross_term(st, params.sobolev_s - params.beta, false, grid);
    r.cross_low = cross_term(st, params.beta - 1.0, true, grid);

    const int origin = grid.index(0, 0);
    r.mean_u = std::sqrt(std::norm(st.u_hat.x[origin]) + std::norm(st.u_hat.y[origin]));
    r.mean_tau = std::sqrt(std::norm(st.tau_hat.xx[origin]) + 2.0 * std::norm(st.tau_hat.xy[origin]) +
                           std::norm(st.tau_hat.yy[origin]));
    return r;
}

inline double record_field(const DiagnosticsRecord& r, FunctionalKind kind) {
    switch (kind) {
        case FunctionalKind::E0: return r.e0;
        case FunctionalKind::D0: return r.d0;
        case FunctionalKind::E1: return r.e1;
        case FunctionalKind::D1: return r.d1;
        case FunctionalKind::E_tilde_s: return r.e_tilde;
        case FunctionalKind::D_tilde_s: return r.d_tilde;
        case FunctionalKind::E_bar_beta: return r.e_bar;
        case FunctionalKind::D_bar_beta: return r.d_bar;
        default: throw std::invalid_argument("record_field: not a stored functional kind");
    }
}

struct MonitorReport {
    int n_interior = 0;
    int n_violations = 0;
    double fraction_violating = 0.0;
    double worst_violation = 0.0; // most positive d/dt(lhs) + rhs - tol * (|lhs| + |rhs|)
    double worst_time = 0.0;
    bool pass = true;
};

// Checks d/dt(lhs) + rhs <= tol * (|lhs| + |rhs|) at interior samples with a
// centered finite difference; endpoints are excluded (O(dt^2) truncation, no
// phantom boundary violations).
inline MonitorReport inequality_monitor(const std::vector<DiagnosticsRecord>& series,
                                        FunctionalKind lhs_kind, FunctionalKind rhs_kind,
                                        double tolerance) {
    MonitorReport rep;
    rep.worst_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        const double dt = series[i + 1].t - series[i - 1].t;
        if (!(dt > 0.0)) throw std::invalid_argument("inequality_monitor: times must increase");
        const double lhs_dot =
            (record_field(series[i + 1], lhs_kind) - record_field(series[i - 1], lhs_kind)) / dt;
        const double lhs = record_field(series[i], lhs_kind);
        const double rhs = record_field(series[i], rhs_kind);
        const double slack = tolerance * (std::abs(lhs) + std::abs(rhs));
        const double excess = lhs_dot + rhs - slack;
        ++rep.n_interior;
        if (excess > 0.0) ++rep.n_violations;
        if (excess > rep.worst_violation) {
            rep.worst_violation = excess;
            rep.worst_time = series[i].t;
        }
    }
    if (rep.n_interior > 0)
        rep.fraction_violating = static_cast<double>(rep.n_violations) / rep.n_interior;
    else
        rep.worst_violation = 0.0;
    rep.pass = rep.n_violations == 0;
    return rep;
}

} // namespace oldb
