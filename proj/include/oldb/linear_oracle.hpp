//==============================================================================
// linear_oracle.hpp
// Closed-form solution of the linearized system per Fourier mode, plus the
// continuum (whole-plane) decay-norm evaluator used as the ground truth for
// the decay tests.
//
// In the reduced per-mode coordinates (uhat = u_perp * perp(khat), tau in the
// {khat (x) khat, perp (x) perp, sym khat (x) perp} basis) the linearization
// reads
//   tau_a' = -k^(2b) tau_a,   tau_c' = -k^(2b) tau_c,
//   u_perp' = i k tau_s,      tau_s'  = (i k / 2) u_perp - k^(2b) tau_s.
// The coupled pair has characteristic roots
//   lambda_pm = (-k^(2b) +- sqrt(k^(4b) - 2 k^2)) / 2,
// i.e. the exact wave-type reduction carries the factor 1/2 from
// div D(u) = (1/2) Laplacian u. Double roots switch to the confluent
// formula t e^(lambda t) inside a relative discriminant window of 1e-12.
//==============================================================================
#pragma once

#include <array>
#include <functional>

#include "oldb/state.hpp"

namespace oldb {

struct ModeCoeffs {
    Complex u_perp{0.0, 0.0};
    Complex tau_a{0.0, 0.0};
    Complex tau_c{0.0, 0.0};
    Complex tau_s{0.0, 0.0};
    double k_mag = 0.0;
    double beta = 1.0;

    // |(uhat, tauhat)|^2 with the Frobenius tensor norm.
    double energy() const {
        return std::norm(u_perp) + std::norm(tau_a) + std::norm(tau_c) + 2.0 * std::norm(tau_s);
    }
};

namespace detail {

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; mirror).
inline constexpr std::array<double, 8> kGl16X = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
inline constexpr std::array<double, 8> kGl16W = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

template <class F>
double gl16(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 8; ++i) {
        s += kGl16W[i] * (f(mid + half * kGl16X[i]) + f(mid - half * kGl16X[i]));
    }
    return s * half;
}

struct PairPropagator {
    // [u(t); s(t)] = [cc * u0 + ss * ((kb/2) u0 + i k s0);
    //                 cc * s0 + ss * ((i k / 2) u0 - (kb/2) s0)]
    Complex cc, ss;
};

inline PairPropagator pair_propagator(double k, double beta, double t) {
    const double kb = std::pow(k, 2.0 * beta);
    const double disc = kb * kb - 2.0 * k * k;
    const double mu = -0.5 * kb;
    if (std::abs(disc) < 1e-12 * kb * kb) {
        // Confluent double root: e^(At) = e^(mu t)(I + t (A - mu I)).
        const double e = std::exp(mu * t);
        return {Complex(e, 0.0), Complex(e * t, 0.0)};
    }
    const Complex nu = std::sqrt(Complex(disc, 0.0)) * 0.5;
    const Complex ep = std::exp((mu + nu) * t);
    const Complex em = std::exp((mu - nu) * t);
    const Complex cc = 0.5 * (ep + em);
    Complex ss;
    if (std::abs(nu * t) < 1e-4) {
        const Complex x = nu * t;
        const Complex x2 = x * x;
        ss = std::exp(mu * t) * t * (1.0 + x2 / 6.0 + x2 * x2 / 120.0);
    } else {
        ss = (ep - em) / (2.0 * nu);
    }
    return {cc, ss};
}

// Decay rate of the slow characteristic root, -Re(lambda_plus) >= 0.
inline double slow_decay_rate(double k, double beta) {
    if (k == 0.0) return 0.0;
    const double kb = std::pow(k, 2.0 * beta);
    const double disc = kb * kb - 2.0 * k * k;
    if (disc < 0.0) return 0.5 * kb;
    return 0.5 * (kb - std::sqrt(disc));
}

// Oscillation frequency Im(lambda) of an underdamped mode (0 if overdamped).
inline double mode_frequency(double k, double beta) {
    if (k == 0.0) return 0.0;
    const double kb = std::pow(k, 2.0 * beta);
    const double disc = kb * kb - 2.0 * k * k;
    return disc < 0.0 ? 0.5 * std::sqrt(-disc) : 0.0;
}

} // namespace detail

inline ModeCoeffs mode_evolve(const ModeCoeffs& init, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("mode_evolve: t must be nonnegative");
    ModeCoeffs out = init;
    const double k = init.k_mag;
    if (k == 0.0) return out; // mean coefficients are conserved
    const double kb = std::pow(k, 2.0 * init.beta);
    const double relax = std::exp(-kb * t);
    out.tau_a = init.tau_a * relax;
    out.tau_c = init.tau_c * relax;
    const auto prop = detail::pair_propagator(k, init.beta, t);
    const Complex ik(0.0, k);
    out.u_perp = prop.cc * init.u_perp + prop.ss * (0.5 * kb * init.u_perp + ik * init.tau_s);
    out.tau_s = prop.cc * init.tau_s + prop.ss * (0.5 * ik * init.u_perp - 0.5 * kb * init.tau_s);
    return out;
}

// Relative residual of the weighted per-mode identity (beta = 1 only):
//   |X(t)|^2 = e^(-2 k^2 t) |X(0)|^2 + int_0^t 2 k^2 e^(-2 k^2 (t-s)) |u_L(s)|^2 ds.
// The integral uses composite 16-point Gauss-Legendre with ~n_quad nodes,
// restricted to the window where the integrand is above 1e-16 of its peak
// (the damped weight makes everything earlier irrelevant).
inline double duhamel_identity_residual(const ModeCoeffs& init, double t, int n_quad) {
    if (init.beta != 1.0)
        throw std::invalid_argument("duhamel_identity_residual: identity is stated for beta = 1");
    if (!(t >= 0.0)) throw std::invalid_argument("duhamel_identity_residual: t must be nonnegative");
    if (n_quad < 2) throw std::invalid_argument("duhamel_identity_residual: n_quad too small");

    const double k = init.k_mag;
    const ModeCoeffs fin = mode_evolve(init, t);
    const double lhs = fin.energy();
    const double e0 = init.energy();
    double rhs = std::exp(-2.0 * k * k * t) * e0;

    if (k > 0.0 && t > 0.0) {
        const double a = 2.0 * k * k;
        const double a_eff = a - 2.0 * detail::slow_decay_rate(k, 1.0); // > 0 always
        const double window = 38.0 / std::max(a_eff, 1e-300);
        const double s_lo = std::max(0.0, t - window);
        const int panels = std::max(1, n_quad / 16);
        const double w = (t - s_lo) / panels;
        std::vector<double> parts(static_cast<std::size_t>(panels));
        for (int p = 0; p < panels; ++p) {
            const double pa = s_lo + p * w;
            const double pb = (p == panels - 1) ? t : pa + w;
            parts[p] = detail::gl16(
                [&](double s) {
                    const ModeCoeffs at = mode_evolve(init, s);
                    return 2.0 * k * k * std::exp(-a * (t - s)) * std::norm(at.u_perp);
                },
                pa, pb);
        }
        rhs += pairwise_sum(parts);
    }

    const double denom = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return std::abs(lhs - rhs) / denom;
}

//------------------------------------------------------------------------------
// Continuum evaluator
//------------------------------------------------------------------------------

// Isotropic initial spectral data on the plane, in reduced coordinates. The
// components are real radial functions of k = |xi|; `scale` is the radial
// length on which they vary (panel sizing hint).
struct RadialProfile {
    std::function<double(double)> g_u = [](double) { return 0.0; };
    std::function<double(double)> g_a = [](double) { return 0.0; };
    std::function<double(double)> g_c = [](double) { return 0.0; };
    std::function<double(double)> g_s = [](double) { return 0.0; };
    double scale = 1.0;

    ModeCoeffs at(double k, double beta) const {
        ModeCoeffs m;
        m.u_perp = Complex(g_u(k), 0.0);
        m.tau_a = Complex(g_a(k), 0.0);
        m.tau_c = Complex(g_c(k), 0.0);
        m.tau_s = Complex(g_s(k), 0.0);
        m.k_mag = k;
        m.beta = beta;
        return m;
    }

    // |(u0, tau0)(k)| of the profile; the k -> 0 limit is the c0 datum.
    double magnitude(double k) const {
        const double u = g_u(k), a = g_a(k), c = g_c(k), s = g_s(k);
        return std::sqrt(u * u + a * a + c * c + 2.0 * s * s);
    }
    double c0() const { return magnitude(0.0); }
};

namespace detail {

// Panel edges on [0, k_cut] sized against the spectral variation of the
// evolved integrand: phase/damping budget ~10 per 16-node panel.
inline std::vector<double> continuum_panels(double k_cut, double t, double beta, double scale) {
    std::vector<double> edges{0.0};
    double k = 0.0;
    while (k < k_cut) {
        const double sigma = slow_decay_rate(std::max(k, 1e-12), beta);
        if (k > 0.0 && 2.0 * std::min(sigma, 0.45) * t > 100.0) break; // spectrally dead from here on
        const double rate = 1.5 + 2.0 * beta * std::pow(std::max(k, 1e-12), 2.0 * beta - 1.0);
        double w = std::min(0.75 * scale, 10.0 / (t * rate + 1.0));
        w = std::min(w, k_cut - k);
        k += w;
        edges.push_back(k);
    }
    return edges;
}

} // namespace detail

// (2 pi int_0^inf k^(2 s1 + 1) |X(k, t)|^2 dk)^(1/2), with X evolved from the
// profile by mode_evolve. The cutoff comes from the undamped profile tail
// (mode energy is non-increasing, so the t = 0 tail bounds every t); panels
// are refined by doubling until the value is stable to 1e-7 relative.
inline double continuum_norm(const RadialProfile& profile, double s1, double beta, double t) {
    if (!(s1 >= 0.0)) throw std::invalid_argument("continuum_norm: s1 must be nonnegative");
    if (!(beta >= 0.5 && beta <= 1.0))
        throw std::invalid_argument("continuum_norm: beta must lie in [1/2, 1]");
    if (!(t >= 0.0)) throw std::invalid_argument("continuum_norm: t must be nonnegative");

    const auto undamped = [&](double k) {
        const double m = profile.magnitude(k);
        return std::pow(k, 2.0 * s1 + 1.0) * m * m;
    };

    // Grow the cutoff until one further octave is below 1e-9 of the total.
    double k_cut = 4.0 * profile.scale;
    double total = detail::gl16(undamped, 0.0, k_cut);
    for (;;) {
        const double tail = detail::gl16(undamped, k_cut, 2.0 * k_cut);
        if (tail <= 1e-9 * std::max(total, 1e-300)) {
            k_cut *= 2.0; // one octave of margin
            break;
        }
        total += tail;
        k_cut *= 2.0;
        if (k_cut > profile.scale * 1.1e9)
            throw std::invalid_argument(
                "continuum_norm: profile tail does not converge (divergent weight)");
    }

    const auto evolved = [&](double k) {
        const ModeCoeffs m = mode_evolve(profile.at(k, beta), t);
        return std::pow(k, 2.0 * s1 + 1.0) * m.energy();
    };

    std::vector<double> edges = detail::continuum_panels(k_cut, t, beta, profile.scale);
    auto integrate = [&](const std::vector<double>& e) {
        std::vector<double> parts(e.size() - 1);
        for (std::size_t i = 0; i + 1 < e.size(); ++i)
            parts[i] = detail::gl16(evolved, e[i], e[i + 1]);
        return pairwise_sum(parts);
    };

    double value = integrate(edges);
    for (int round = 0; round < 8; ++round) {
        std::vector<double> fine;
        fine.reserve(edges.size() * 2);
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            fine.push_back(edges[i]);
            fine.push_back(0.5 * (edges[i] + edges[i + 1]));
        }
        fine.push_back(edges.back());
        const double refined = integrate(fine);
        const bool converged = std::abs(refined - value) <= 1e-7 * std::max(std::abs(refined), 1e-300);
        value = refined;
        edges = std::move(fine);
        if (converged) break;
        if (round == 7)
            throw std::runtime_error("continuum_norm: quadrature did not converge to 1e-7");
    }
    return std::sqrt(std::max(0.0, 2.0 * kPi * value));
}

// C0 = sqrt((c0^2 / 4) * 2 pi * int_0^eta r^(2 s1 + 1) e^(-2 r^2) dr).
inline double lower_bound_constant(double c0, double eta, double s1) {
    if (c0 == 0.0) return 0.0;
    if (!(c0 > 0.0) || !(eta > 0.0))
        throw std::invalid_argument("lower_bound_constant: c0 and eta must be positive");
    const auto f = [&](double r) { return std::pow(r, 2.0 * s1 + 1.0) * std::exp(-2.0 * r * r); };
    int panels = 8;
    double value = 0.0;
    for (int round = 0;; ++round) {
        std::vector<double> parts(static_cast<std::size_t>(panels));
        const double w = eta / panels;
        for (int p = 0; p < panels; ++p)
            parts[p] = detail::gl16(f, p * w, (p + 1) * w);
        const double refined = pairwise_sum(parts);
        if (round > 0 && std::abs(refined - value) <= 1e-10 * std::max(std::abs(refined), 1e-300)) {
            value = refined;
            break;
        }
        value = refined;
        panels *= 2;
        if (panels > (1 << 16))
            throw std::runtime_error("lower_bound_constant: quadrature did not converge");
    }
    return std::sqrt(0.25 * c0 * c0 * 2.0 * kPi * value);
}

//------------------------------------------------------------------------------
// Grid-wide linear propagator
//------------------------------------------------------------------------------

namespace detail {

struct ReducedBasis {
    double hx, hy; // khat
    double px, py; // perp(khat)
};

inline ReducedBasis reduced_basis(double kx, double ky) {
    const double k = std::sqrt(kx * kx + ky * ky);
    const double hx = kx / k, hy = ky / k;
    return {hx, hy, -hy, hx};
}

} // namespace detail

inline ModeCoeffs mode_decompose(Complex ux, Complex uy, Complex t11, Complex t12, Complex t22,
                                 double kx, double ky, double beta) {
    const auto b = detail::reduced_basis(kx, ky);
    ModeCoeffs m;
    m.k_mag = std::sqrt(kx * kx + ky * ky);
    m.beta = beta;
    m.u_perp = b.px * ux + b.py * uy; // parallel part is zero for div-free input
    m.tau_a = b.hx * b.hx * t11 + 2.0 * b.hx * b.hy * t12 + b.hy * b.hy * t22;
    m.tau_c = b.px * b.px * t11 + 2.0 * b.px * b.py * t12 + b.py * b.py * t22;
    m.tau_s = b.hx * b.px * t11 + (b.hx * b.py + b.hy * b.px) * t12 + b.hy * b.py * t22;
    return m;
}

inline void mode_reconstruct(const ModeCoeffs& m, double kx, double ky, Complex& ux, Complex& uy,
                             Complex& t11, Complex& t12, Complex& t22) {
    const auto b = detail::reduced_basis(kx, ky);
    ux = m.u_perp * b.px;
    uy = m.u_perp * b.py;
    t11 = m.tau_a * b.hx * b.hx + m.tau_c * b.px * b.px + 2.0 * m.tau_s * b.hx * b.px;
    t12 = m.tau_a * b.hx * b.hy + m.tau_c * b.px * b.py + m.tau_s * (b.hx * b.py + b.hy * b.px);
    t22 = m.tau_a * b.hy * b.hy + m.tau_c * b.py * b.py + 2.0 * m.tau_s * b.hy * b.py;
}

// Applies mode_evolve to every grid mode (decompose -> evolve -> reconstruct).
// The xi = 0 coefficients are conserved. Velocity components parallel to xi
// (absent for valid states) are projected away.
inline SpectralState grid_linear_evolve(const SpectralState& state, double t, const Params& params,
                                        const Grid& grid) {
    SpectralState out = SpectralState::zero(grid);
    out.time = state.time + t;
    for (int idx = 0; idx < grid.size(); ++idx) {
        const double kx = grid.kx_at(idx), ky = grid.ky_at(idx);
        if (kx == 0.0 && ky == 0.0) {
            out.u_hat.x[idx] = state.u_hat.x[idx];
            out.u_hat.y[idx] = state.u_hat.y[idx];
            out.tau_hat.xx[idx] = state.tau_hat.xx[idx];
            out.tau_hat.xy[idx] = state.tau_hat.xy[idx];
            out.tau_hat.yy[idx] = state.tau_hat.yy[idx];
            continue;
        }
        ModeCoeffs m = mode_decompose(state.u_hat.x[idx], state.u_hat.y[idx], state.tau_hat.xx[idx],
                                      state.tau_hat.xy[idx], state.tau_hat.yy[idx], kx, ky,
                                      params.beta);
        m = mode_evolve(m, t);
        mode_reconstruct(m, kx, ky, out.u_hat.x[idx], out.u_hat.y[idx], out.tau_hat.xx[idx],
                         out.tau_hat.xy[idx], out.tau_hat.yy[idx]);
    }
    return out;
}

} // namespace oldb
