//==============================================================================
// grid.hpp
// Periodic-box wavenumber bookkeeping and spectral multipliers:
//   * Grid: mode layout, wavenumbers xi = (2*pi/L)*(n1,n2), 2/3-rule mask.
//   * Fractional Laplacian symbol |xi|^(2*beta) and general |xi|^sigma symbols.
//   * Leray projection onto divergence-free fields (rank-1 perp form).
//   * Littlewood-Paley shell weights phi(2^-j xi) built from a smooth ramp.
//
// Storage convention: scalar spectral fields are row-major N*N arrays of
// complex coefficients, index (i1,i2) -> i1*N + i2, with integer mode
// numbers n = i for i <= N/2-1 and n = i-N otherwise (so n in [-N/2, N/2)).
// Coefficients follow f(x) = sum_xi fhat(xi) e^(i xi.x); real fields are
// conjugate-symmetric, fhat(-n) = conj(fhat(n)).
//==============================================================================
#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "oldb/common.hpp"

namespace oldb {

using SpectralScalar = std::vector<Complex>;
using PhysicalScalar = std::vector<double>;

struct SpectralVector {
    SpectralScalar x, y;
};

// Symmetric 2x2 tensor, three stored components (xx, xy, yy); yx == xy by
// storage, never numerically.
struct SpectralTensor {
    SpectralScalar xx, xy, yy;
};

struct SpectralMultiplier {
    std::vector<double> values; // one weight per mode, grid layout
};

struct Grid {
    int n_points = 0;
    double box_length = 0.0;
    std::vector<double> kx; // wavenumber component per axis index, size N
    std::vector<double> ky;
    std::vector<int> mode_n;              // integer mode number per axis index
    std::vector<std::uint8_t> dealias_mask; // 1 iff |n1|<=N/3 and |n2|<=N/3
    double mode_measure = 0.0;            // (2*pi/L)^2, d^2(xi) per mode

    int size() const { return n_points * n_points; }
    int index(int i1, int i2) const { return i1 * n_points + i2; }
    int i1_of(int idx) const { return idx / n_points; }
    int i2_of(int idx) const { return idx % n_points; }

    double kx_at(int idx) const { return kx[i1_of(idx)]; }
    double ky_at(int idx) const { return ky[i2_of(idx)]; }
    double k2_at(int idx) const {
        const double a = kx_at(idx), b = ky_at(idx);
        return a * a + b * b;
    }
    double kmag_at(int idx) const { return std::sqrt(k2_at(idx)); }

    // Index of the conjugate partner -n (mod N on both axes).
    int conj_index(int idx) const {
        const int N = n_points;
        const int i1 = i1_of(idx), i2 = i2_of(idx);
        return index((N - i1) % N, (N - i2) % N);
    }

    double k_min() const { return 2.0 * kPi / box_length; }
    // Largest |xi| on the grid (corner mode, includes the Nyquist row/col).
    double k_max() const {
        return k_min() * (n_points / 2) * std::sqrt(2.0);
    }

    SpectralScalar make_scalar() const { return SpectralScalar(size(), Complex(0.0, 0.0)); }
    SpectralVector make_vector() const { return {make_scalar(), make_scalar()}; }
    SpectralTensor make_tensor() const { return {make_scalar(), make_scalar(), make_scalar()}; }
};

inline Grid build_grid(int n_points, double box_length) {
    if (n_points < 16 || n_points % 2 != 0)
        throw std::invalid_argument("build_grid: n_points must be even and >= 16, got " +
                                    std::to_string(n_points));
    if (!(box_length > 0.0))
        throw std::invalid_argument("build_grid: box_length must be positive");

    Grid g;
    g.n_points = n_points;
    g.box_length = box_length;
    const double k0 = 2.0 * kPi / box_length;
    g.mode_measure = k0 * k0;
    g.kx.resize(n_points);
    g.ky.resize(n_points);
    g.mode_n.resize(n_points);
    for (int i = 0; i < n_points; ++i) {
        const int n = (i <= n_points / 2 - 1) ? i : i - n_points;
        g.mode_n[i] = n;
        g.kx[i] = k0 * n;
        g.ky[i] = k0 * n;
    }
    const int cutoff = n_points / 3; // 2/3 rule, quadratic nonlinearities
    g.dealias_mask.assign(static_cast<std::size_t>(g.size()), 0);
    for (int i1 = 0; i1 < n_points; ++i1)
        for (int i2 = 0; i2 < n_points; ++i2)
            g.dealias_mask[g.index(i1, i2)] =
                (std::abs(g.mode_n[i1]) <= cutoff && std::abs(g.mode_n[i2]) <= cutoff) ? 1 : 0;
    return g;
}

//------------------------------------------------------------------------------
// Multipliers
//------------------------------------------------------------------------------

// Symbol of (-Delta)^beta: |xi|^(2*beta), zero at xi = 0. The theory covers
// beta in [1/2, 1] only; reject anything else.
inline SpectralMultiplier fractional_symbol(const Grid& grid, double beta) {
    if (!(beta >= 0.5 && beta <= 1.0))
        throw std::invalid_argument("fractional_symbol: beta must lie in [1/2, 1]");
    SpectralMultiplier m;
    m.values.resize(grid.size());
    for (int idx = 0; idx < grid.size(); ++idx) {
        const double k2 = grid.k2_at(idx);
        m.values[idx] = (k2 == 0.0) ? 0.0 : std::pow(k2, beta);
    }
    return m;
}

// Symbol of Lambda^sigma = |xi|^sigma. Homogeneous multipliers of positive
// order vanish at xi = 0; negative orders are only ever applied to mean-free
// fields, so the origin value is pinned to 0 and callers guard the input.
inline SpectralMultiplier lambda_symbol(const Grid& grid, double sigma) {
    SpectralMultiplier m;
    m.values.resize(grid.size());
    for (int idx = 0; idx < grid.size(); ++idx) {
        const double k2 = grid.k2_at(idx);
        m.values[idx] = (k2 == 0.0) ? 0.0 : std::pow(k2, 0.5 * sigma);
    }
    return m;
}

inline void apply_multiplier(SpectralScalar& f, const SpectralMultiplier& m) {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= m.values[i];
}

//------------------------------------------------------------------------------
// Leray projection
//------------------------------------------------------------------------------

// P v = v - xi (xi.v)/|xi|^2, applied in the rank-1 form w = (e.v) e with
// e = perp(xi)/|xi|. The xi = 0 mode passes through unchanged.
inline void leray_project(SpectralVector& v, const Grid& grid) {
    for (int idx = 0; idx < grid.size(); ++idx) {
        const double a = grid.kx_at(idx), b = grid.ky_at(idx);
        const double k2 = a * a + b * b;
        if (k2 == 0.0) continue;
        const double inv = 1.0 / std::sqrt(k2);
        const double ex = -b * inv, ey = a * inv; // unit perp of xi
        const Complex s = ex * v.x[idx] + ey * v.y[idx];
        v.x[idx] = s * ex;
        v.y[idx] = s * ey;
    }
}

//------------------------------------------------------------------------------
// Dealiasing
//------------------------------------------------------------------------------

inline void dealias(SpectralScalar& f, const Grid& grid) {
    for (int idx = 0; idx < grid.size(); ++idx)
        if (!grid.dealias_mask[idx]) f[idx] = Complex(0.0, 0.0);
}

inline void dealias(SpectralVector& v, const Grid& grid) {
    dealias(v.x, grid);
    dealias(v.y, grid);
}

inline void dealias(SpectralTensor& t, const Grid& grid) {
    dealias(t.xx, grid);
    dealias(t.xy, grid);
    dealias(t.yy, grid);
}

//------------------------------------------------------------------------------
// Littlewood-Paley shells
//------------------------------------------------------------------------------
// The mother function phi comes from a smooth ramp chi(r) that is 1 on
// [0, 4/3], 0 on [3/2, inf), with the C^inf bump-quotient transition in
// between; phi_raw(xi) = chi(|xi|/2) - chi(|xi|) is supported in [4/3, 3]
// and telescopes to a dyadic partition of unity. Rescaling the argument by
// 16/9 moves the support into [3/4, 27/16], inside the annulus
// {3/4 <= |xi| <= 8/3}, preserving the partition identities.

namespace detail {

inline double smooth_step01(double t) {
    // 0 at t<=0, 1 at t>=1, C^inf in between.
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

inline double lp_chi(double r) {
    // 1 on [0, 4/3], 0 on [3/2, inf).
    return 1.0 - smooth_step01((r - 4.0 / 3.0) / (3.0 / 2.0 - 4.0 / 3.0));
}

} // namespace detail

// phi(|xi|); radial, values in [0, 1], supp in [3/4, 8/3].
inline double lp_phi(double r) {
    const double rs = r * (16.0 / 9.0);
    return detail::lp_chi(rs / 2.0) - detail::lp_chi(rs);
}

inline constexpr double kLpSupportLo = 0.75;      // 3/4
inline constexpr double kLpSupportHi = 8.0 / 3.0; // outer annulus edge

struct ShellWeights {
    int j_min = 0;
    int j_max = -1;
    std::vector<std::pair<int, SpectralMultiplier>> shells;
    // 1 iff the mode is nonzero and the covered shells sum to 1 there.
    std::vector<std::uint8_t> covered;
};

// Weights phi(2^-j xi) for every level j whose annulus meets the grid's
// nonzero wavenumbers.
inline ShellWeights lp_shell_weights(const Grid& grid) {
    ShellWeights out;
    const double kmin = grid.k_min();
    const double kmax = grid.k_max();
    out.j_min = static_cast<int>(std::ceil(std::log2(kmin / kLpSupportHi)));
    out.j_max = static_cast<int>(std::floor(std::log2(kmax / kLpSupportLo)));

    std::vector<double> sum(grid.size(), 0.0);
    for (int j = out.j_min; j <= out.j_max; ++j) {
        SpectralMultiplier m;
        m.values.assign(static_cast<std::size_t>(grid.size()), 0.0);
        const double scale = std::ldexp(1.0, -j); // 2^-j
        bool any = false;
        for (int idx = 0; idx < grid.size(); ++idx) {
            const double k = grid.kmag_at(idx);
            if (k == 0.0) continue;
            const double w = lp_phi(k * scale);
            if (w != 0.0) {
                m.values[idx] = w;
                sum[idx] += w;
                any = true;
            }
        }
        if (any) out.shells.emplace_back(j, std::move(m));
    }
    out.covered.assign(static_cast<std::size_t>(grid.size()), 0);
    for (int idx = 0; idx < grid.size(); ++idx) {
        if (grid.k2_at(idx) == 0.0) continue;
        out.covered[idx] = std::abs(sum[idx] - 1.0) <= 1e-12 ? 1 : 0;
    }
    return out;
}

} // namespace oldb
