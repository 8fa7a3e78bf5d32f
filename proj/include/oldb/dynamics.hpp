//==============================================================================
// dynamics.hpp
// Right-hand-side terms of the stress-diffusive Oldroyd-B system with the
// pressure eliminated by Leray projection:
//   du/dt   = P(-(u.grad u) + div tau)
//   dtau/dt = -(u.grad tau) - Q(grad u, tau) + D(u) - (-Delta)^beta tau
// Q(grad u, tau) = tau*Omega - Omega*tau + b (D tau + tau D) is evaluated
// pointwise in physical space; transport terms pseudo-spectrally with the
// 2/3-rule applied to every quadratic product.
//==============================================================================
#pragma once

#include "oldb/state.hpp"
#include "oldb/transform.hpp"

namespace oldb {

struct Tendency {
    SpectralVector du_hat;
    SpectralTensor dtau_hat;
    bool includes_diffusion = false;
};

// Which terms the evaluation assembles. Steppers with an exact linear
// propagator feed back only the quadratic part.
enum class RhsParts {
    full,          // everything except (optionally) the stiff diffusion
    quadratic_only // -P(u.grad u) and -(u.grad tau) - Q only
};

// Dhat_jk = (i/2)(xi_k uhat_j + xi_j uhat_k)
inline SpectralTensor deformation(const SpectralVector& u_hat, const Grid& grid) {
    SpectralTensor d = grid.make_tensor();
    const Complex iu(0.0, 1.0);
    for (int idx = 0; idx < grid.size(); ++idx) {
        const double k1 = grid.kx_at(idx), k2 = grid.ky_at(idx);
        d.xx[idx] = iu * (k1 * u_hat.x[idx]);
        d.xy[idx] = iu * 0.5 * (k2 * u_hat.x[idx] + k1 * u_hat.y[idx]);
        d.yy[idx] = iu * (k2 * u_hat.y[idx]);
    }
    return d;
}

// Antisymmetric part: only the (1,2) entry is stored; Omega_21 = -Omega_12
// and the diagonal vanishes identically.
inline SpectralScalar vorticity_tensor(const SpectralVector& u_hat, const Grid& grid) {
    SpectralScalar w = grid.make_scalar();
    const Complex iu(0.0, 1.0);
    for (int idx = 0; idx < grid.size(); ++idx)
        w[idx] = iu * 0.5 * (grid.ky_at(idx) * u_hat.x[idx] - grid.kx_at(idx) * u_hat.y[idx]);
    return w;
}

struct PhysicalTensor {
    PhysicalScalar xx, xy, yy;
};

// grad u in physical space, entries g_jk = d_k u_j.
struct PhysicalGradU {
    PhysicalScalar g11, g12, g21, g22;
};

// Pointwise 2x2 algebra: Q = tau*Omega - Omega*tau + b (D tau + tau D).
// With tau = [[a, s], [s, c]], Omega = [[0, w], [-w, 0]]:
//   tau*Omega - Omega*tau = [[-2 s w, (a - c) w], [(a - c) w, 2 s w]].
inline PhysicalTensor q_bilinear(const PhysicalGradU& grad_u, const PhysicalTensor& tau,
                                 double b_slip) {
    const std::size_t n = tau.xx.size();
    PhysicalTensor q{PhysicalScalar(n), PhysicalScalar(n), PhysicalScalar(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double a = tau.xx[i], s = tau.xy[i], c = tau.yy[i];
        const double d11 = grad_u.g11[i];
        const double d12 = 0.5 * (grad_u.g12[i] + grad_u.g21[i]);
        const double d22 = grad_u.g22[i];
        const double w = 0.5 * (grad_u.g12[i] - grad_u.g21[i]); // Omega_12
        q.xx[i] = -2.0 * s * w + b_slip * 2.0 * (d11 * a + d12 * s);
        q.xy[i] = (a - c) * w + b_slip * (d11 * s + d12 * c + a * d12 + s * d22);
        q.yy[i] = 2.0 * s * w + b_slip * 2.0 * (d12 * s + d22 * c);
    }
    return q;
}

namespace detail {

inline void spectral_gradient(const SpectralScalar& f_hat, const Grid& grid,
                              SpectralScalar& dx_hat, SpectralScalar& dy_hat) {
    dx_hat.resize(f_hat.size());
    dy_hat.resize(f_hat.size());
    const Complex iu(0.0, 1.0);
    for (int idx = 0; idx < grid.size(); ++idx) {
        dx_hat[idx] = iu * grid.kx_at(idx) * f_hat[idx];
        dy_hat[idx] = iu * grid.ky_at(idx) * f_hat[idx];
    }
}

// u.grad f from physical-space u and a spectral component f.
inline SpectralScalar advect_component(const PhysicalScalar& ux, const PhysicalScalar& uy,
                                       const SpectralScalar& f_hat, const Grid& grid,
                                       SpectralTransform& tf) {
    SpectralScalar dx_hat, dy_hat;
    spectral_gradient(f_hat, grid, dx_hat, dy_hat);
    PhysicalScalar dx, dy;
    tf.to_physical(dx_hat, dx);
    tf.to_physical(dy_hat, dy);
    PhysicalScalar prod(dx.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = ux[i] * dx[i] + uy[i] * dy[i];
    SpectralScalar out;
    tf.to_spectral(prod, out);
    dealias(out, grid);
    return out;
}

} // namespace detail

// Pseudo-spectral u.grad f for one scalar component of f.
inline SpectralScalar advect(const SpectralVector& u_hat, const SpectralScalar& f_hat,
                             const Grid& grid, SpectralTransform& tf) {
    PhysicalScalar ux, uy;
    tf.to_physical(u_hat.x, ux);
    tf.to_physical(u_hat.y, uy);
    return detail::advect_component(ux, uy, f_hat, grid, tf);
}

inline void div_tau(const SpectralTensor& tau_hat, const Grid& grid, SpectralVector& out) {
    const Complex iu(0.0, 1.0);
    for (int idx = 0; idx < grid.size(); ++idx) {
        const double k1 = grid.kx_at(idx), k2 = grid.ky_at(idx);
        out.x[idx] = iu * (k1 * tau_hat.xx[idx] + k2 * tau_hat.xy[idx]);
        out.y[idx] = iu * (k1 * tau_hat.xy[idx] + k2 * tau_hat.yy[idx]);
    }
}

inline Tendency rhs(const SpectralState& state, const Params& params, const Grid& grid,
                    SpectralTransform& tf, bool include_diffusion,
                    RhsParts parts = RhsParts::full) {
    Tendency out;
    out.du_hat = grid.make_vector();
    out.dtau_hat = grid.make_tensor();
    out.includes_diffusion = include_diffusion && parts == RhsParts::full;

    // Physical velocity and velocity gradient (shared by transport and Q).
    PhysicalScalar ux, uy;
    tf.to_physical(state.u_hat.x, ux);
    tf.to_physical(state.u_hat.y, uy);

    PhysicalGradU gu;
    {
        SpectralScalar gx_hat, gy_hat;
        detail::spectral_gradient(state.u_hat.x, grid, gx_hat, gy_hat);
        tf.to_physical(gx_hat, gu.g11);
        tf.to_physical(gy_hat, gu.g12);
        detail::spectral_gradient(state.u_hat.y, grid, gx_hat, gy_hat);
        tf.to_physical(gx_hat, gu.g21);
        tf.to_physical(gy_hat, gu.g22);
    }

    // Velocity equation: P(-(u.grad u) + div tau).
    {
        PhysicalScalar adv(ux.size());
        for (std::size_t i = 0; i < adv.size(); ++i)
            adv[i] = ux[i] * gu.g11[i] + uy[i] * gu.g12[i];
        SpectralScalar adv_hat;
        tf.to_spectral(adv, adv_hat);
        dealias(adv_hat, grid);
        for (int idx = 0; idx < grid.size(); ++idx) out.du_hat.x[idx] = -adv_hat[idx];

        for (std::size_t i = 0; i < adv.size(); ++i)
            adv[i] = ux[i] * gu.g21[i] + uy[i] * gu.g22[i];
        tf.to_spectral(adv, adv_hat);
        dealias(adv_hat, grid);
        for (int idx = 0; idx < grid.size(); ++idx) out.du_hat.y[idx] = -adv_hat[idx];

        if (parts == RhsParts::full) {
            SpectralVector dvt = grid.make_vector();
            div_tau(state.tau_hat, grid, dvt);
            for (int idx = 0; idx < grid.size(); ++idx) {
                out.du_hat.x[idx] += dvt.x[idx];
                out.du_hat.y[idx] += dvt.y[idx];
            }
        }
        leray_project(out.du_hat, grid);
    }

    // Stress equation.
    {
        PhysicalTensor tau_p;
        tf.to_physical(state.tau_hat.xx, tau_p.xx);
        tf.to_physical(state.tau_hat.xy, tau_p.xy);
        tf.to_physical(state.tau_hat.yy, tau_p.yy);

        const SpectralScalar* tau_comp[3] = {&state.tau_hat.xx, &state.tau_hat.xy,
                                             &state.tau_hat.yy};
        SpectralScalar* dtau_comp[3] = {&out.dtau_hat.xx, &out.dtau_hat.xy, &out.dtau_hat.yy};
        for (int c = 0; c < 3; ++c) {
            SpectralScalar adv = detail::advect_component(ux, uy, *tau_comp[c], grid, tf);
            for (int idx = 0; idx < grid.size(); ++idx) (*dtau_comp[c])[idx] = -adv[idx];
        }

        PhysicalTensor q = q_bilinear(gu, tau_p, params.b_slip);
        SpectralScalar q_hat;
        const PhysicalScalar* q_comp[3] = {&q.xx, &q.xy, &q.yy};
        for (int c = 0; c < 3; ++c) {
            tf.to_spectral(*q_comp[c], q_hat);
            dealias(q_hat, grid);
            for (int idx = 0; idx < grid.size(); ++idx) (*dtau_comp[c])[idx] -= q_hat[idx];
        }

        if (parts == RhsParts::full) {
            const SpectralTensor def = deformation(state.u_hat, grid);
            for (int idx = 0; idx < grid.size(); ++idx) {
                out.dtau_hat.xx[idx] += def.xx[idx];
                out.dtau_hat.xy[idx] += def.xy[idx];
                out.dtau_hat.yy[idx] += def.yy[idx];
            }
            if (include_diffusion) {
                for (int idx = 0; idx < grid.size(); ++idx) {
                    const double k2 = grid.k2_at(idx);
                    const double sym = (k2 == 0.0) ? 0.0 : std::pow(k2, params.beta);
                    out.dtau_hat.xx[idx] -= sym * state.tau_hat.xx[idx];
                    out.dtau_hat.xy[idx] -= sym * state.tau_hat.xy[idx];
                    out.dtau_hat.yy[idx] -= sym * state.tau_hat.yy[idx];
                }
            }
        }
    }

    return out;
}

} // namespace oldb
