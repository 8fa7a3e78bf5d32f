//==============================================================================
// stepper.hpp
// Time integration with the stiff stress diffusion handled exactly.
//
// Both schemes are Lawson-type RK4: with E_h the linear semigroup and N the
// fed-back tendency, classical RK4 applied to z(t) = E_(-(t-t0)) y(t) gives
//   a2 = E_(h/2) y + (h/2) E_(h/2) k1,   k1 = N(y)
//   a3 = E_(h/2) y + (h/2) k2,           k2 = N(a2)
//   a4 = E_h y + h E_(h/2) k3,           k3 = N(a3)
//   y' = E_h y + (h/6)(E_h k1 + 2 E_(h/2) k2 + 2 E_(h/2) k3 + k4)
// if_rk4:              E_h = diffusion semigroup e^(-|xi|^(2 beta) h) on tau,
//                      N = full tendency minus diffusion.
// exact_linear_lawson: E_h = full per-mode linear propagator, N = quadratic
//                      terms only.
// Every step ends with Leray projection + dealiasing; a step that grows any
// norm by more than 10x is rejected (this solver targets the small-data
// regime, violent growth signals misconfiguration).
//==============================================================================
#pragma once

#include "oldb/dynamics.hpp"
#include "oldb/linear_oracle.hpp"

namespace oldb {

enum class Scheme { if_rk4, exact_linear_lawson };

struct StepperConfig {
    Scheme scheme = Scheme::if_rk4;
    double dt = 0.1;
    double cfl_safety = 0.4;
};

class Stepper {
  public:
    Stepper(const Grid& grid, const Params& params, const StepperConfig& config,
            SpectralTransform& tf)
        : grid_(grid), params_(params), config_(config), tf_(tf) {
        if (!(config.dt > 0.0)) throw std::invalid_argument("Stepper: dt must be positive");
        if (!(config.cfl_safety > 0.0 && config.cfl_safety <= 1.0))
            throw std::invalid_argument("Stepper: cfl_safety must lie in (0, 1]");
        symbol_ = fractional_symbol(grid, params.beta);
    }

    // min(cfl * dx / max|u|, cfl / omega_max, configured dt); omega_max is
    // the top oscillation frequency |xi|_max / sqrt(2) of the coupled
    // (u_perp, shear) subsystem.
    double stable_dt(const SpectralState& state) {
        const double omega_max = grid_.k_max() / std::sqrt(2.0);
        double dt = std::min(config_.dt, config_.cfl_safety / omega_max);
        PhysicalScalar ux, uy;
        tf_.to_physical(state.u_hat.x, ux);
        tf_.to_physical(state.u_hat.y, uy);
        double umax = 0.0;
        for (std::size_t i = 0; i < ux.size(); ++i)
            umax = std::max(umax, std::sqrt(ux[i] * ux[i] + uy[i] * uy[i]));
        if (umax > 0.0) {
            const double dx = grid_.box_length / grid_.n_points;
            dt = std::min(dt, config_.cfl_safety * dx / umax);
        }
        return dt;
    }

    SpectralState step(const SpectralState& state) { return step(state, config_.dt); }

    SpectralState step(const SpectralState& state, double h) {
        const double u_before = l2(state.u_hat.x, state.u_hat.y);
        const double tau_before = l2(state.tau_hat.xx, state.tau_hat.xy, state.tau_hat.yy);

        prepare_half_step(0.5 * h);

        SpectralState y = state;
        const auto N = [&](const SpectralState& s) {
            return config_.scheme == Scheme::if_rk4
                       ? rhs(s, params_, grid_, tf_, /*include_diffusion=*/false, RhsParts::full)
                       : rhs(s, params_, grid_, tf_, false, RhsParts::quadratic_only);
        };

        Tendency k1 = N(y);
        SpectralState ey = apply_half(y);
        Tendency ek1 = apply_half(k1);

        SpectralState a2 = axpy(ey, 0.5 * h, ek1);
        Tendency k2 = N(a2);

        SpectralState a3 = axpy(ey, 0.5 * h, k2);
        Tendency k3 = N(a3);

        SpectralState eey = apply_half(ey);
        Tendency ek3 = apply_half(k3);
        SpectralState a4 = axpy(eey, h, ek3);
        Tendency k4 = N(a4);

        Tendency ehk1 = apply_half(ek1);
        Tendency ek2 = apply_half(k2);

        SpectralState out = eey;
        accumulate(out, h / 6.0, ehk1);
        accumulate(out, h / 3.0, ek2);
        accumulate(out, h / 3.0, ek3);
        accumulate(out, h / 6.0, k4);
        out.time = state.time + h;

        leray_project(out.u_hat, grid_);
        dealias(out.u_hat, grid_);
        dealias(out.tau_hat, grid_);

        const double u_after = l2(out.u_hat.x, out.u_hat.y);
        const double tau_after = l2(out.tau_hat.xx, out.tau_hat.xy, out.tau_hat.yy);
        if (u_after > 10.0 * u_before + 1e-300 || tau_after > 10.0 * tau_before + 1e-300)
            throw BlowUpError("step rejected at t = " + std::to_string(state.time) +
                              ": ||u|| " + std::to_string(u_before) + " -> " +
                              std::to_string(u_after) + ", ||tau|| " + std::to_string(tau_before) +
                              " -> " + std::to_string(tau_after));
        return out;
    }

  private:
    template <class... F>
    static double l2(const F&... fields) {
        std::vector<double> acc;
        auto push = [&acc](const SpectralScalar& f) {
            for (const Complex& z : f) acc.push_back(std::norm(z));
        };
        (push(fields), ...);
        return std::sqrt(pairwise_sum(acc));
    }

    // Per-mode propagator over the cached half step.
    void prepare_half_step(double h_half) {
        if (cache_h_ == h_half) return;
        cache_h_ = h_half;
        const int n = grid_.size();
        relax_half_.resize(n);
        for (int idx = 0; idx < n; ++idx)
            relax_half_[idx] = std::exp(-symbol_.values[idx] * h_half);
        if (config_.scheme == Scheme::exact_linear_lawson) {
            pair_cc_.resize(n);
            pair_ss_.resize(n);
            for (int idx = 0; idx < n; ++idx) {
                const double k = grid_.kmag_at(idx);
                if (k == 0.0) {
                    pair_cc_[idx] = Complex(1.0, 0.0);
                    pair_ss_[idx] = Complex(0.0, 0.0);
                    continue;
                }
                const auto p = detail::pair_propagator(k, params_.beta, h_half);
                pair_cc_[idx] = p.cc;
                pair_ss_[idx] = p.ss;
            }
        }
    }

    template <class Bundle>
    Bundle apply_half(const Bundle& in) const {
        Bundle out = in;
        auto& u = fields_u(out);
        auto& tau = fields_tau(out);
        if (config_.scheme == Scheme::if_rk4) {
            for (int idx = 0; idx < grid_.size(); ++idx) {
                tau.xx[idx] *= relax_half_[idx];
                tau.xy[idx] *= relax_half_[idx];
                tau.yy[idx] *= relax_half_[idx];
            }
            return out;
        }
        for (int idx = 0; idx < grid_.size(); ++idx) {
            const double kx = grid_.kx_at(idx), ky = grid_.ky_at(idx);
            const double k = grid_.kmag_at(idx);
            if (k == 0.0) continue;
            ModeCoeffs m = mode_decompose(u.x[idx], u.y[idx], tau.xx[idx], tau.xy[idx],
                                          tau.yy[idx], kx, ky, params_.beta);
            const Complex ik(0.0, k);
            const double kb = symbol_.values[idx];
            const Complex cc = pair_cc_[idx], ss = pair_ss_[idx];
            ModeCoeffs e = m;
            e.u_perp = cc * m.u_perp + ss * (0.5 * kb * m.u_perp + ik * m.tau_s);
            e.tau_s = cc * m.tau_s + ss * (0.5 * ik * m.u_perp - 0.5 * kb * m.tau_s);
            e.tau_a = m.tau_a * relax_half_[idx];
            e.tau_c = m.tau_c * relax_half_[idx];
            mode_reconstruct(e, kx, ky, u.x[idx], u.y[idx], tau.xx[idx], tau.xy[idx], tau.yy[idx]);
        }
        return out;
    }

    static SpectralVector& fields_u(SpectralState& s) { return s.u_hat; }
    static SpectralTensor& fields_tau(SpectralState& s) { return s.tau_hat; }
    static SpectralVector& fields_u(Tendency& t) { return t.du_hat; }
    static SpectralTensor& fields_tau(Tendency& t) { return t.dtau_hat; }

    SpectralState axpy(const SpectralState& base, double c, const Tendency& dir) const {
        SpectralState out = base;
        accumulate(out, c, dir);
        return out;
    }

    void accumulate(SpectralState& y, double c, const Tendency& dir) const {
        for (int idx = 0; idx < grid_.size(); ++idx) {
            y.u_hat.x[idx] += c * dir.du_hat.x[idx];
            y.u_hat.y[idx] += c * dir.du_hat.y[idx];
            y.tau_hat.xx[idx] += c * dir.dtau_hat.xx[idx];
            y.tau_hat.xy[idx] += c * dir.dtau_hat.xy[idx];
            y.tau_hat.yy[idx] += c * dir.dtau_hat.yy[idx];
        }
    }

    const Grid& grid_;
    Params params_;
    StepperConfig config_;
    SpectralTransform& tf_;
    SpectralMultiplier symbol_;
    double cache_h_ = -1.0;
    std::vector<double> relax_half_;
    std::vector<Complex> pair_cc_, pair_ss_;
};

inline SpectralState step(const SpectralState& state, const Params& params,
                          const StepperConfig& config, const Grid& grid, SpectralTransform& tf) {
    Stepper s(grid, params, config, tf);
    return s.step(state);
}

inline double stable_dt(const SpectralState& state, const Params& params,
                        const StepperConfig& config, const Grid& grid, SpectralTransform& tf) {
    Stepper s(grid, params, config, tf);
    return s.stable_dt(state);
}

} // namespace oldb
