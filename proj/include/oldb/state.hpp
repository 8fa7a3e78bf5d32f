//==============================================================================
// state.hpp
// Simulation state and parameter types shared by all modules, plus the
// binary checkpoint format.
//==============================================================================
#pragma once

#include <cstdio>
#include <cstring>
#include <fstream>

#include "oldb/grid.hpp"

namespace oldb {

struct Params {
    double beta = 1.0;          // diffusion order of (-Delta)^beta, in [1/2, 1]
    double b_slip = 0.0;        // slip parameter b of Q, in [-1, 1]
    double box_length = 2.0 * kPi;
    int n_points = 64;
    double dt = 0.1;            // upper bound; steppers never exceed stable_dt
    double t_end = 10.0;
    double sobolev_s = 2.5;     // s > 2
    double cross_k = 0.125;     // the small cross-coefficient k
    double c2_split = 4.0;      // C2 of the splitting sets
    double sample_interval = 0.25;
    std::uint64_t seed = 1;
    double amplitude = 1e-2;    // initial-data scale delta (H^s norm)

    void validate() const {
        if (!(beta >= 0.5 && beta <= 1.0))
            throw std::invalid_argument("Params: beta must lie in [1/2, 1]");
        if (!(b_slip >= -1.0 && b_slip <= 1.0))
            throw std::invalid_argument("Params: b_slip must lie in [-1, 1]");
        if (!(box_length > 0.0)) throw std::invalid_argument("Params: box_length must be positive");
        if (n_points < 16 || n_points % 2 != 0)
            throw std::invalid_argument("Params: n_points must be even and >= 16");
        if (!(dt > 0.0)) throw std::invalid_argument("Params: dt must be positive");
        if (!(sobolev_s > 2.0)) throw std::invalid_argument("Params: sobolev_s must exceed 2");
        if (!(cross_k > 0.0)) throw std::invalid_argument("Params: cross_k must be positive");
        if (!(c2_split > 0.0)) throw std::invalid_argument("Params: c2_split must be positive");
        if (!(sample_interval > 0.0))
            throw std::invalid_argument("Params: sample_interval must be positive");
        if (!(amplitude > 0.0)) throw std::invalid_argument("Params: amplitude must be positive");
    }
};

struct SpectralState {
    double time = 0.0;
    SpectralVector u_hat;   // velocity, 2 components
    SpectralTensor tau_hat; // stress, (tau11, tau12, tau22)

    static SpectralState zero(const Grid& grid) {
        SpectralState s;
        s.u_hat = grid.make_vector();
        s.tau_hat = grid.make_tensor();
        return s;
    }
};

namespace detail {

inline double linf(const SpectralScalar& f) {
    double m = 0.0;
    for (const Complex& c : f) m = std::max(m, std::abs(c));
    return m;
}

inline double l2(const std::vector<const SpectralScalar*>& comps,
                 const std::vector<double>& w) {
    std::vector<double> acc;
    acc.reserve(comps.size() * comps.front()->size());
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (const Complex& z : *comps[c]) acc.push_back(w[c] * std::norm(z));
    return std::sqrt(pairwise_sum(acc));
}

inline double conj_symmetry_defect(const SpectralScalar& f, const Grid& grid) {
    double worst = 0.0;
    for (int idx = 0; idx < grid.size(); ++idx) {
        const int cj = grid.conj_index(idx);
        if (cj < idx) continue;
        worst = std::max(worst, std::abs(f[idx] - std::conj(f[cj])));
    }
    return worst;
}

} // namespace detail

// Diagnostic invariant check. Returns one human-readable violation per failed
// invariant; empty means the state is structurally sound at the documented
// tolerances.
inline std::vector<std::string> validate_state(const SpectralState& state, const Grid& grid) {
    std::vector<std::string> violations;
    const auto sz = static_cast<std::size_t>(grid.size());
    if (state.u_hat.x.size() != sz || state.u_hat.y.size() != sz ||
        state.tau_hat.xx.size() != sz || state.tau_hat.xy.size() != sz ||
        state.tau_hat.yy.size() != sz) {
        violations.push_back("size: component length does not match grid");
        return violations;
    }

    for (const SpectralScalar* f :
         {&state.u_hat.x, &state.u_hat.y, &state.tau_hat.xx, &state.tau_hat.xy, &state.tau_hat.yy})
        for (const Complex& z : *f)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                violations.push_back("finite: non-finite coefficient present");
                goto after_finite;
            }
after_finite:

    // Divergence-free: max |xi.uhat| <= 1e-10 * ||uhat||.
    {
        double worst = 0.0;
        for (int idx = 0; idx < grid.size(); ++idx) {
            const Complex div =
                grid.kx_at(idx) * state.u_hat.x[idx] + grid.ky_at(idx) * state.u_hat.y[idx];
            worst = std::max(worst, std::abs(div));
        }
        const double unorm = detail::l2({&state.u_hat.x, &state.u_hat.y}, {1.0, 1.0});
        if (worst > 1e-10 * unorm && unorm > 0.0)
            violations.push_back("divergence: max|xi.uhat| = " + std::to_string(worst) +
                                 " exceeds 1e-10 * ||uhat|| = " + std::to_string(1e-10 * unorm));
    }

    // Reality: conjugate symmetry of every component to 1e-12 (relative to
    // the largest coefficient of that component).
    {
        const char* names[] = {"u1", "u2", "tau11", "tau12", "tau22"};
        const SpectralScalar* comps[] = {&state.u_hat.x, &state.u_hat.y, &state.tau_hat.xx,
                                         &state.tau_hat.xy, &state.tau_hat.yy};
        for (int c = 0; c < 5; ++c) {
            const double defect = detail::conj_symmetry_defect(*comps[c], grid);
            const double scale = detail::linf(*comps[c]);
            if (defect > 1e-12 * std::max(scale, 1e-300) && scale > 0.0)
                violations.push_back(std::string("reality: component ") + names[c] +
                                     " conjugate-symmetry defect " + std::to_string(defect));
        }
    }

    return violations;
}

//------------------------------------------------------------------------------
// Checkpoint format (bit-exact):
//   magic "OLDB1\0", then little-endian
//   u32 n_points, f64 box_length, f64 beta, f64 b_slip, f64 time,
//   then u_hat (2 components) and tau_hat (3 components) as contiguous f64
//   interleaved (re, im) arrays in row-major mode order.
//------------------------------------------------------------------------------

struct Checkpoint {
    std::uint32_t n_points = 0;
    double box_length = 0.0;
    double beta = 1.0;
    double b_slip = 0.0;
    SpectralState state;
};

namespace detail {

inline void write_f64(std::ostream& os, double v) {
    static_assert(sizeof(double) == 8);
    os.write(reinterpret_cast<const char*>(&v), 8);
}

inline void write_component(std::ostream& os, const SpectralScalar& f) {
    for (const Complex& z : f) {
        write_f64(os, z.real());
        write_f64(os, z.imag());
    }
}

inline double read_f64(std::istream& is) {
    double v = 0.0;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}

inline void read_component(std::istream& is, SpectralScalar& f, std::size_t n) {
    f.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double re = read_f64(is);
        const double im = read_f64(is);
        f[i] = Complex(re, im);
    }
}

} // namespace detail

// Assumes a little-endian host (checked nowhere cheaper than here).
inline void save_checkpoint(const std::string& path, const SpectralState& state,
                            const Params& params) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("save_checkpoint: cannot open " + path);
    const char magic[6] = {'O', 'L', 'D', 'B', '1', '\0'};
    os.write(magic, 6);
    const std::uint32_t n = static_cast<std::uint32_t>(params.n_points);
    os.write(reinterpret_cast<const char*>(&n), 4);
    detail::write_f64(os, params.box_length);
    detail::write_f64(os, params.beta);
    detail::write_f64(os, params.b_slip);
    detail::write_f64(os, state.time);
    detail::write_component(os, state.u_hat.x);
    detail::write_component(os, state.u_hat.y);
    detail::write_component(os, state.tau_hat.xx);
    detail::write_component(os, state.tau_hat.xy);
    detail::write_component(os, state.tau_hat.yy);
    if (!os) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_checkpoint: cannot open " + path);
    char magic[6] = {};
    is.read(magic, 6);
    if (std::memcmp(magic, "OLDB1\0", 6) != 0)
        throw std::runtime_error("load_checkpoint: bad magic in " + path);
    Checkpoint cp;
    is.read(reinterpret_cast<char*>(&cp.n_points), 4);
    cp.box_length = detail::read_f64(is);
    cp.beta = detail::read_f64(is);
    cp.b_slip = detail::read_f64(is);
    cp.state.time = detail::read_f64(is);
    const std::size_t n = static_cast<std::size_t>(cp.n_points) * cp.n_points;
    detail::read_component(is, cp.state.u_hat.x, n);
    detail::read_component(is, cp.state.u_hat.y, n);
    detail::read_component(is, cp.state.tau_hat.xx, n);
    detail::read_component(is, cp.state.tau_hat.xy, n);
    detail::read_component(is, cp.state.tau_hat.yy, n);
    if (!is) throw std::runtime_error("load_checkpoint: truncated file " + path);
    return cp;
}

} // namespace oldb
