//==============================================================================
// transform.hpp
// FFTW-backed transforms between spectral coefficients and physical grid
// values. Conventions:
//   * f(x_m) = sum_n fhat_n e^(i xi_n . x_m), x_m = (L/N) m, so to_physical
//     is an unnormalized FFTW BACKWARD transform and to_spectral divides the
//     FORWARD transform by N^2.
//   * Parseval under this convention: ||f||^2_{L2(torus)} = L^2 sum |fhat|^2.
// Plans are built once per grid with FFTW_ESTIMATE (deterministic results,
// no planner time). A transformer owns its work buffers; execution is not
// re-entrant on a single instance.
//==============================================================================
#pragma once

#include <fftw3.h>

#include "oldb/grid.hpp"

namespace oldb {

class SpectralTransform {
  public:
    explicit SpectralTransform(const Grid& grid)
        : n_(grid.n_points), size_(grid.size()) {
        buf_ = fftw_alloc_complex(static_cast<std::size_t>(size_));
        out_ = fftw_alloc_complex(static_cast<std::size_t>(size_));
        if (!buf_ || !out_) throw std::bad_alloc();
        backward_ = fftw_plan_dft_2d(n_, n_, buf_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
        forward_ = fftw_plan_dft_2d(n_, n_, buf_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
    }

    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    ~SpectralTransform() {
        fftw_destroy_plan(backward_);
        fftw_destroy_plan(forward_);
        fftw_free(buf_);
        fftw_free(out_);
    }

    int n_points() const { return n_; }

    // Spectral -> physical. Output is the real part; for conjugate-symmetric
    // input the imaginary part is roundoff (checked by validate_state).
    void to_physical(const SpectralScalar& f_hat, PhysicalScalar& f) {
        check_size(f_hat.size());
        for (int i = 0; i < size_; ++i) {
            buf_[i][0] = f_hat[i].real();
            buf_[i][1] = f_hat[i].imag();
        }
        fftw_execute(backward_);
        f.resize(static_cast<std::size_t>(size_));
        for (int i = 0; i < size_; ++i) f[i] = out_[i][0];
    }

    // Variant that also reports the largest imaginary residue (reality check).
    double to_physical_tracked(const SpectralScalar& f_hat, PhysicalScalar& f) {
        check_size(f_hat.size());
        for (int i = 0; i < size_; ++i) {
            buf_[i][0] = f_hat[i].real();
            buf_[i][1] = f_hat[i].imag();
        }
        fftw_execute(backward_);
        f.resize(static_cast<std::size_t>(size_));
        double imax = 0.0;
        for (int i = 0; i < size_; ++i) {
            f[i] = out_[i][0];
            imax = std::max(imax, std::abs(out_[i][1]));
        }
        return imax;
    }

    // Physical -> spectral.
    void to_spectral(const PhysicalScalar& f, SpectralScalar& f_hat) {
        check_size(f.size());
        for (int i = 0; i < size_; ++i) {
            buf_[i][0] = f[i];
            buf_[i][1] = 0.0;
        }
        fftw_execute(forward_);
        f_hat.resize(static_cast<std::size_t>(size_));
        const double scale = 1.0 / static_cast<double>(size_);
        for (int i = 0; i < size_; ++i)
            f_hat[i] = Complex(out_[i][0] * scale, out_[i][1] * scale);
    }

  private:
    void check_size(std::size_t got) const {
        if (got != static_cast<std::size_t>(size_))
            throw std::invalid_argument("SpectralTransform: field size " + std::to_string(got) +
                                        " does not match grid size " + std::to_string(size_));
    }

    int n_;
    int size_;
    fftw_complex* buf_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan backward_{};
    fftw_plan forward_{};
};

} // namespace oldb
