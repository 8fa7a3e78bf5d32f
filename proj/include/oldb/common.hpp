//==============================================================================
// common.hpp
// Shared scalar types, deterministic reductions, and small utilities.
//==============================================================================
#pragma once

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace oldb {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Pairwise (cascade) summation over a fixed ordering. All cross-mode
// reductions in the library go through this so that results do not depend
// on any parallel schedule.
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(std::span<const double>(v.data(), v.size()));
}

// Worker cap from OLDB_THREADS; absence (or garbage) means auto.
inline int worker_count() {
    if (const char* env = std::getenv("OLDB_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && n > 0) return static_cast<int>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

struct BlowUpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace oldb
