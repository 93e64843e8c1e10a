// Thin process-wide wrapper around FFTW3 complex transforms.
//
// Plans are created once per (size, rank, direction) with
// FFTW_ESTIMATE | FFTW_UNALIGNED and cached; execution goes through
// fftw_execute_dft on the caller's buffer (in place), which is
// thread-safe. Plan creation is guarded by a mutex since the FFTW
// planner is not.

#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace trigal::fft {

namespace detail {

struct PlanCache {
    std::mutex mutex;
    std::map<std::tuple<int, int, int>, fftw_plan> plans;  // (rank, n, sign)

    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }

    fftw_plan get(int rank, int n, int sign) {
        std::scoped_lock lock(mutex);
        auto key = std::make_tuple(rank, n, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        std::vector<std::complex<double>> scratch(rank == 1 ? n : std::size_t(n) * n);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = rank == 1
            ? fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
            : fftw_plan_dft_2d(n, n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw std::runtime_error("fftw plan creation failed");
        plans.emplace(key, plan);
        return plan;
    }
};

inline PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace detail

// In-place unnormalized DFT over an n x n row-major array.
// sign = FFTW_FORWARD (-1) computes sum x(s) e^{-2pi i p.s/n}.
inline void transform_2d(int n, std::complex<double>* data, int sign) {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(detail::cache().get(2, n, sign), buf, buf);
}

inline void transform_1d(int n, std::complex<double>* data, int sign) {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(detail::cache().get(1, n, sign), buf, buf);
}

}  // namespace trigal::fft
