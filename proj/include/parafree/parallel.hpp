#pragma once

/// Dual-path execution helpers. Hot kernels come in a serial flavor and an
/// OpenMP flavor selected by par::Mode; the serial path is the reference the
/// parallel path is tested against, so both must stay semantically identical.

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace parafree::par {

enum class Mode { Serial, Omp };

/// Thread budget for the OpenMP path: the runtime default capped by the
/// PARAFREE_THREADS environment variable. 1 when built without OpenMP.
inline int thread_count() {
#ifdef _OPENMP
    int threads = omp_get_max_threads();
    if (const char* cap = std::getenv("PARAFREE_THREADS")) {
        const int want = std::atoi(cap);
        if (want > 0 && want < threads) threads = want;
    }
    return threads;
#else
    return 1;
#endif
}

/// Preferred mode for this build: Omp when compiled with OpenMP support.
inline Mode default_mode() {
#ifdef _OPENMP
    return Mode::Omp;
#else
    return Mode::Serial;
#endif
}

inline Mode mode_from_name(const std::string& name) {
    if (name == "serial") return Mode::Serial;
    if (name == "omp") return Mode::Omp;
    throw std::invalid_argument("unknown execution mode '" + name +
                                "' (expected 'serial' or 'omp')");
}

inline const char* mode_name(Mode mode) {
    return mode == Mode::Omp ? "omp" : "serial";
}

template <class Body>
void for_each_serial(std::size_t count, Body&& body) {
    for (std::size_t i = 0; i < count; ++i) body(i);
}

template <class Body>
void for_each_omp(std::size_t count, Body&& body) {
#ifdef _OPENMP
    // Exceptions may not unwind out of the parallel region; hold the first
    // one and rethrow it afterwards.
    std::exception_ptr error;
    std::mutex error_guard;
    const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_guard);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
#else
    for_each_serial(count, body);
#endif
}

/// Runs body(i) for i in [0, count) on the selected path. Bodies must write
/// disjoint outputs; no ordering is guaranteed on the OpenMP path.
template <class Body>
void for_each(Mode mode, std::size_t count, Body&& body) {
    if (mode == Mode::Omp) {
        for_each_omp(count, body);
    } else {
        for_each_serial(count, body);
    }
}

inline double max_abs_serial(std::span<const double> values) {
    double best = 0.0;
    for (const double v : values) best = std::max(best, std::abs(v));
    return best;
}

inline double max_abs_omp(std::span<const double> values) {
#ifdef _OPENMP
    double best = 0.0;
    const long long n = static_cast<long long>(values.size());
#pragma omp parallel for schedule(static) reduction(max : best) num_threads(thread_count())
    for (long long i = 0; i < n; ++i) {
        best = std::max(best, std::abs(values[static_cast<std::size_t>(i)]));
    }
    return best;
#else
    return max_abs_serial(values);
#endif
}

/// Max-abs reduction. Both paths return bitwise-identical results (max is
/// order independent), which the parallel tests rely on.
inline double max_abs(Mode mode, std::span<const double> values) {
    return mode == Mode::Omp ? max_abs_omp(values) : max_abs_serial(values);
}

inline double sum_serial(std::span<const double> values) {
    double total = 0.0;
    for (const double v : values) total += v;
    return total;
}

inline double sum_omp(std::span<const double> values) {
#ifdef _OPENMP
    double total = 0.0;
    const long long n = static_cast<long long>(values.size());
#pragma omp parallel for schedule(static) reduction(+ : total) num_threads(thread_count())
    for (long long i = 0; i < n; ++i) {
        total += values[static_cast<std::size_t>(i)];
    }
    return total;
#else
    return sum_serial(values);
#endif
}

/// Sum reduction. The OpenMP path may reassociate, so results agree with the
/// serial path only up to roundoff.
inline double sum(Mode mode, std::span<const double> values) {
    return mode == Mode::Omp ? sum_omp(values) : sum_serial(values);
}

}  // namespace parafree::par
