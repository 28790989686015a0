#pragma once

// OpenMP-backed scan kernels used by the exhaustive class enumerations, with
// serial reference implementations kept side by side. Tests cross-check the
// two; bench/ times them against each other. Parallel results are bit-equal
// to serial ones: first-match scans always return the minimal matching index
// and element maps fill index-ordered slots.

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <limits>
#include <optional>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace pclass::par {

namespace detail {
inline std::atomic<int> serial_override{-1};
}

// parallelism is on unless forced off (env PCLASS_SERIAL=1 or force_serial)
inline bool parallel_enabled() {
    int v = detail::serial_override.load(std::memory_order_relaxed);
    if (v == -1) {
        const char* e = std::getenv("PCLASS_SERIAL");
        v = (e && e[0] == '1') ? 1 : 0;
        detail::serial_override.store(v, std::memory_order_relaxed);
    }
    return v == 0;
}

inline void force_serial(bool on) {
    detail::serial_override.store(on ? 1 : 0, std::memory_order_relaxed);
}

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

template <typename Pred>
std::optional<std::size_t> find_first_serial(std::size_t n, Pred&& pred) {
    for (std::size_t i = 0; i < n; ++i) {
        if (pred(i)) return i;
    }
    return std::nullopt;
}

// minimal index i < n with pred(i), scanned in parallel
template <typename Pred>
std::optional<std::size_t> find_first(std::size_t n, Pred&& pred) {
#if defined(_OPENMP)
    if (parallel_enabled() && n > 64) {
        std::atomic<std::size_t> best(npos);
        std::exception_ptr err = nullptr;
#pragma omp parallel
        {
#pragma omp for schedule(dynamic, 16)
            for (long long ii = 0; ii < (long long)n; ++ii) {
                std::size_t i = (std::size_t)ii;
                if (i >= best.load(std::memory_order_relaxed)) continue;
                bool hit = false;
                try {
                    hit = pred(i);
                } catch (...) {
#pragma omp critical(pclass_par_err)
                    {
                        if (!err) err = std::current_exception();
                    }
                    continue;
                }
                if (hit) {
                    std::size_t cur = best.load(std::memory_order_relaxed);
                    while (i < cur && !best.compare_exchange_weak(cur, i)) {
                    }
                }
            }
        }
        if (err) std::rethrow_exception(err);
        std::size_t b = best.load();
        if (b == npos) return std::nullopt;
        return b;
    }
#endif
    return find_first_serial(n, pred);
}

template <typename Fn>
void for_each_index_serial(std::size_t n, Fn&& fn) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

// fn(i) for all i < n; fn must write only to per-index slots
template <typename Fn>
void for_each_index(std::size_t n, Fn&& fn) {
#if defined(_OPENMP)
    if (parallel_enabled() && n > 64) {
        std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic, 16)
        for (long long ii = 0; ii < (long long)n; ++ii) {
            try {
                fn((std::size_t)ii);
            } catch (...) {
#pragma omp critical(pclass_par_err2)
                {
                    if (!err) err = std::current_exception();
                }
            }
        }
        if (err) std::rethrow_exception(err);
        return;
    }
#endif
    for_each_index_serial(n, fn);
}

} // namespace pclass::par
