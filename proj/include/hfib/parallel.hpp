#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hfib {

namespace detail {
inline std::atomic<unsigned>& thread_setting()
{
    static std::atomic<unsigned> n{1};
    return n;
}
}  // namespace detail

/// Number of worker threads used by parallel_for. Results never depend on it.
inline unsigned thread_count() { return detail::thread_setting().load(); }
inline void set_thread_count(unsigned n) { detail::thread_setting().store(std::max(1u, n)); }

/**
 * Run f(i) for i in [0, n). Callers write results into slot i of a
 * pre-sized vector, so aggregation order is fixed regardless of schedule.
 * The first exception (by index) is rethrown after all workers finish.
 */
template <class F>
void parallel_for(std::size_t n, F&& f)
{
    unsigned workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
    {
        pool.emplace_back([&]() {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    f(i);
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

}  // namespace hfib
