// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace fplab {

// Execution knobs for trial loops. Results are identical for every thread
// count: each trial derives its own rng substream from the trial index,
// workers fill disjoint slots of a trial-indexed buffer, and reductions
// run in trial order on the calling thread.
struct RunContext {
    unsigned threads = 1;

    unsigned effective_threads() const { return threads == 0 ? 1u : threads; }
};

// Evaluates fn(trial) for trial in [0, n) and returns the results indexed
// by trial. Work is split into contiguous chunks; the first exception
// thrown by a worker is rethrown on the caller.
template <typename T, typename F>
std::vector<T> collect_trials(std::size_t n, const RunContext& ctx, F&& fn) {
    std::vector<T> out(n);
    std::size_t nthreads = ctx.effective_threads();
    if (nthreads > n) {
        nthreads = n == 0 ? 1 : n;
    }

    if (nthreads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = fn(i);
        }
        return out;
    }

    const std::size_t chunk = (n + nthreads - 1) / nthreads;
    std::vector<std::exception_ptr> errors(nthreads);
    std::vector<std::thread> workers;
    workers.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        workers.emplace_back([&, t]() {
            const std::size_t lo = t * chunk;
            const std::size_t hi = (t + 1) * chunk < n ? (t + 1) * chunk : n;
            try {
                for (std::size_t i = lo; i < hi; ++i) {
                    out[i] = fn(i);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) {
        w.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

}  // namespace fplab
