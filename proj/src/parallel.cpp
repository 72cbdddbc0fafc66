// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccwp/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace ccwp {

namespace {
std::atomic<int> g_threads{0};

int hardware_threads() {
    unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : static_cast<int>(h);
}
}  // namespace

int thread_count() {
    int n = g_threads.load();
    return n < 1 ? hardware_threads() : n;
}

void set_thread_count(int n) { g_threads.store(n < 1 ? hardware_threads() : n); }

void init_threads_from_env() {
    if (const char* env = std::getenv("CCWP_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) set_thread_count(static_cast<int>(v));
    }
}

namespace detail {

void run_parallel(std::size_t n, void (*fn)(void*, std::size_t, std::size_t), void* ctx) {
    if (n == 0) return;
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
    if (workers <= 1) {
        fn(ctx, 0, n);
        return;
    }
    // Interleaved small chunks balance the uneven row costs of the kernels.
    std::size_t chunk = std::max<std::size_t>(1, n / (workers * 8));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t b = next.fetch_add(chunk);
            if (b >= n) break;
            fn(ctx, b, std::min(n, b + chunk));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

}  // namespace detail
}  // namespace ccwp
