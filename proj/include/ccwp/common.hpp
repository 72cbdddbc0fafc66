// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file common.hpp
 * @brief Shared numeric aliases, the library exception type and the
 *        deterministic parallel loop used by the heavy kernels.
 */

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace ccwp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Error raised for invalid input or violated numerical preconditions.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Number of worker threads used by parallel_for (always >= 1).
int thread_count();

/// Set the worker count; values < 1 select the hardware concurrency.
void set_thread_count(int n);

/// Initialise the worker count from the CCWP_THREADS environment variable.
void init_threads_from_env();

namespace detail {
void run_parallel(std::size_t n, void (*fn)(void*, std::size_t, std::size_t), void* ctx);
}

/**
 * Split [0, n) into contiguous chunks and run body(begin, end) on each chunk.
 *
 * Every index is visited by exactly one chunk, so kernels that write each
 * output element from a single index produce bit-identical results for any
 * thread count.
 */
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    auto tramp = [](void* ctx, std::size_t b, std::size_t e) {
        (*static_cast<std::remove_reference_t<Body>*>(ctx))(b, e);
    };
    detail::run_parallel(n, tramp, &body);
}

}  // namespace ccwp
