// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file linalg.hpp
 * @brief Iterative linear-algebra kernels: DIIS extrapolation, a Lanczos
 *        extremal eigensolver with full reorthogonalization, extremal singular
 *        values of matrix-free operators and a block Davidson eigensolver.
 *
 * All iterative methods start from deterministic vectors so results do not
 * depend on the run or on the thread count.
 */

#pragma once

#include "ccwp/common.hpp"

#include <deque>
#include <functional>

namespace ccwp {

/// y = A x for a matrix-free operator.
using LinearMap = std::function<void(const Vec& x, Vec& y)>;

/// Pulay DIIS over (vector, error) pairs with a bounded history.
class Diis {
public:
    explicit Diis(int depth = 8, double max_condition = 1e12) : depth_(depth), max_cond_(max_condition) {}

    /// Add a pair and return the extrapolated vector.
    Vec push(const Vec& x, const Vec& err);
    void clear() {
        xs_.clear();
        errs_.clear();
    }
    std::size_t size() const { return xs_.size(); }

private:
    int depth_;
    double max_cond_;
    std::deque<Vec> xs_;
    std::deque<Vec> errs_;
};

enum class Extremum { Smallest, Largest, Magnitude };

struct EigenOptions {
    double tol = 1e-10;       ///< Ritz residual tolerance relative to max(1, |theta|)
    int max_basis = 160;      ///< Lanczos vectors kept before a restart
    int max_restarts = 40;
    int dense_threshold = 400;  ///< dimensions up to this are solved densely
};

struct EigenPair {
    double value = 0.0;
    Vec vector;
    bool converged = false;
};

/// Extremal eigenpair of a symmetric operator of dimension n.
EigenPair extreme_eigenpair(const LinearMap& op, Eigen::Index n, Extremum which, const EigenOptions& opts = {});

/// Largest singular value of A (n_in -> n_out) given A and its transpose.
double sigma_max(const LinearMap& a, const LinearMap& at, Eigen::Index n_in, Eigen::Index n_out,
                 const EigenOptions& opts = {});

/// Smallest singular value of a square operator (n -> n).
double sigma_min(const LinearMap& a, const LinearMap& at, Eigen::Index n, const EigenOptions& opts = {});

/// Largest singular value of a dense matrix.
double sigma_max(const Mat& a);
/// Smallest singular value of a dense square matrix.
double sigma_min(const Mat& a);

struct DavidsonResult {
    Vec values;
    Mat vectors;
    int iterations = 0;
    bool converged = false;
};

/// Lowest @p nroots eigenpairs by block Davidson with diagonal preconditioning.
DavidsonResult davidson(const LinearMap& op, const Vec& diagonal, int nroots, double tol = 1e-10,
                        int max_iter = 300, int max_subspace = 48);

/// Dense matrix of a linear map, column by column.
Mat assemble(const LinearMap& op, Eigen::Index n_in, Eigen::Index n_out);

}  // namespace ccwp
