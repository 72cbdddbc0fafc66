// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file solver.hpp
 * @brief FCI ground state, quasi-Newton CC solution with DIIS, and the
 *        residual-based a-posteriori error bound.
 */

#pragma once

#include "ccwp/model.hpp"

#include <functional>

namespace ccwp {

struct FciResult {
    double energy = 0.0;
    Vec psi;         ///< determinant-space order, unit norm, psi[0] > 0
    Vec psi_grid;    ///< grid order (model-based solve only)
    double gap = 0.0;  ///< E_2 - E_1 (infinity for a one-dimensional space)
};

/// Lowest eigenpair of a dense Hamiltonian over a Full space. Throws when the gap is below 1e-8.
FciResult solve_fci(const DeterminantSpace& space, const Mat& h);

/// Lowest eigenpair on the model's grid (dense up to 2000 determinants, Davidson beyond).
FciResult solve_fci(const Model& m);

struct CcOptions {
    double tol = 1e-10;      ///< max-abs residual
    int max_iter = 300;
    double level_shift = 0.0;
    int diis_depth = 8;
    double divergence = 1e3; ///< abort when the amplitude norm exceeds this
};

struct CcResult {
    Vec t;              ///< amplitudes aligned with the rank-truncated excitations
    Vec tau;            ///< grid amplitudes (model-based solve only)
    double energy = 0.0;
    bool converged = false;
    bool diverged = false;
    int iterations = 0;
    double residual_norm = 0.0;  ///< max-abs residual at the returned amplitudes
};

/// Residual callback: returns the energy and writes the residual for amplitudes t.
using ResidualFunction = std::function<double(const Vec& t, Vec& r)>;

/**
 * Quasi-Newton iteration t <- t - r / (w + level_shift) with DIIS over
 * (amplitude, preconditioned residual) pairs. Entries of @p weights must be
 * positive wherever the residual can be non-zero.
 */
CcResult solve_cc_core(const ResidualFunction& residual, const Vec& weights, Vec t0, const CcOptions& opts);

/**
 * CC solve with amplitudes over @p amp_space (a prefix of the Full @p host)
 * and a dense Hamiltonian; @p host_weights is the metric over host.dets.
 */
CcResult solve_cc(const DeterminantSpace& amp_space, const DeterminantSpace& host, const Mat& h,
                  const Vec& host_weights, const CcOptions& opts = {}, const Vec* t0 = nullptr);

/// CC solve of rank q (kFullRank for Full-CC) on the model's grid.
CcResult solve_cc(const Model& m, int q, const CcOptions& opts = {}, const Vec* tau0 = nullptr);

/**
 * 2 sigma_min(J)^{-1} ||f(t)||_{F^{-1}} for the Full CC function f and its
 * Jacobian J at the Full-padded amplitudes @p t (host order) with shift e_ref.
 * Throws when sigma_min(J) <= 1e-10.
 */
double aposteriori_bound(const DeterminantSpace& host, const Vec& t, const Mat& h, const Vec& host_weights,
                         double e_ref);

/// Grid version of aposteriori_bound for padded grid amplitudes @p tau.
double aposteriori_bound(const Model& m, const Vec& tau, double e_ref);

}  // namespace ccwp
