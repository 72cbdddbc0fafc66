// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file test_support.hpp
 * @brief Shared fixtures for the test suites: fixture paths, frozen oracle
 *        values, cached models and dense reference systems, and the
 *        exhaustive algebraic checks shared with the acceptance runner.
 */

#pragma once

#include "ccwp/analysis.hpp"
#include "ccwp/manybody.hpp"
#include "ccwp/solver.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace ccwp::test {

/// All shipped fixture names (file stems).
const std::vector<std::string>& fixture_names();

std::string fixture_path(const std::string& name);

/// Frozen oracle values for a fixture.
const nlohmann::json& oracle(const std::string& name);

/// Cached model and ground state, built on first use.
const Model& model(const std::string& name);
const GroundState& ground(const std::string& name);

/// Dense determinant-space view of a fixture (small fixtures only).
struct DenseSystem {
    DeterminantSpace full;
    Mat h;        ///< Hamiltonian over full.dets, core energy included
    Vec weights;  ///< mean-field metric over full.dets
    FciResult fci;
};
const DenseSystem& dense(const std::string& name);

/// Deterministic pseudo-random vector with entries uniform in [-scale, scale].
Vec random_vec(Eigen::Index n, unsigned seed, double scale = 1.0);

/// Result of one exhaustive algebraic check: number of cases and mismatches.
struct CheckResult {
    long cases = 0;
    long failures = 0;
    double max_error = 0.0;
    bool ok() const { return cases > 0 && failures == 0; }
};

/// X_mu X_nu d = X_nu X_mu d with phases for every pair and determinant.
CheckResult check_commutativity(int nelec, int n_spin);
/// <X_mu a, b> = <a, X_mu^dagger b> for all basis pairs and excitations.
CheckResult check_adjointness(int nelec, int n_spin);
/// T^{N+1} x = 0 exactly for random amplitudes on the Full space.
CheckResult check_nilpotency(int nelec, int n_spin, unsigned seed);
/// log(exp(T) ref) = t and exp(T(log phi)) ref = phi to 1e-10.
CheckResult check_exp_log(int nelec, int n_spin, unsigned seed, int trials);
/// Occupied-to-occupied, standard and virtual-to-virtual replacement factorization.
CheckResult check_replacement_factorization(int nelec, int n_spin);

/**
 * J delta against central differences (h = 1e-5) of the CC residual at the
 * converged rank-q solution of a fixture (q = kFullRank: the Full-CC zero),
 * with J shifted by the CC energy there. max_error is the largest relative
 * error over @p directions random directions; a case fails above 1e-6.
 */
CheckResult check_jacobian_fd(const std::string& name, int q, int directions);

}  // namespace ccwp::test
