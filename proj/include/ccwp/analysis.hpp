// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file analysis.hpp
 * @brief Well-posedness constants of the coupled-cluster equations: the local
 *        monotonicity constant, the continuous inf-sup constant, Jacobian
 *        inverse norms, the structure terms of a rank-truncated space and the
 *        discrete inf-sup estimate.
 *
 * Every norm is taken in the mean-field metric F with diagonal weights w on
 * the Full space. An operator A viewed as F -> F has norm
 * sigma_max(W^{1/2} A W^{-1/2}); viewed as F -> L2 it has norm
 * sigma_max(A W^{-1/2}); as F -> F^{-1} it is sigma(W^{-1/2} A W^{-1/2}).
 * All computations act on the string grid of a Model; grid and determinant
 * coordinates differ by a signed permutation, which leaves every value below
 * unchanged.
 */

#pragma once

#include "ccwp/model.hpp"

#include <optional>

namespace ccwp {

/// Lowest FCI state with its cluster amplitudes.
struct GroundState {
    double energy = 0.0;  ///< E*, including the core energy
    double gap = 0.0;
    Vec psi_grid;         ///< normalized, positive reference coefficient
    Vec tau;              ///< grid amplitudes with exp(T) ref = psi / psi[0]
    double overlap = 0.0; ///< (Psi0, Psi*)
};

/// FCI solve followed by the cluster logarithm of the ground state.
GroundState ground_state(const Model& m);

/// (Psi0, Psi*) for coefficient vectors in the same orthonormal basis.
double reference_overlap(const Vec& psi_star, const Vec& ref);

/**
 * Lambda_0: smallest eigenvalue of H - E* on the L2-orthogonal complement of
 * Psi*, as a generalized eigenproblem in the F-metric.
 */
double coercivity_constant(const Model& m, const GroundState& gs);

struct MonotonicityTerms {
    double lambda0 = 0.0;
    double h_norm = 0.0;     ///< ||H - E*||_{F -> F^-1}
    double t_norm = 0.0;     ///< ||T - T^dagger||_{F -> F}
    double remainder = 0.0;  ///< ||H - E*|| (e^x - 1 - x), x = ||T|| + ||T^dagger||, reported only
    double gamma = 0.0;      ///< lambda0 - h_norm * t_norm
};

/**
 * Local monotonicity constant at amplitudes @p tau (any grid amplitudes,
 * including zero). The remainder costs two further norms and is evaluated
 * only on request.
 */
MonotonicityTerms monotonicity_constant(const Model& m, const GroundState& gs, const Vec& tau, double lambda0,
                                        bool with_remainder = false);

struct InfSupTerms {
    double lambda_star = 0.0;  ///< inf-sup constant of H - E* on the complement of Psi*
    double minus_norm = 0.0;   ///< ||P0perp exp(-T)||_{F -> F}
    double dagger_norm = 0.0;  ///< ||exp(T^dagger)||_{F -> F}
    double beta = 0.0;         ///< minus_norm * dagger_norm
    double value = 0.0;        ///< lambda_star / beta
};

/// Continuous inf-sup constant Lambda*/beta at amplitudes @p tau.
InfSupTerms continuous_infsup_constant(const Model& m, const Vec& tau, double lambda0);

/// sigma_min(W^{-1/2} J W^{-1/2}), the F^{-1} -> F norm of J^{-1} inverted.
double jacobian_inverse_norm(const Mat& jacobian, const Vec& weights);

/**
 * The same quantity for the grid Jacobian at @p tau, shifted by @p e_shift,
 * restricted to non-reference ranks <= q (q < 0: the whole space).
 */
double jacobian_inverse_norm(const Model& m, const Vec& tau, double e_shift, int q);

/// Lambda_min = sum_{j=1}^{q+1} (lambda_{N+j} - lambda_{N-j+1}) over spin-orbital energies.
double lambda_min_formula(const Vec& orbital_energies, int nelec, int q);

/// Grid amplitudes truncated to ranks <= q.
Vec truncate_amplitudes(const Model& m, const Vec& tau, int q);

struct StructureTerms {
    int rank = 0;
    double lambda_min = 0.0;     ///< smallest weight outside the rank-q space
    double gamma_gs = 0.0;       ///< Gamma*_GS
    double beta_k = 0.0;         ///< ||(I - P) exp(T) P exp(-T) P||_{F -> F}, T truncated
    double coupling_norm = 0.0;  ///< ||(I - P) U P||_{F -> L2}
    double smallness_rhs = 0.0;  ///< sqrt(lambda_min) gamma_gs / beta_k
    bool smallness_ok = false;   ///< coupling_norm < smallness_rhs
};

/// Structure terms of the rank-q space; requires 1 <= q < N.
StructureTerms structure_b2_terms(const Model& m, const GroundState& gs, int q, double gamma_gs);

struct DiscreteInfSup {
    double dagger_norm = 0.0;   ///< ||P exp(T^dagger) P||_{F -> F}
    double minus_norm = 0.0;    ///< ||P0perp P exp(-T) P||_{F -> F}
    double r3_reference = 0.0;  ///< ||(H - E*) Psi0||_{F^-1}
    double r3_truncated = 0.0;  ///< ||(H - E*) exp(T) Psi0||_{F^-1}
    double value = 0.0;         ///< gamma_inf-sup
};

/**
 * gamma_inf-sup = (gamma_gs - coupling beta_k / sqrt(lambda_min) - r3_truncated)
 *                 / (dagger_norm minus_norm), with T truncated to rank q.
 */
DiscreteInfSup discrete_infsup_gamma(const Model& m, const GroundState& gs, const StructureTerms& st);

/// One row of the constants tables. Absent optional fields are not defined for the row.
struct ConstantsReport {
    std::string molecule;
    std::string basis;
    int rank = kFullRank;
    double e_hf = 0.0;
    double e_fci = 0.0;
    double e_cc = 0.0;
    double overlap = 0.0;
    double gamma_monotone = 0.0;
    double infsup_continuous = 0.0;
    double jac_inv_norm = 0.0;
    std::optional<double> lambda_min;
    std::optional<double> gamma_gs;
    std::optional<double> beta_k;
    std::optional<double> coupling_norm;
    std::optional<bool> smallness_ok;
    std::optional<double> smallness_rhs;
    std::optional<double> gamma_discrete;
    std::optional<double> apost_bound;
    bool converged = false;
    int iterations = 0;

    bool operator==(const ConstantsReport&) const = default;
};

}  // namespace ccwp
