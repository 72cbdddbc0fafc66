// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file scf.hpp
 * @brief Restricted closed-shell Hartree-Fock in an orthonormal orbital basis
 *        and the molecular-orbital integral transformation.
 */

#pragma once

#include "ccwp/fcidump.hpp"

#include <optional>
#include <utility>

namespace ccwp {

struct ScfOptions {
    int max_iter = 200;
    double conv_tol = 1e-10;  ///< max-abs density change
    int diis_depth = 8;
    double damping = 0.3;     ///< weight of the previous density after an energy rise
    /// Leave saddle points along negative modes of the real RHF orbital Hessian.
    bool follow_instabilities = true;
    std::optional<Mat> initial_density;  ///< default: core-Hamiltonian guess
};

struct ScfState {
    Mat coeffs;             ///< K x K orthogonal, columns are orbitals
    Vec orbital_energies;   ///< ascending
    Mat density;            ///< D = 2 C_occ C_occ^T
    double hf_energy = 0.0; ///< includes the core energy
    bool converged = false;
    int iterations = 0;
    int stability_restarts = 0;  ///< instabilities followed before the final solution
};

/**
 * Lowest eigenvalue and eigenvector (occupied-major, index i * nvir + a) of
 * the real closed-shell orbital Hessian
 * (e_a - e_i) d_ij d_ab + 4 (ia|jb) - (ij|ab) - (ib|ja) over MO integrals.
 */
std::pair<double, Vec> rhf_stability(const DenseIntegrals& mo, const Vec& orbital_energies, int nocc);

/// F_pq = h_pq + sum_rs D_rs [(pq|rs) - 1/2 (pr|qs)].
Mat build_fock_matrix(const Mat& density, const DenseIntegrals& ints);
Mat build_fock_matrix(const Mat& density, const IntegralTable& table);

/// Closed-shell energy core + 1/2 sum D (h + F).
double hf_energy(const Mat& density, const DenseIntegrals& ints);

/**
 * RHF with DIIS. Throws for odd electron counts, N/2 > K or a degenerate
 * HOMO/LUMO pair at convergence; non-convergence is flagged in the state.
 */
ScfState run_scf(const IntegralTable& table, const ScfOptions& opts = {});

/// Transform integrals to the orbitals in the columns of @p coeffs.
IntegralTable mo_transform(const IntegralTable& table, const Mat& coeffs);
DenseIntegrals mo_transform(const DenseIntegrals& ints, const Mat& coeffs);

}  // namespace ccwp
