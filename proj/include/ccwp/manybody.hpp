// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file manybody.hpp
 * @brief N-particle operators on determinant spaces: the Hamiltonian (dense
 *        Slater-Condon matrices and a matrix-free alpha/beta string action),
 *        the shifted mean-field metric, the fluctuation potential, weighted
 *        operator norms and coordinate projections.
 */

#pragma once

#include "ccwp/detspace.hpp"
#include "ccwp/fcidump.hpp"

#include <Eigen/SparseCore>

namespace ccwp {

/// Diagonal mean-field metric; weights[0] = 1 for the reference.
struct MeanFieldMetric {
    Vec weights;
};

/// Dense H_ij = <det_i|H|det_j> + core_energy delta_ij via Slater-Condon rules.
Mat hamiltonian_matrix(const DeterminantSpace& space, const SpinIntegralTable& ints);

/// Sum of spatial orbital energies over the occupied spin orbitals of @p d.
double determinant_orbital_sum(Det d, const Vec& orbital_energies);

/**
 * Weights sum_{p in det} lambda_p - sum_{p in ref} lambda_p, and 1 at the
 * reference. @p orbital_energies are spatial and ascending. Throws on a
 * non-positive weight.
 */
MeanFieldMetric mean_field_metric(const DeterminantSpace& space, const Vec& orbital_energies);

/// U = H - diag(sum lambda_p + c) with c chosen so that U vanishes on the reference diagonal.
Mat fluctuation_matrix(const DeterminantSpace& space, const SpinIntegralTable& ints, const Vec& orbital_energies);

/**
 * Largest singular value of W_out^{1/2} A W_in^{-1/2}. A null weight pointer
 * selects the Euclidean metric. Throws on non-positive weights.
 */
double weighted_operator_norm(const Mat& a, const Vec* w_in, const Vec* w_out);

/**
 * P A P with P the coordinate projector onto the leading block of @p space
 * occupied by @p sub. Throws when @p sub is not a prefix of @p space.
 */
Mat project_subspace(const Mat& a, const DeterminantSpace& sub, const DeterminantSpace& space);

/**
 * Matrix-free Hamiltonian on the alpha x beta string grid. A grid vector has
 * entry ia * ns + ib for the determinant a+(alpha string ia) a+(beta string ib)
 * |vac> with creators in ascending orbital order within each spin.
 */
class GridHamiltonian {
public:
    GridHamiltonian(const DenseIntegrals& ints, const StringSpace& strings);

    std::size_t dim() const { return ns_ * ns_; }
    /// y = H x (including the core energy).
    void apply(const Vec& x, Vec& y) const;
    const Vec& diagonal() const { return diag_; }
    /// Same-spin string Hamiltonian (one-electron plus same-spin two-electron part).
    const Eigen::SparseMatrix<double, Eigen::RowMajor>& same_spin() const { return hs_; }

private:
    struct Single {
        std::uint32_t pq;
        std::uint32_t src;
        int sign;
    };
    int norb_;
    std::size_t ns_;
    double core_;
    Eigen::SparseMatrix<double, Eigen::RowMajor> hs_;
    std::vector<std::size_t> single_off_;
    std::vector<Single> singles_;  ///< grouped by target string, including p == q
    Mat eri_;                      ///< (pq|rs) as K^2 x K^2
    Vec diag_;
};

}  // namespace ccwp
