// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file model.hpp
 * @brief One molecule prepared for the solvers: RHF orbitals, MO integrals,
 *        the Full determinant space, the string grid with its Hamiltonian and
 *        cluster engine, and the mean-field metric on the grid.
 *
 * Grid helpers below express the CC residual and Jacobian in grid amplitude
 * coordinates (see ClusterEngine). They differ from determinant-space
 * coordinates by a signed permutation (GridMap), which leaves every norm,
 * singular value and energy unchanged.
 */

#pragma once

#include "ccwp/cluster.hpp"
#include "ccwp/linalg.hpp"
#include "ccwp/manybody.hpp"
#include "ccwp/scf.hpp"

#include <memory>

namespace ccwp {

struct Model {
    IntegralTable ao;        ///< input integrals
    ScfState scf;
    DenseIntegrals mo;       ///< integrals over canonical RHF orbitals
    int norb = 0;
    int nelec = 0;
    DeterminantSpace full;   ///< Full space in determinant-space order
    StringSpace strings;     ///< alpha (= beta) strings
    GridMap map;
    std::unique_ptr<GridHamiltonian> ham;
    std::unique_ptr<ClusterEngine> engine;
    Vec weights;             ///< mean-field metric on the grid, weights[0] = 1

    std::size_t dim() const { return engine->dim(); }
    /// y = (H - shift) x on the grid.
    void sigma(const Vec& x, Vec& y, double shift = 0.0) const;
};

/// Run RHF, transform to MO integrals and build the Full-space machinery.
Model build_model(const IntegralTable& ao, const ScfOptions& scf_opts = {});

/// Ascending grid positions of non-reference determinants with rank <= q (q < 0: all).
std::vector<std::uint32_t> grid_indices(const Model& m, int q);

struct GridResidual {
    double energy = 0.0;  ///< <ref, exp(-T) H exp(T) ref>
    Vec residual;         ///< grid-sized; zero at the reference and above rank q
};

/// CC energy and residual for grid amplitudes @p tau, projected on ranks <= q.
GridResidual grid_residual(const Model& m, const Vec& tau, int q = -1);

/**
 * The CC Jacobian P exp(-T) (H - E) exp(T) P on the grid positions @p idx,
 * with its transpose, in compressed coordinates.
 */
class GridJacobian {
public:
    GridJacobian(const Model& m, const Vec& tau, double e_shift, std::vector<std::uint32_t> idx);

    Eigen::Index size() const { return static_cast<Eigen::Index>(idx_.size()); }
    const std::vector<std::uint32_t>& indices() const { return idx_; }
    void apply(const Vec& x, Vec& y) const;
    void apply_transpose(const Vec& x, Vec& y) const;

private:
    void chain(const Vec& x, Vec& y, bool transpose) const;

    const Model& m_;
    double e_;
    std::vector<std::uint32_t> idx_;
    Vec plus_;   ///< amplitudes of exp(T) - I
    Vec minus_;  ///< amplitudes of exp(-T) - I
};

/// exp(+-T) x or exp(+-T^dagger) x from precomputed amplitudes of exp(+-T) - I.
Vec apply_exp(const Model& m, const Vec& exp_amps, const Vec& x, bool adjoint = false);

}  // namespace ccwp
