// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file detspace.hpp
 * @brief Slater-determinant bitstring algebra: excitation and de-excitation
 *        operators with fermionic phases, generalized orbital replacements,
 *        excitation enumeration and Full / rank-truncated determinant spaces.
 *
 * Spin orbitals are 0-based and interleaved (2p = spatial p alpha, 2p+1 =
 * spatial p beta). A determinant is the ordered creation string
 * a+_{i1} ... a+_{iN} |vac> with i1 < ... < iN, stored as a bitmask.
 *
 * Operator phases follow second quantization: an excitation mu with holes
 * l1 < ... < lj and particles a1 < ... < aj is the normal-ordered string
 * a+_{a1} ... a+_{aj} a_{lj} ... a_{l1}; each creator or annihilator acting on
 * orbital p contributes (-1)^(number of occupied orbitals below p).
 */

#pragma once

#include "ccwp/common.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace ccwp {

/// Occupation bitmask over at most 64 spin orbitals.
using Det = std::uint64_t;

/// Marker for a Full (untruncated) space in build_space.
inline constexpr int kFullRank = -1;

/// Result of a non-vanishing operator application.
struct PhasedDet {
    int phase = 1;
    Det det = 0;

    bool operator==(const PhasedDet&) const = default;
};

/// Excitation index: holes (reference-occupied) and particles (reference-virtual), both ascending.
struct ExcitationIndex {
    std::vector<int> holes;
    std::vector<int> particles;

    int rank() const { return static_cast<int>(holes.size()); }
    bool operator==(const ExcitationIndex&) const = default;
};

/// Number of set bits.
inline int popcount(Det d) { return __builtin_popcountll(d); }

/// Lowest N spin orbitals occupied. Throws if N > n_spin or n_spin > 64.
Det reference_determinant(int nelec, int n_spin);

/// Excitation rank popcount(det ^ ref) / 2. Throws on particle-number mismatch.
int excitation_rank(Det det, Det ref);

/// X_mu det; empty when a hole is empty or a particle is already occupied.
std::optional<PhasedDet> apply_excitation(const ExcitationIndex& mu, Det det);

/// X_mu^dagger det, the adjoint string a+_{l1} ... a+_{lj} a_{aj} ... a_{a1}.
std::optional<PhasedDet> apply_deexcitation(const ExcitationIndex& mu, Det det);

/**
 * Generalized replacement a+_{t1} ... a+_{tj} a_{fj} ... a_{f1} with ascending
 * @p from and @p to. Identical lists act as the identity on determinants that
 * occupy them; partially overlapping lists throw.
 */
std::optional<PhasedDet> apply_orbital_replacement(const std::vector<int>& from,
                                                   const std::vector<int>& to, Det det);

/**
 * All Sz-conserving excitations of the reference with rank <= max_rank
 * (kFullRank for all ranks), ordered rank-major, then lexicographically by
 * holes, then by particles.
 */
std::vector<ExcitationIndex> enumerate_excitations(int nelec, int n_spin, int max_rank);

/// Ordered N-particle space: dets[0] is the reference, dets[i] = X_{excitations[i-1]} ref.
struct DeterminantSpace {
    int nelec = 0;
    int n_spin = 0;
    int max_rank = 0;  ///< largest excitation rank present
    bool full = false;
    Det reference = 0;
    std::vector<Det> dets;
    std::vector<ExcitationIndex> excitations;
    std::unordered_map<Det, std::size_t> index_of;

    std::size_t size() const { return dets.size(); }
    /// Position of @p d, or npos when absent.
    std::size_t find(Det d) const;
    /// Number of excitations of rank <= q (a prefix of excitations).
    std::size_t excitation_count(int q) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Build a Full (max_rank = kFullRank) or rank-truncated space.
DeterminantSpace build_space(int nelec, int n_spin, int max_rank);

/**
 * Strings of one spin over K spatial orbitals with n electrons, ordered like
 * enumerate_excitations restricted to one spin (rank-major, holes, particles).
 * strings[0] is the reference string.
 */
struct StringSpace {
    int norb = 0;
    int nel = 0;
    std::vector<std::uint32_t> strings;
    std::vector<int> rank;
    std::vector<std::size_t> rank_offset;  ///< strings of rank r are [rank_offset[r], rank_offset[r+1])
    std::unordered_map<std::uint32_t, std::uint32_t> index_of;

    std::size_t size() const { return strings.size(); }
    int max_rank() const { return static_cast<int>(rank_offset.size()) - 2; }
};

StringSpace build_strings(int norb, int nel);

/**
 * One link X_m s_src = sign * s_dst, where m is an excitation string of one
 * spin identified with the index of its image of the reference string.
 */
struct StringLink {
    std::uint32_t other;  ///< source string for target-grouped lists, target for source-grouped lists
    std::uint32_t exc;    ///< excitation string index m
    int sign;
};

/**
 * All non-vanishing actions of one-spin excitation strings (identity
 * included) on the strings of a StringSpace, grouped by target and by source
 * in CSR form. Each group is ordered by ascending excitation rank.
 */
struct StringLinks {
    std::vector<std::size_t> by_target_offset;
    std::vector<StringLink> by_target;
    std::vector<std::size_t> by_source_offset;
    std::vector<StringLink> by_source;
    std::vector<int> ref_sign;  ///< sign of X_m on the reference string, per m
};

StringLinks build_string_links(const StringSpace& s);

}  // namespace ccwp
