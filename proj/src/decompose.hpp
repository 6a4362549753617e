#pragma once

#include <optional>
#include <utility>

#include "mconv.hpp"
#include "squares.hpp"

namespace magicsq {

/*
 * Birkhoff-von Neumann (interior size 1)
 */

struct WeightedPermutation {
    double weight;
    Permutation perm;
};

// Greedy decomposition of a doubly stochastic matrix: repeatedly take the
// lexicographically smallest perfect matching on the positive support and
// subtract the minimal matched entry. At most (n-1)^2 + 1 terms.
std::vector<WeightedPermutation> bvn_decompose(const QuantumMagicSquare& d, const Tolerances& tol = {});

/*
 * Semiclassical verification and decision
 */

struct SemiclassicalCheck {
    bool valid = false;
    bool povm_ok = false;
    double residual = 0.0;     // max_ij ||A_ij - sum_{pi(j)=i} Q_pi||_F
    double sum_residual = 0.0; // ||sum Q_pi - I||_F
};

SemiclassicalCheck verify_semiclassical(const QuantumMagicSquare& a, const SemiclassicalDecomposition& terms,
                                        const Tolerances& tol = {});

struct RankOneCertificate {
    LatinSquare latin;
    std::vector<CVector> basis;
};

struct RankOneTestResult {
    bool is_semiclassical = false;
    std::optional<RankOneCertificate> certificate;
    std::string reason; // which step rejected, empty on success
};

// Exact decision for rank-one squares of interior size n: membership in the
// easy-quantum-Latin-square set, with a reconstructing (Latin square, basis)
// certificate on success. Steps: pairwise commutation, orthonormality of the
// row-one factors, and Latin-square labeling of all cells.
RankOneTestResult rank_one_semiclassical_test(const QuantumMagicSquare& a, const Tolerances& tol = {});

enum class MembershipStatus { feasible, likely_infeasible, undetermined };

struct MembershipVerdict {
    MembershipStatus status = MembershipStatus::undetermined;
    std::optional<SemiclassicalDecomposition> certificate;
    double residual = 0.0; // ||A - sum_pi P_pi (x) Q_pi||_F at the best PSD iterate
    double sum_residual = 0.0;
    long iterations = 0;
};

// Dykstra-corrected alternating projections between the affine set carved by
// the reconstruction constraints and the product of PSD cones, on the full
// tuple (Q_pi). Deterministic; initial point Q_pi = I/n!. Infeasibility is
// only ever reported as "likely": there is no dual certificate.
MembershipVerdict semiclassical_membership(const QuantumMagicSquare& a, long max_iter = 50000,
                                           double tol_feas = -1.0, bool allow_large = false,
                                           const Tolerances& tol = {});

/*
 * Purification
 */

// Latin square whose symbol-1 cells sit exactly where pi(j) = i; the other
// symbols are filled in canonically (per-symbol lexicographic matchings).
LatinSquare latin_square_from_permutation(const Permutation& pi);

// Constructive matrix-convex purification: writes the square reconstructed
// from `terms` as sum V* B V over easy quantum Latin square sources, one term
// per (permutation, eigen-direction of Q_pi). Guarantees sum V*V = I_s and
// sum V*BV = A to 1e-9.
MatrixConvexCombination purify_semiclassical(const SemiclassicalDecomposition& terms,
                                             const std::optional<std::vector<CVector>>& basis = std::nullopt,
                                             const Tolerances& tol = {});

} // namespace magicsq
