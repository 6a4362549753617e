#pragma once

#include <cstdint>

#include "squares.hpp"

namespace magicsq {

std::vector<CVector> standard_basis(int n);
// Discrete Fourier basis of C^n, entries omega^(jk) / sqrt(n).
std::vector<CVector> fourier_basis(int n);

LatinSquare cyclic_latin_square(int n);

// Basis vectors arranged by a classical Latin square: cell (i,j) = v_{L_ij}.
QuantumLatinSquare easy_qls(const LatinSquare& latin, const std::vector<CVector>& basis,
                            const Tolerances& tol = {});

// POVM elements arranged by a classical Latin square: entry (i,j) = P_{L_ij}.
QuantumMagicSquare povm_latin(const LatinSquare& latin, const std::vector<CMatrix>& povm,
                              const Tolerances& tol = {});

// A_ij = sum over terms with pi(j) = i of Q_pi; requires {Q_pi} to be a POVM.
QuantumMagicSquare semiclassical_from_decomposition(const SemiclassicalDecomposition& terms,
                                                    const Tolerances& tol = {});

// Block grid (A 0; 0 B); interior sizes must agree.
QuantumMagicSquare direct_sum(const QuantumMagicSquare& a, const QuantumMagicSquare& b);

// Everything behind the non-semiclassical quantum Latin squares of even size:
// two easy squares A, B over the cyclic Latin square of size m, their direct
// sum, the rank-one dilation C of size n = 2m, and the isometry V = (I_m; 0)
// with V*CV = A (+) B exactly.
struct CounterexampleBundle {
    int m = 0;
    int n = 0;
    QuantumMagicSquare a;
    QuantumMagicSquare b;
    QuantumMagicSquare direct_sum;
    QuantumMagicSquare dilation;
    CMatrix contraction; // n x m
};

// Requires the leading projectors of the two bases to fail commutation by
// more than 10 * tol.comm, otherwise the construction certifies nothing.
CounterexampleBundle build_counterexample(int m, const std::vector<CVector>& basis_v,
                                          const std::vector<CVector>& basis_w,
                                          const Tolerances& tol = {});

// Default bases: standard and Fourier (noncommuting for every m >= 2).
CounterexampleBundle build_counterexample(int m, const Tolerances& tol = {});

/*
 * Seeded generators. Deterministic per seed; samplers trade uniformity for
 * simplicity (the Latin squares are cyclic squares under random row, column
 * and symbol permutations; not uniform over all Latin squares).
 */

LatinSquare random_latin_square(int n, std::uint64_t seed);

// Convex combination of min(n^2, (n-1)^2 + 1) random permutation matrices
// with normalized seeded exponential weights, as an interior-size-1 square.
QuantumMagicSquare random_doubly_stochastic(int n, std::uint64_t seed);

// Random full-support POVM over all n! permutations (generically positive
// definite coefficients). n is capped at 6 like the membership solver.
SemiclassicalDecomposition random_semiclassical_decomposition(int n, int s, std::uint64_t seed);

} // namespace magicsq
