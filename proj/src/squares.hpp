#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace magicsq {

// n x n grid of s x s Hermitian matrices. Construction checks shape and
// Hermitianity only; membership in the magic-square sets is a property of
// the values and is reported by classify(), never assumed.
class QuantumMagicSquare {
public:
    QuantumMagicSquare(int n, int s, std::vector<CMatrix> entries, const Tolerances& tol = {});

    int exterior_size() const { return n_; }
    int interior_size() const { return s_; }

    const CMatrix& at(int i, int j) const { return entries_[static_cast<size_t>(i) * n_ + j]; }
    const std::vector<CMatrix>& entries() const { return entries_; }

    QuantumMagicSquare transposed() const;

private:
    int n_;
    int s_;
    std::vector<CMatrix> entries_;
};

// n x n grid of unit vectors in C^n whose rows and columns are orthonormal
// bases. Validated on construction.
class QuantumLatinSquare {
public:
    QuantumLatinSquare(int n, std::vector<CVector> cells);

    int size() const { return n_; }
    const CVector& at(int i, int j) const { return cells_[static_cast<size_t>(i) * n_ + j]; }
    const std::vector<CVector>& cells() const { return cells_; }

private:
    int n_;
    std::vector<CVector> cells_;
};

// Classical Latin square over symbols {1, ..., n}.
class LatinSquare {
public:
    LatinSquare(int n, std::vector<int> cells);

    int size() const { return n_; }
    int at(int i, int j) const { return cells_[static_cast<size_t>(i) * n_ + j]; }
    const std::vector<int>& cells() const { return cells_; }

private:
    int n_;
    std::vector<int> cells_;
};

// Bijection on {1, ..., n}, stored as 1-based images: image(j) = pi(j).
class Permutation {
public:
    explicit Permutation(std::vector<int> images);
    static Permutation identity(int n);
    // All permutations of {1..n} in lexicographic order of their image lists.
    static std::vector<Permutation> all(int n);

    int size() const { return static_cast<int>(images_.size()); }
    int image(int j) const { return images_[static_cast<size_t>(j) - 1]; } // 1-based
    const std::vector<int>& images() const { return images_; }

    // Permutation matrix P with P(i,j) = 1 iff pi(j) = i.
    CMatrix matrix() const;

    bool operator==(const Permutation& other) const { return images_ == other.images_; }
    bool operator<(const Permutation& other) const { return images_ < other.images_; }

private:
    std::vector<int> images_;
};

// POVM {Q_pi} indexed by permutations; absent permutations mean Q_pi = 0.
struct SemiclassicalDecomposition {
    int n = 0;
    int s = 0;
    struct Term {
        Permutation perm;
        CMatrix q;
    };
    std::vector<Term> terms;

    SemiclassicalDecomposition(int n, int s, std::vector<Term> terms, const Tolerances& tol = {});
};

struct Classification {
    bool is_qms = false;
    bool is_qpm = false;
    bool is_commuting = false;
    bool is_rank_one = false;

    // Worst-case residuals backing the booleans above.
    double sum_residual = 0.0;        // max ||row/col sum - I||_F
    double psd_violation = 0.0;       // max relative negative-eigenvalue excess
    double projector_residual = 0.0;  // max ||A_ij^2 - A_ij||_F
    double commutator_max = 0.0;      // max ||[A_ij, A_kl]||_F over all pairs
    double second_eig_ratio = 0.0;    // max |lambda_2| / lambda_1 over entries
};

// Membership tests for the quantum magic square (M), quantum permutation (P),
// commuting (C along with P) and rank-one (R) sets, with all residuals that
// back the verdicts. Checks every unordered entry pair for commutation.
Classification classify(const QuantumMagicSquare& grid, const Tolerances& tol = {});

// Projector grid (v_ij v_ij*) of a quantum Latin square.
QuantumMagicSquare qls_to_qms(const QuantumLatinSquare& qls);

// Inverse direction for rank-one squares with interior size equal to the
// exterior size; cells come out phase-fixed.
QuantumLatinSquare qms_to_qls(const QuantumMagicSquare& a, const Tolerances& tol = {});

struct PovmReport {
    bool is_povm = false;
    bool is_pvm = false;
    double sum_residual = 0.0;
    double psd_violation = 0.0;
    double projector_residual = 0.0;
};

PovmReport verify_povm(const std::vector<CMatrix>& elements, const Tolerances& tol = {});

// Distance between same-shape grids: entrywise Frobenius norms, aggregated
// as a full Frobenius norm or as the worst cell.
double grid_distance_frobenius(const QuantumMagicSquare& a, const QuantumMagicSquare& b);
double grid_distance_max(const QuantumMagicSquare& a, const QuantumMagicSquare& b);

} // namespace magicsq
