#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "error.hpp"

namespace magicsq {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

// Dense row-major complex matrix. Everything in this project is desk-scale
// (n, s <= 64), so the kernel favors clarity and reproducibility over speed.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}
    CMatrix(int rows, int cols, std::vector<cplx> data);

    static CMatrix identity(int n);
    static CMatrix zero(int rows, int cols) { return CMatrix(rows, cols); }
    static CMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    cplx& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<cplx>& data() const { return data_; }

    CMatrix adjoint() const;
    CMatrix transpose() const;

    double frobenius_norm() const;
    cplx trace() const;

    CMatrix& operator+=(const CMatrix& other);
    CMatrix& operator-=(const CMatrix& other);
    CMatrix& operator*=(cplx a);

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(cplx a, CMatrix m) { return m *= a; }
    friend CMatrix operator*(CMatrix m, cplx a) { return m *= a; }
    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

    bool is_hermitian(double tol) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> data_;
};

// Residual thresholds used across the library. All values are relative
// residual bounds; see the individual operations for how each is applied.
struct Tolerances {
    double herm = 1e-9;
    double psd = 1e-9;
    double sum = 1e-9;
    double rank = 1e-9;
    double comm = 1e-9;
    double feas = 1e-7;

    // Defaults multiplied by MAGIC_TOLERANCE_SCALE (env var, default 1).
    static Tolerances env_scaled();
    Tolerances scaled_by(double factor) const;
};

/*
 * Vector helpers
 */

// Inner product, conjugate-linear in the first argument.
cplx inner(const CVector& a, const CVector& b);
double vec_norm(const CVector& v);
// Outer product vv*.
CMatrix outer(const CVector& v);
CMatrix outer(const CVector& a, const CVector& b); // ab*
// Multiply v by a unit phase so its largest-magnitude entry is real positive.
// Fixed convention that makes vectors defined "up to a phase" comparable.
CVector fix_phase(CVector v);

/*
 * Hermitian eigenproblems
 */

struct EigResult {
    std::vector<double> values; // descending
    CMatrix vectors;            // unitary; column k pairs with values[k]
};

// Cyclic Jacobi diagonalization of a Hermitian matrix.
// Postcondition: ||A U - U diag(lambda)||_F <= 1e-10 * max(1, ||A||_F),
// U*U = I to the same accuracy, eigenvalues sorted descending, eigenvector
// phases fixed, exact ties broken by lexicographic eigenvector order.
EigResult hermitian_eig(const CMatrix& a, const Tolerances& tol = {});

struct PsdReport {
    bool psd = false;
    double min_eigenvalue = 0.0;
    CVector witness; // eigenvector of the smallest eigenvalue
};

// True iff lambda_min(A) >= -tol.psd * max(1, ||A||_F).
PsdReport psd_check(const CMatrix& a, const Tolerances& tol = {});

// Frobenius-nearest positive semidefinite matrix (negative eigenvalues clipped).
CMatrix psd_project(const CMatrix& a, const Tolerances& tol = {});

/*
 * Bases and factors
 */

// Gram-Schmidt with re-orthogonalization. Input must be linearly independent:
// smallest singular value of the stacked matrix > 1e-10, else dependent_input.
std::vector<CVector> orthonormalize(const std::vector<CVector>& vectors);

double gram_residual(const std::vector<CVector>& vectors);

// Factor a rank-one PSD matrix as aa*; phase fixed via fix_phase.
// Rejects inputs with lambda_1 <= tol.rank or lambda_2 > tol.rank * lambda_1.
CVector rank_one_factor(const CMatrix& a, const Tolerances& tol = {});

// Orthonormalization of an i.i.d. complex Gaussian frame; deterministic per seed.
std::vector<CVector> random_haar_basis(int n, std::uint64_t seed);

/*
 * Products and norms
 */

CMatrix kron(const CMatrix& p, const CMatrix& q);

// ||AB - BA||_F for same-shape square matrices.
double commutator_norm(const CMatrix& a, const CMatrix& b);

/*
 * Deterministic randomness
 */

// mt19937_64 with hand-rolled variates so streams do not depend on the
// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();                    // [0, 1)
    double gaussian();                   // standard normal, Box-Muller
    double exponential();                // rate 1
    std::uint64_t below(std::uint64_t bound); // uniform on {0, ..., bound-1}
    cplx gaussian_cplx();                // independent N(0,1) re/im

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace magicsq
