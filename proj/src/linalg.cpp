#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace magicsq {

const char* errc_name(errc code) {
    switch (code) {
        case errc::non_square: return "NonSquare";
        case errc::not_hermitian: return "NotHermitian";
        case errc::shape_mismatch: return "ShapeMismatch";
        case errc::dependent_input: return "DependentInput";
        case errc::not_rank_one: return "NotRankOne";
        case errc::malformed_grid: return "MalformedGrid";
        case errc::invalid_qls: return "InvalidQLS";
        case errc::interior_size_mismatch: return "InteriorSizeMismatch";
        case errc::not_orthonormal: return "NotOrthonormal";
        case errc::size_mismatch: return "SizeMismatch";
        case errc::not_povm: return "NotPOVM";
        case errc::bases_commute: return "BasesCommute";
        case errc::bad_size: return "BadSize";
        case errc::not_doubly_stochastic: return "NotDoublyStochastic";
        case errc::matching_failed: return "MatchingFailed";
        case errc::precondition_failed: return "PreconditionFailed";
        case errc::too_large: return "TooLarge";
        case errc::non_qms_input: return "NonQMSInput";
        case errc::isometry_sum_violation: return "IsometrySumViolation";
        case errc::exterior_size_mismatch: return "ExteriorSizeMismatch";
        case errc::not_isometry: return "NotIsometry";
        case errc::parse_error: return "ParseError";
        case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

/*
 * CMatrix basics
 */

CMatrix::CMatrix(int rows, int cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows_ < 0 || cols_ < 0 || data_.size() != static_cast<size_t>(rows_) * cols_)
        fail(errc::shape_mismatch, "matrix data size does not match rows*cols");
}

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
    CMatrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c)
            fail(errc::shape_mismatch, "ragged initializer rows");
        int j = 0;
        for (const cplx& v : row)
            m(i, j++) = v;
        ++i;
    }
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            out(j, i) = std::conj((*this)(i, j));
    return out;
}

CMatrix CMatrix::transpose() const {
    CMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            out(j, i) = (*this)(i, j);
    return out;
}

double CMatrix::frobenius_norm() const {
    double sum = 0.0;
    for (const cplx& v : data_)
        sum += std::norm(v);
    return std::sqrt(sum);
}

cplx CMatrix::trace() const {
    cplx t = 0.0;
    for (int i = 0; i < std::min(rows_, cols_); ++i)
        t += (*this)(i, i);
    return t;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        fail(errc::shape_mismatch, "matrix addition shape mismatch");
    for (size_t k = 0; k < data_.size(); ++k)
        data_[k] += other.data_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        fail(errc::shape_mismatch, "matrix subtraction shape mismatch");
    for (size_t k = 0; k < data_.size(); ++k)
        data_[k] -= other.data_[k];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx a) {
    for (cplx& v : data_)
        v *= a;
    return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows())
        fail(errc::shape_mismatch, "matrix product shape mismatch");
    CMatrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0))
                continue;
            for (int j = 0; j < b.cols(); ++j)
                out(i, j) += aik * b(k, j);
        }
    return out;
}

bool CMatrix::is_hermitian(double tol) const {
    if (rows_ != cols_)
        return false;
    double diff = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = i; j < cols_; ++j)
            diff += std::norm((*this)(i, j) - std::conj((*this)(j, i)));
    // counts each off-diagonal pair once with weight ||a_ij - conj(a_ji)||^2,
    // which equals ||A - A*||_F^2 / 2 summed over both triangles
    return std::sqrt(2.0 * diff) <= tol * std::max(1.0, frobenius_norm());
}

Tolerances Tolerances::env_scaled() {
    double scale = 1.0;
    if (const char* env = std::getenv("MAGIC_TOLERANCE_SCALE")) {
        char* end = nullptr;
        const double parsed = std::strtod(env, &end);
        if (end != env && parsed > 0.0)
            scale = parsed;
    }
    return Tolerances{}.scaled_by(scale);
}

Tolerances Tolerances::scaled_by(double factor) const {
    Tolerances t = *this;
    t.herm *= factor;
    t.psd *= factor;
    t.sum *= factor;
    t.rank *= factor;
    t.comm *= factor;
    t.feas *= factor;
    return t;
}

/*
 * Vector helpers
 */

cplx inner(const CVector& a, const CVector& b) {
    if (a.size() != b.size())
        fail(errc::shape_mismatch, "inner product length mismatch");
    cplx sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        sum += std::conj(a[i]) * b[i];
    return sum;
}

double vec_norm(const CVector& v) {
    double sum = 0.0;
    for (const cplx& x : v)
        sum += std::norm(x);
    return std::sqrt(sum);
}

CMatrix outer(const CVector& v) {
    return outer(v, v);
}

CMatrix outer(const CVector& a, const CVector& b) {
    CMatrix out(static_cast<int>(a.size()), static_cast<int>(b.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            out(static_cast<int>(i), static_cast<int>(j)) = a[i] * std::conj(b[j]);
    return out;
}

CVector fix_phase(CVector v) {
    size_t best = 0;
    double best_mag = -1.0;
    for (size_t i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > best_mag) {
            best_mag = mag;
            best = i;
        }
    }
    if (best_mag <= 0.0)
        return v;
    const cplx phase = std::conj(v[best]) / best_mag;
    for (cplx& x : v)
        x *= phase;
    v[best] = cplx(std::abs(v[best]), 0.0); // kill the rounding residue in the pivot
    return v;
}

/*
 * Hermitian eigensolver (cyclic Jacobi)
 */

namespace {

void require_square_hermitian(const CMatrix& a, double tol_herm, const char* who) {
    if (a.rows() != a.cols())
        fail(errc::non_square, std::string(who) + ": matrix is not square");
    if (!a.is_hermitian(tol_herm))
        fail(errc::not_hermitian, std::string(who) + ": matrix is not Hermitian within tolerance");
}

double off_diagonal_norm(const CMatrix& a) {
    double sum = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j)
                sum += std::norm(a(i, j));
    return std::sqrt(sum);
}

// Lexicographic order on phase-fixed eigenvectors; used only to break exact
// eigenvalue ties so outputs are reproducible.
bool vector_lex_less(const CVector& a, const CVector& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].real() != b[i].real())
            return a[i].real() < b[i].real();
        if (a[i].imag() != b[i].imag())
            return a[i].imag() < b[i].imag();
    }
    return false;
}

} // namespace

EigResult hermitian_eig(const CMatrix& a_in, const Tolerances& tol) {
    require_square_hermitian(a_in, tol.herm, "hermitian_eig");
    const int n = a_in.rows();

    // Work on the exact Hermitian part so tiny input asymmetry cannot leak
    // into complex eigenvalue estimates.
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = 0.5 * (a_in(i, j) + std::conj(a_in(j, i)));

    CMatrix u = CMatrix::identity(n);
    const double scale = std::max(1.0, a.frobenius_norm());
    const double stop = 1e-14 * scale;

    for (int sweep = 0; sweep < 60 && off_diagonal_norm(a) > stop; ++sweep) {
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= stop / (static_cast<double>(n) * n))
                    continue;

                const cplx phase = apq / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cplx s = phase * (t * c);

                // A <- J* A J with J = [[c, s], [-conj(s), c]] on rows/cols (p, q)
                for (int k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp - std::conj(s) * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = std::conj(s) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx(a(p, p).real(), 0.0);
                a(q, q) = cplx(a(q, q).real(), 0.0);

                for (int k = 0; k < n; ++k) {
                    const cplx ukp = u(k, p);
                    const cplx ukq = u(k, q);
                    u(k, p) = c * ukp - std::conj(s) * ukq;
                    u(k, q) = s * ukp + c * ukq;
                }
            }
        }
    }

    std::vector<double> values(n);
    std::vector<CVector> columns(n, CVector(n));
    for (int k = 0; k < n; ++k) {
        values[k] = a(k, k).real();
        CVector col(n);
        for (int i = 0; i < n; ++i)
            col[i] = u(i, k);
        columns[k] = fix_phase(std::move(col));
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        if (values[x] != values[y])
            return values[x] > values[y];
        return vector_lex_less(columns[x], columns[y]);
    });

    EigResult out;
    out.values.resize(n);
    out.vectors = CMatrix(n, n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = values[order[k]];
        for (int i = 0; i < n; ++i)
            out.vectors(i, k) = columns[order[k]][i];
    }
    return out;
}

PsdReport psd_check(const CMatrix& a, const Tolerances& tol) {
    const EigResult eig = hermitian_eig(a, tol);
    PsdReport report;
    report.min_eigenvalue = eig.values.empty() ? 0.0 : eig.values.back();
    report.psd = report.min_eigenvalue >= -tol.psd * std::max(1.0, a.frobenius_norm());
    const int n = a.rows();
    report.witness.resize(n);
    for (int i = 0; i < n; ++i)
        report.witness[i] = eig.vectors(i, n - 1);
    return report;
}

CMatrix psd_project(const CMatrix& a, const Tolerances& tol) {
    const EigResult eig = hermitian_eig(a, tol);
    const int n = a.rows();
    CMatrix out(n, n);
    for (int k = 0; k < n; ++k) {
        const double lambda = std::max(eig.values[k], 0.0);
        if (lambda == 0.0)
            continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out(i, j) += lambda * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    }
    return out;
}

/*
 * Bases and factors
 */

double gram_residual(const std::vector<CVector>& vectors) {
    const size_t k = vectors.size();
    double sum = 0.0;
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) {
            const cplx g = inner(vectors[i], vectors[j]);
            sum += std::norm(g - (i == j ? cplx(1.0) : cplx(0.0)));
        }
    return std::sqrt(sum);
}

std::vector<CVector> orthonormalize(const std::vector<CVector>& vectors) {
    const size_t k = vectors.size();
    if (k == 0)
        return {};
    const size_t dim = vectors[0].size();
    for (const CVector& v : vectors)
        if (v.size() != dim)
            fail(errc::shape_mismatch, "orthonormalize: mixed vector lengths");

    // Independence gate: smallest singular value of the stacked matrix,
    // computed from the Gram matrix.
    CMatrix gram(static_cast<int>(k), static_cast<int>(k));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j)
            gram(static_cast<int>(i), static_cast<int>(j)) = inner(vectors[i], vectors[j]);
    const EigResult geig = hermitian_eig(gram);
    const double sigma_min = std::sqrt(std::max(geig.values.back(), 0.0));
    if (sigma_min <= 1e-10)
        fail(errc::dependent_input, "orthonormalize: input vectors are numerically dependent");

    std::vector<CVector> out;
    out.reserve(k);
    for (size_t i = 0; i < k; ++i) {
        CVector v = vectors[i];
        for (int pass = 0; pass < 2; ++pass)
            for (const CVector& u : out) {
                const cplx proj = inner(u, v);
                for (size_t d = 0; d < dim; ++d)
                    v[d] -= proj * u[d];
            }
        const double norm = vec_norm(v);
        if (norm <= 1e-300)
            fail(errc::dependent_input, "orthonormalize: vector vanished during elimination");
        for (cplx& x : v)
            x /= norm;
        out.push_back(std::move(v));
    }
    return out;
}

CVector rank_one_factor(const CMatrix& a, const Tolerances& tol) {
    require_square_hermitian(a, tol.herm, "rank_one_factor");
    const EigResult eig = hermitian_eig(a, tol);
    const int n = a.rows();
    const double lambda1 = eig.values.empty() ? 0.0 : eig.values[0];
    if (lambda1 <= tol.rank)
        fail(errc::not_rank_one, "rank_one_factor: leading eigenvalue vanishes");
    double residual = 0.0;
    for (int k = 1; k < n; ++k)
        residual = std::max(residual, std::abs(eig.values[k]));
    if (residual > tol.rank * lambda1)
        fail(errc::not_rank_one, "rank_one_factor: matrix has rank above one");

    CVector factor(n);
    const double root = std::sqrt(lambda1);
    for (int i = 0; i < n; ++i)
        factor[i] = root * eig.vectors(i, 0);
    return fix_phase(std::move(factor));
}

std::vector<CVector> random_haar_basis(int n, std::uint64_t seed) {
    if (n < 1)
        fail(errc::bad_size, "random_haar_basis: n must be positive");
    Rng rng(seed);
    std::vector<CVector> frame(n, CVector(n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            frame[k][i] = rng.gaussian_cplx();
    return orthonormalize(frame);
}

/*
 * Products and norms
 */

CMatrix kron(const CMatrix& p, const CMatrix& q) {
    CMatrix out(p.rows() * q.rows(), p.cols() * q.cols());
    for (int i = 0; i < p.rows(); ++i)
        for (int j = 0; j < p.cols(); ++j) {
            const cplx pij = p(i, j);
            if (pij == cplx(0.0))
                continue;
            for (int a = 0; a < q.rows(); ++a)
                for (int b = 0; b < q.cols(); ++b)
                    out(i * q.rows() + a, j * q.cols() + b) = pij * q(a, b);
        }
    return out;
}

double commutator_norm(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        fail(errc::shape_mismatch, "commutator_norm: need same-shape square matrices");
    return (a * b - b * a).frobenius_norm();
}

/*
 * Deterministic randomness
 */

double Rng::uniform() {
    // 53 random mantissa bits; independent of std distribution internals
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    do {
        u = uniform();
    } while (u <= 0.0);
    const double v = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u));
    const double angle = 2.0 * 3.14159265358979323846 * v;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

double Rng::exponential() {
    double u = 0.0;
    do {
        u = uniform();
    } while (u <= 0.0);
    return -std::log(u);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0)
        fail(errc::bad_size, "Rng::below: bound must be positive");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

cplx Rng::gaussian_cplx() {
    const double re = gaussian();
    const double im = gaussian();
    return cplx(re, im);
}

} // namespace magicsq
