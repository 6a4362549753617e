#include "squares.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace magicsq {

namespace {

std::string cell_name(int i, int j) {
    std::ostringstream out;
    out << "(" << i + 1 << "," << j + 1 << ")";
    return out.str();
}

} // namespace

/*
 * Domain types
 */

QuantumMagicSquare::QuantumMagicSquare(int n, int s, std::vector<CMatrix> entries, const Tolerances& tol)
    : n_(n), s_(s), entries_(std::move(entries)) {
    if (n_ < 1 || s_ < 1)
        fail(errc::malformed_grid, "quantum magic square sizes must be positive");
    if (entries_.size() != static_cast<size_t>(n_) * n_)
        fail(errc::malformed_grid, "quantum magic square needs n*n entries");
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            const CMatrix& e = at(i, j);
            if (e.rows() != s_ || e.cols() != s_)
                fail(errc::malformed_grid, "entry " + cell_name(i, j) + " is not " +
                                               std::to_string(s_) + "x" + std::to_string(s_));
            if (!e.is_hermitian(tol.herm))
                fail(errc::not_hermitian, "entry " + cell_name(i, j) + " is not Hermitian");
        }
}

QuantumMagicSquare QuantumMagicSquare::transposed() const {
    std::vector<CMatrix> entries(entries_.size());
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            entries[static_cast<size_t>(j) * n_ + i] = at(i, j);
    return QuantumMagicSquare(n_, s_, std::move(entries));
}

QuantumLatinSquare::QuantumLatinSquare(int n, std::vector<CVector> cells)
    : n_(n), cells_(std::move(cells)) {
    if (n_ < 1)
        fail(errc::invalid_qls, "quantum Latin square size must be positive");
    if (cells_.size() != static_cast<size_t>(n_) * n_)
        fail(errc::invalid_qls, "quantum Latin square needs n*n cells");
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            const CVector& v = at(i, j);
            if (v.size() != static_cast<size_t>(n_))
                fail(errc::invalid_qls, "cell " + cell_name(i, j) + " is not a length-" +
                                            std::to_string(n_) + " vector");
            if (std::abs(vec_norm(v) - 1.0) > 1e-10)
                fail(errc::invalid_qls, "cell " + cell_name(i, j) + " is not a unit vector");
        }
    for (int i = 0; i < n_; ++i) {
        std::vector<CVector> row(n_), col(n_);
        for (int j = 0; j < n_; ++j) {
            row[j] = at(i, j);
            col[j] = at(j, i);
        }
        if (gram_residual(row) > 1e-9)
            fail(errc::invalid_qls, "row " + std::to_string(i + 1) + " is not an orthonormal basis");
        if (gram_residual(col) > 1e-9)
            fail(errc::invalid_qls, "column " + std::to_string(i + 1) + " is not an orthonormal basis");
    }
}

LatinSquare::LatinSquare(int n, std::vector<int> cells)
    : n_(n), cells_(std::move(cells)) {
    if (n_ < 1)
        fail(errc::malformed_grid, "Latin square size must be positive");
    if (cells_.size() != static_cast<size_t>(n_) * n_)
        fail(errc::malformed_grid, "Latin square needs n*n cells");
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (at(i, j) < 1 || at(i, j) > n_)
                fail(errc::malformed_grid, "cell " + cell_name(i, j) + " holds symbol " +
                                               std::to_string(at(i, j)) + " outside 1.." + std::to_string(n_));
    for (int i = 0; i < n_; ++i) {
        std::vector<bool> in_row(n_ + 1, false), in_col(n_ + 1, false);
        for (int j = 0; j < n_; ++j) {
            const int r = at(i, j);
            const int c = at(j, i);
            if (in_row[r])
                fail(errc::malformed_grid, "row " + std::to_string(i + 1) + " repeats symbol " + std::to_string(r));
            if (in_col[c])
                fail(errc::malformed_grid, "column " + std::to_string(i + 1) + " repeats symbol " + std::to_string(c));
            in_row[r] = true;
            in_col[c] = true;
        }
    }
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    const int n = static_cast<int>(images_.size());
    if (n < 1)
        fail(errc::malformed_grid, "permutation must act on at least one point");
    std::vector<bool> seen(n + 1, false);
    for (int v : images_) {
        if (v < 1 || v > n || seen[v])
            fail(errc::malformed_grid, "permutation images are not a bijection on 1.." + std::to_string(n));
        seen[v] = true;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> images(n);
    std::iota(images.begin(), images.end(), 1);
    return Permutation(std::move(images));
}

std::vector<Permutation> Permutation::all(int n) {
    std::vector<int> images(n);
    std::iota(images.begin(), images.end(), 1);
    std::vector<Permutation> out;
    do {
        out.emplace_back(images);
    } while (std::next_permutation(images.begin(), images.end()));
    return out;
}

CMatrix Permutation::matrix() const {
    const int n = size();
    CMatrix p(n, n);
    for (int j = 1; j <= n; ++j)
        p(image(j) - 1, j - 1) = 1.0;
    return p;
}

SemiclassicalDecomposition::SemiclassicalDecomposition(int n_in, int s_in, std::vector<Term> terms_in,
                                                       const Tolerances& tol)
    : n(n_in), s(s_in), terms(std::move(terms_in)) {
    if (n < 1 || s < 1)
        fail(errc::malformed_grid, "decomposition sizes must be positive");
    // Structural validation only. Whether the coefficients actually form a
    // POVM is checked by the operations that rely on it, so that
    // verify_semiclassical can report a broken POVM instead of refusing it.
    std::vector<const Permutation*> seen;
    for (const Term& term : terms) {
        if (term.perm.size() != n)
            fail(errc::shape_mismatch, "decomposition permutation size differs from n");
        if (term.q.rows() != s || term.q.cols() != s)
            fail(errc::shape_mismatch, "decomposition coefficient is not s x s");
        if (!term.q.is_hermitian(tol.herm))
            fail(errc::not_hermitian, "decomposition coefficient is not Hermitian");
        for (const Permutation* p : seen)
            if (*p == term.perm)
                fail(errc::malformed_grid, "decomposition repeats a permutation");
        seen.push_back(&term.perm);
    }
}

/*
 * Classifiers
 */

Classification classify(const QuantumMagicSquare& grid, const Tolerances& tol) {
    const int n = grid.exterior_size();
    const int s = grid.interior_size();
    Classification out;

    const CMatrix id = CMatrix::identity(s);
    for (int i = 0; i < n; ++i) {
        CMatrix row_sum(s, s), col_sum(s, s);
        for (int j = 0; j < n; ++j) {
            row_sum += grid.at(i, j);
            col_sum += grid.at(j, i);
        }
        out.sum_residual = std::max(out.sum_residual, (row_sum - id).frobenius_norm());
        out.sum_residual = std::max(out.sum_residual, (col_sum - id).frobenius_norm());
    }

    for (const CMatrix& e : grid.entries()) {
        const EigResult eig = hermitian_eig(e, tol);
        const double scale = std::max(1.0, e.frobenius_norm());
        out.psd_violation = std::max(out.psd_violation, std::max(0.0, -eig.values.back()) / scale);
        out.projector_residual = std::max(out.projector_residual, (e * e - e).frobenius_norm());

        const double lambda1 = eig.values[0];
        double second = 0.0;
        for (size_t k = 1; k < eig.values.size(); ++k)
            second = std::max(second, std::abs(eig.values[k]));
        // zero (or negligible) entries count as total rank-one failures
        const double ratio = lambda1 <= tol.rank ? 1.0 : second / lambda1;
        out.second_eig_ratio = std::max(out.second_eig_ratio, ratio);
    }

    const auto& entries = grid.entries();
    for (size_t a = 0; a < entries.size(); ++a)
        for (size_t b = a + 1; b < entries.size(); ++b)
            out.commutator_max = std::max(out.commutator_max, commutator_norm(entries[a], entries[b]));

    out.is_qms = out.psd_violation <= tol.psd && out.sum_residual <= tol.sum * s;
    out.is_qpm = out.is_qms && out.projector_residual <= tol.herm;
    out.is_commuting = out.commutator_max <= tol.comm;
    out.is_rank_one = out.second_eig_ratio <= tol.rank;
    return out;
}

QuantumMagicSquare qls_to_qms(const QuantumLatinSquare& qls) {
    const int n = qls.size();
    std::vector<CMatrix> entries;
    entries.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            entries.push_back(outer(qls.at(i, j)));
    return QuantumMagicSquare(n, n, std::move(entries));
}

QuantumLatinSquare qms_to_qls(const QuantumMagicSquare& a, const Tolerances& tol) {
    const int n = a.exterior_size();
    if (a.interior_size() != n)
        fail(errc::interior_size_mismatch,
             "rank-one factors of an interior size " + std::to_string(a.interior_size()) +
                 " square are not vectors in C^" + std::to_string(n));
    std::vector<CVector> cells;
    cells.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            try {
                cells.push_back(rank_one_factor(a.at(i, j), tol));
            } catch (const error& e) {
                if (e.code() == errc::not_rank_one)
                    fail(errc::not_rank_one, "entry " + cell_name(i, j) + " is not rank one");
                throw;
            }
        }
    return QuantumLatinSquare(n, std::move(cells));
}

namespace {

double grid_distance(const QuantumMagicSquare& a, const QuantumMagicSquare& b, bool worst_cell) {
    if (a.exterior_size() != b.exterior_size() || a.interior_size() != b.interior_size())
        fail(errc::shape_mismatch, "grid distance requires equal shapes");
    double acc = 0.0;
    for (size_t k = 0; k < a.entries().size(); ++k) {
        const double d = (a.entries()[k] - b.entries()[k]).frobenius_norm();
        acc = worst_cell ? std::max(acc, d) : acc + d * d;
    }
    return worst_cell ? acc : std::sqrt(acc);
}

} // namespace

double grid_distance_frobenius(const QuantumMagicSquare& a, const QuantumMagicSquare& b) {
    return grid_distance(a, b, false);
}

double grid_distance_max(const QuantumMagicSquare& a, const QuantumMagicSquare& b) {
    return grid_distance(a, b, true);
}

PovmReport verify_povm(const std::vector<CMatrix>& elements, const Tolerances& tol) {
    if (elements.empty())
        fail(errc::shape_mismatch, "verify_povm: empty element list");
    const int s = elements[0].rows();
    CMatrix sum(s, s);
    PovmReport report;
    for (const CMatrix& e : elements) {
        if (e.rows() != s || e.cols() != s)
            fail(errc::shape_mismatch, "verify_povm: elements have mixed shapes");
        if (!e.is_hermitian(tol.herm))
            fail(errc::not_hermitian, "verify_povm: element is not Hermitian");
        const EigResult eig = hermitian_eig(e, tol);
        const double scale = std::max(1.0, e.frobenius_norm());
        report.psd_violation = std::max(report.psd_violation, std::max(0.0, -eig.values.back()) / scale);
        report.projector_residual = std::max(report.projector_residual, (e * e - e).frobenius_norm());
        sum += e;
    }
    report.sum_residual = (sum - CMatrix::identity(s)).frobenius_norm();
    report.is_povm = report.psd_violation <= tol.psd && report.sum_residual <= tol.sum * s;
    report.is_pvm = report.is_povm && report.projector_residual <= tol.herm;
    return report;
}

} // namespace magicsq
