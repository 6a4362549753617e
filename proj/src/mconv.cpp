#include "mconv.hpp"

#include <cmath>
#include <string>

namespace magicsq {

namespace {

// Exact Hermitian part; for numerically Hermitian input this only removes
// rounding skew between the two triangles.
CMatrix hermitian_part(const CMatrix& m) {
    CMatrix out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return out;
}

} // namespace

ContractionFamilyReport check_contraction_family(const std::vector<CMatrix>& family, int t,
                                                 const Tolerances& tol) {
    if (family.empty() || t < 1)
        fail(errc::shape_mismatch, "contraction family must be nonempty with positive target size");
    CMatrix sum(t, t);
    for (const CMatrix& v : family) {
        if (v.cols() != t)
            fail(errc::shape_mismatch, "contraction has " + std::to_string(v.cols()) +
                                           " columns, expected " + std::to_string(t));
        sum += v.adjoint() * v;
    }
    ContractionFamilyReport report;
    report.residual = (sum - CMatrix::identity(t)).frobenius_norm();
    report.valid = report.residual <= tol.sum;
    return report;
}

QuantumMagicSquare combine(const MatrixConvexCombination& c, const Tolerances& tol) {
    if (c.terms.empty())
        fail(errc::shape_mismatch, "combination has no terms");
    const int n = c.terms.front().source.exterior_size();
    std::vector<CMatrix> family;
    family.reserve(c.terms.size());
    for (const auto& term : c.terms) {
        if (term.source.exterior_size() != n)
            fail(errc::exterior_size_mismatch, "combination sources have mixed exterior sizes");
        if (term.contraction.rows() != term.source.interior_size())
            fail(errc::shape_mismatch, "contraction rows do not match the source interior size");
        family.push_back(term.contraction);
    }
    if (c.n != 0 && c.n != n)
        fail(errc::exterior_size_mismatch, "combination header n disagrees with its sources");

    const ContractionFamilyReport fam = check_contraction_family(family, c.t, tol);
    if (!fam.valid)
        fail(errc::isometry_sum_violation,
             "sum of V*V differs from the identity by " + std::to_string(fam.residual));

    std::vector<CMatrix> entries(static_cast<size_t>(n) * n, CMatrix(c.t, c.t));
    for (const auto& term : c.terms) {
        const CMatrix vadj = term.contraction.adjoint();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                entries[static_cast<size_t>(i) * n + j] += vadj * term.source.at(i, j) * term.contraction;
    }
    for (CMatrix& e : entries)
        e = hermitian_part(e);
    return QuantumMagicSquare(n, c.t, std::move(entries), tol);
}

QuantumMagicSquare compress(const QuantumMagicSquare& a, const CMatrix& v, const Tolerances& tol) {
    if (v.rows() != a.interior_size())
        fail(errc::shape_mismatch, "contraction rows do not match the interior size");
    const CMatrix gram = v.adjoint() * v;
    if ((gram - CMatrix::identity(v.cols())).frobenius_norm() > tol.sum)
        fail(errc::not_isometry, "V*V is not the identity");
    MatrixConvexCombination c;
    c.n = a.exterior_size();
    c.t = v.cols();
    c.terms.push_back({a, v});
    return combine(c, tol);
}

} // namespace magicsq
