#pragma once

// Hand-built squares used across the test suites.

#include "construct.hpp"
#include "squares.hpp"

namespace fixtures {

using namespace magicsq;

// Rows 1234 / 2413 / 3142 / 4321.
inline LatinSquare paper_latin4() {
    return LatinSquare(4, {1, 2, 3, 4, 2, 4, 1, 3, 3, 1, 4, 2, 4, 3, 2, 1});
}

inline CVector scaled_sum(cplx a, const CVector& x, cplx b, const CVector& y) {
    CVector out(x.size());
    for (size_t i = 0; i < x.size(); ++i)
        out[i] = a * x[i] + b * y[i];
    return out;
}

// The 4x4 quantum Latin square whose rows and columns run through four
// different orthonormal bases (cells like (i v1 + 2 v4)/sqrt(5)); not an
// easy square.
inline QuantumLatinSquare noneasy_qls4(const std::vector<CVector>& v) {
    const double r2 = 1.0 / std::sqrt(2.0);
    const double r5 = 1.0 / std::sqrt(5.0);
    const cplx i(0.0, 1.0);
    std::vector<CVector> cells = {
        v[0],
        v[1],
        v[2],
        v[3],
        scaled_sum(r2, v[1], -r2, v[2]),
        scaled_sum(i * r5, v[0], 2.0 * r5, v[3]),
        scaled_sum(2.0 * r5, v[0], i * r5, v[3]),
        scaled_sum(r2, v[1], r2, v[2]),
        scaled_sum(r2, v[1], r2, v[2]),
        scaled_sum(2.0 * r5, v[0], i * r5, v[3]),
        scaled_sum(i * r5, v[0], 2.0 * r5, v[3]),
        scaled_sum(r2, v[1], -r2, v[2]),
        v[3],
        v[2],
        v[1],
        v[0],
    };
    return QuantumLatinSquare(4, std::move(cells));
}

inline QuantumLatinSquare noneasy_qls4() {
    return noneasy_qls4(standard_basis(4));
}

// Rank-one square of exterior size 3 and interior size 2: every entry is a
// scaled projector but the interior size is below the exterior size.
inline QuantumMagicSquare rank_one_3x3_interior2() {
    const std::vector<CVector> e = standard_basis(2);
    const CMatrix half_p1 = 0.5 * outer(e[0]);
    const CMatrix p2 = outer(e[1]);
    std::vector<CMatrix> entries = {half_p1, half_p1, p2, p2, half_p1, half_p1, half_p1, p2, half_p1};
    return QuantumMagicSquare(3, 2, std::move(entries));
}

// Doubly stochastic matrices enter as interior-size-1 grids.
inline QuantumMagicSquare ds_square(int n, const std::vector<double>& values) {
    std::vector<CMatrix> entries;
    entries.reserve(values.size());
    for (double v : values)
        entries.push_back(CMatrix(1, 1, {cplx(v)}));
    return QuantumMagicSquare(n, 1, std::move(entries));
}

} // namespace fixtures
