#pragma once

#include "squares.hpp"

namespace magicsq {

// Sum of contracted squares: sum_i V_i* A^(i) V_i applied to every cell,
// where the V_i are s_i x t matrices with sum_i V_i* V_i = I_t. Sources may
// live at different interior sizes.
struct MatrixConvexCombination {
    int n = 0; // shared exterior size
    int t = 0; // target interior size
    struct Term {
        QuantumMagicSquare source;
        CMatrix contraction; // s_i x t
    };
    std::vector<Term> terms;
};

struct ContractionFamilyReport {
    bool valid = false;
    double residual = 0.0; // ||sum V_i* V_i - I_t||_F
};

ContractionFamilyReport check_contraction_family(const std::vector<CMatrix>& family, int t,
                                                 const Tolerances& tol = {});

// Evaluate the combination cellwise. The exterior size is untouched; only
// interior matrices are contracted.
QuantumMagicSquare combine(const MatrixConvexCombination& c, const Tolerances& tol = {});

// Single-term combination with an isometry V (V*V = I_t).
QuantumMagicSquare compress(const QuantumMagicSquare& a, const CMatrix& v, const Tolerances& tol = {});

} // namespace magicsq
