#include "construct.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace magicsq {

namespace {

constexpr double kPi = 3.14159265358979323846;

CVector embed(const CVector& v, int dim) {
    CVector out(dim, cplx(0.0));
    std::copy(v.begin(), v.end(), out.begin());
    return out;
}

CVector unit_vector(int dim, int index) {
    CVector out(dim, cplx(0.0));
    out[index] = 1.0;
    return out;
}

void require_orthonormal_basis(const std::vector<CVector>& basis, int n, const char* who) {
    if (static_cast<int>(basis.size()) != n)
        fail(errc::size_mismatch, std::string(who) + ": expected " + std::to_string(n) + " basis vectors");
    for (const CVector& v : basis)
        if (static_cast<int>(v.size()) != n)
            fail(errc::size_mismatch, std::string(who) + ": basis vectors must live in C^" + std::to_string(n));
    if (gram_residual(basis) > 1e-9)
        fail(errc::not_orthonormal, std::string(who) + ": basis is not orthonormal");
}

} // namespace

std::vector<CVector> standard_basis(int n) {
    std::vector<CVector> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k)
        out.push_back(unit_vector(n, k));
    return out;
}

std::vector<CVector> fourier_basis(int n) {
    std::vector<CVector> out(n, CVector(n));
    const double root = std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            const double angle = 2.0 * kPi * j * k / n;
            out[k][j] = cplx(std::cos(angle), std::sin(angle)) / root;
        }
    return out;
}

LatinSquare cyclic_latin_square(int n) {
    std::vector<int> cells(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cells[static_cast<size_t>(i) * n + j] = (i + j) % n + 1;
    return LatinSquare(n, std::move(cells));
}

QuantumLatinSquare easy_qls(const LatinSquare& latin, const std::vector<CVector>& basis,
                            const Tolerances& tol) {
    (void)tol;
    const int n = latin.size();
    require_orthonormal_basis(basis, n, "easy_qls");
    std::vector<CVector> cells;
    cells.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cells.push_back(basis[latin.at(i, j) - 1]);
    return QuantumLatinSquare(n, std::move(cells));
}

QuantumMagicSquare povm_latin(const LatinSquare& latin, const std::vector<CMatrix>& povm,
                              const Tolerances& tol) {
    const int n = latin.size();
    if (static_cast<int>(povm.size()) != n)
        fail(errc::size_mismatch, "povm_latin: POVM has " + std::to_string(povm.size()) +
                                      " elements, Latin square has size " + std::to_string(n));
    if (!verify_povm(povm, tol).is_povm)
        fail(errc::not_povm, "povm_latin: elements do not form a POVM");
    const int s = povm[0].rows();
    std::vector<CMatrix> entries;
    entries.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            entries.push_back(povm[latin.at(i, j) - 1]);
    return QuantumMagicSquare(n, s, std::move(entries), tol);
}

QuantumMagicSquare semiclassical_from_decomposition(const SemiclassicalDecomposition& terms,
                                                    const Tolerances& tol) {
    if (terms.terms.empty())
        fail(errc::not_povm, "decomposition has no terms");
    std::vector<CMatrix> coefficients;
    coefficients.reserve(terms.terms.size());
    for (const auto& term : terms.terms)
        coefficients.push_back(term.q);
    if (!verify_povm(coefficients, tol).is_povm)
        fail(errc::not_povm, "decomposition coefficients do not form a POVM");

    const int n = terms.n;
    const int s = terms.s;
    std::vector<CMatrix> entries(static_cast<size_t>(n) * n, CMatrix(s, s));
    for (const auto& term : terms.terms)
        for (int j = 1; j <= n; ++j) {
            const int i = term.perm.image(j);
            entries[static_cast<size_t>(i - 1) * n + (j - 1)] += term.q;
        }
    return QuantumMagicSquare(n, s, std::move(entries), tol);
}

QuantumMagicSquare direct_sum(const QuantumMagicSquare& a, const QuantumMagicSquare& b) {
    if (a.interior_size() != b.interior_size())
        fail(errc::interior_size_mismatch, "direct_sum: interior sizes differ");
    const int s = a.interior_size();
    const int na = a.exterior_size();
    const int nb = b.exterior_size();
    const int n = na + nb;
    std::vector<CMatrix> entries(static_cast<size_t>(n) * n, CMatrix(s, s));
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j)
            entries[static_cast<size_t>(i) * n + j] = a.at(i, j);
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
            entries[static_cast<size_t>(na + i) * n + (na + j)] = b.at(i, j);
    return QuantumMagicSquare(n, s, std::move(entries));
}

CounterexampleBundle build_counterexample(int m, const std::vector<CVector>& basis_v,
                                          const std::vector<CVector>& basis_w,
                                          const Tolerances& tol) {
    if (m < 2)
        fail(errc::bad_size, "build_counterexample: need m >= 2");
    require_orthonormal_basis(basis_v, m, "build_counterexample");
    require_orthonormal_basis(basis_w, m, "build_counterexample");
    if (commutator_norm(outer(basis_v[0]), outer(basis_w[0])) <= 10.0 * tol.comm)
        fail(errc::bases_commute,
             "build_counterexample: leading projectors of the two bases commute");

    const int n = 2 * m;
    const LatinSquare latin = cyclic_latin_square(m);
    const QuantumMagicSquare a = qls_to_qms(easy_qls(latin, basis_v, tol));
    const QuantumMagicSquare b = qls_to_qms(easy_qls(latin, basis_w, tol));

    // Dilation cells: embedded copies of the two bases on the diagonal
    // blocks, the leftover standard vectors e_{m+1}..e_n on the off blocks.
    std::vector<CVector> cells(static_cast<size_t>(n) * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const int symbol = latin.at(i, j);
            cells[static_cast<size_t>(i) * n + j] = embed(basis_v[symbol - 1], n);
            cells[static_cast<size_t>(i) * n + (m + j)] = unit_vector(n, m + symbol - 1);
            cells[static_cast<size_t>(m + i) * n + j] = unit_vector(n, m + symbol - 1);
            cells[static_cast<size_t>(m + i) * n + (m + j)] = embed(basis_w[symbol - 1], n);
        }

    CMatrix contraction(n, m);
    for (int i = 0; i < m; ++i)
        contraction(i, i) = 1.0;

    CounterexampleBundle bundle{
        m,
        n,
        a,
        b,
        direct_sum(a, b),
        qls_to_qms(QuantumLatinSquare(n, std::move(cells))),
        std::move(contraction),
    };
    return bundle;
}

CounterexampleBundle build_counterexample(int m, const Tolerances& tol) {
    if (m < 2)
        fail(errc::bad_size, "build_counterexample: need m >= 2");
    return build_counterexample(m, standard_basis(m), fourier_basis(m), tol);
}

LatinSquare random_latin_square(int n, std::uint64_t seed) {
    if (n < 1)
        fail(errc::bad_size, "random_latin_square: n must be positive");
    Rng rng(seed);
    std::vector<int> rows(n), cols(n), symbols(n);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::iota(symbols.begin(), symbols.end(), 1);
    rng.shuffle(rows);
    rng.shuffle(cols);
    rng.shuffle(symbols);
    std::vector<int> cells(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cells[static_cast<size_t>(i) * n + j] = symbols[(rows[i] + cols[j]) % n];
    return LatinSquare(n, std::move(cells));
}

QuantumMagicSquare random_doubly_stochastic(int n, std::uint64_t seed) {
    if (n < 1)
        fail(errc::bad_size, "random_doubly_stochastic: n must be positive");
    Rng rng(seed);
    const int count = std::min(n * n, (n - 1) * (n - 1) + 1);

    std::vector<std::vector<int>> perms(count);
    std::vector<int> base(n);
    std::iota(base.begin(), base.end(), 1);
    for (auto& p : perms) {
        p = base;
        rng.shuffle(p);
    }

    std::vector<double> weights(count);
    double total = 0.0;
    for (double& w : weights) {
        w = rng.exponential();
        total += w;
    }
    for (double& w : weights)
        w /= total;

    std::vector<double> grid(static_cast<size_t>(n) * n, 0.0);
    for (int k = 0; k < count; ++k)
        for (int j = 0; j < n; ++j)
            grid[static_cast<size_t>(perms[k][j] - 1) * n + j] += weights[k];

    std::vector<CMatrix> entries;
    entries.reserve(grid.size());
    for (double v : grid)
        entries.push_back(CMatrix(1, 1, {cplx(v)}));
    return QuantumMagicSquare(n, 1, std::move(entries));
}

SemiclassicalDecomposition random_semiclassical_decomposition(int n, int s, std::uint64_t seed) {
    if (n < 1 || s < 1)
        fail(errc::bad_size, "random_semiclassical_decomposition: sizes must be positive");
    if (n > 6)
        fail(errc::too_large, "random_semiclassical_decomposition: refusing n! terms for n > 6");
    Rng rng(seed);
    const std::vector<Permutation> perms = Permutation::all(n);

    // Random PSD block per permutation, then normalize the sum to I with a
    // symmetric congruence so the result is an exact POVM.
    std::vector<CMatrix> blocks;
    blocks.reserve(perms.size());
    CMatrix sum(s, s);
    for (size_t k = 0; k < perms.size(); ++k) {
        CMatrix g(s, s);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j)
                g(i, j) = rng.gaussian_cplx();
        CMatrix block = g * g.adjoint();
        sum += block;
        blocks.push_back(std::move(block));
    }

    const EigResult eig = hermitian_eig(sum);
    CMatrix inv_root(s, s);
    for (int k = 0; k < s; ++k) {
        const double lambda = eig.values[k];
        if (lambda <= 0.0)
            fail(errc::precondition_failed, "random_semiclassical_decomposition: singular normalizer");
        const double f = 1.0 / std::sqrt(lambda);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j)
                inv_root(i, j) += f * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    }

    std::vector<SemiclassicalDecomposition::Term> terms;
    terms.reserve(perms.size());
    for (size_t k = 0; k < perms.size(); ++k)
        terms.push_back({perms[k], inv_root * blocks[k] * inv_root});
    return SemiclassicalDecomposition(n, s, std::move(terms));
}

} // namespace magicsq
