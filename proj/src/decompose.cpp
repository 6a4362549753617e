#include "decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "construct.hpp"

namespace magicsq {

/*
 * Bipartite matching
 */

namespace {

bool augment(const std::vector<std::vector<char>>& adj, int row, std::vector<char>& used,
             std::vector<int>& col_owner) {
    const int n = static_cast<int>(adj.size());
    for (int c = 0; c < n; ++c) {
        if (!adj[row][c] || used[c])
            continue;
        used[c] = 1;
        if (col_owner[c] < 0 || augment(adj, col_owner[c], used, col_owner)) {
            col_owner[c] = row;
            return true;
        }
    }
    return false;
}

// Kuhn's augmenting-path matching; returns row -> column or nothing.
std::optional<std::vector<int>> perfect_matching(const std::vector<std::vector<char>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> col_owner(n, -1);
    for (int r = 0; r < n; ++r) {
        std::vector<char> used(n, 0);
        if (!augment(adj, r, used, col_owner))
            return std::nullopt;
    }
    std::vector<int> row_to_col(n, -1);
    for (int c = 0; c < n; ++c)
        row_to_col[col_owner[c]] = c;
    return row_to_col;
}

// Smallest matching in lexicographic row order: fix the lowest feasible
// column for row 0, then row 1, and so on. Deterministic tie-breaking for
// every caller that extracts permutations.
std::optional<std::vector<int>> lex_smallest_perfect_matching(std::vector<std::vector<char>> adj) {
    const int n = static_cast<int>(adj.size());
    if (!perfect_matching(adj))
        return std::nullopt;
    std::vector<int> fixed(n, -1);
    for (int r = 0; r < n; ++r) {
        const std::vector<char> saved = adj[r];
        for (int c = 0; c < n; ++c) {
            if (!saved[c])
                continue;
            std::fill(adj[r].begin(), adj[r].end(), char(0));
            adj[r][c] = 1;
            if (perfect_matching(adj)) {
                fixed[r] = c;
                break;
            }
            adj[r] = saved;
        }
        if (fixed[r] < 0)
            return std::nullopt;
    }
    return fixed;
}

// One nonzero solution of m x = 0 via Gaussian elimination, or empty if m
// has full column rank.
std::vector<double> nullspace_vector(std::vector<std::vector<double>> m) {
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    std::vector<int> pivot_row_of_col(cols, -1);
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int best = -1;
        double best_abs = 1e-9;
        for (int i = rank; i < rows; ++i)
            if (std::abs(m[i][c]) > best_abs) {
                best_abs = std::abs(m[i][c]);
                best = i;
            }
        if (best < 0)
            continue;
        std::swap(m[rank], m[best]);
        const double pivot = m[rank][c];
        for (int j = c; j < cols; ++j)
            m[rank][j] /= pivot;
        for (int i = 0; i < rows; ++i) {
            if (i == rank)
                continue;
            const double f = m[i][c];
            if (f == 0.0)
                continue;
            for (int j = c; j < cols; ++j)
                m[i][j] -= f * m[rank][j];
        }
        pivot_row_of_col[c] = rank;
        ++rank;
    }
    int free_col = -1;
    for (int c = 0; c < cols; ++c)
        if (pivot_row_of_col[c] < 0) {
            free_col = c;
            break;
        }
    if (free_col < 0)
        return {};
    std::vector<double> x(cols, 0.0);
    x[free_col] = 1.0;
    for (int c = 0; c < cols; ++c)
        if (pivot_row_of_col[c] >= 0)
            x[c] = -m[pivot_row_of_col[c]][free_col];
    return x;
}

// Caratheodory step: while more terms than the Birkhoff polytope dimension
// plus one, remove an affine dependence without moving the combination.
void reduce_term_count(std::vector<WeightedPermutation>& terms, int n) {
    const size_t bound = static_cast<size_t>(n - 1) * (n - 1) + 1;
    while (terms.size() > bound) {
        const int t = static_cast<int>(terms.size());
        std::vector<std::vector<double>> m(n * n + 1, std::vector<double>(t, 0.0));
        for (int k = 0; k < t; ++k) {
            for (int j = 1; j <= n; ++j)
                m[(terms[k].perm.image(j) - 1) * n + (j - 1)][k] = 1.0;
            m[n * n][k] = 1.0;
        }
        std::vector<double> alpha = nullspace_vector(std::move(m));
        if (alpha.empty())
            break;
        if (*std::max_element(alpha.begin(), alpha.end()) <= 0.0)
            for (double& v : alpha)
                v = -v;
        double theta = std::numeric_limits<double>::infinity();
        for (int k = 0; k < t; ++k)
            if (alpha[k] > 1e-12)
                theta = std::min(theta, terms[k].weight / alpha[k]);
        if (!std::isfinite(theta))
            break;
        for (int k = 0; k < t; ++k)
            terms[k].weight -= theta * alpha[k];
        std::erase_if(terms, [](const WeightedPermutation& wp) { return wp.weight <= 1e-14; });
    }
}

} // namespace

/*
 * Birkhoff-von Neumann
 */

std::vector<WeightedPermutation> bvn_decompose(const QuantumMagicSquare& d, const Tolerances& tol) {
    if (d.interior_size() != 1)
        fail(errc::not_doubly_stochastic, "bvn_decompose: interior size must be 1");
    const int n = d.exterior_size();

    std::vector<std::vector<double>> x(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx v = d.at(i, j)(0, 0);
            if (std::abs(v.imag()) > tol.sum)
                fail(errc::not_doubly_stochastic, "entry (" + std::to_string(i + 1) + "," +
                                                      std::to_string(j + 1) + ") is not real");
            if (v.real() < -tol.psd)
                fail(errc::not_doubly_stochastic, "entry (" + std::to_string(i + 1) + "," +
                                                      std::to_string(j + 1) + ") is negative");
            x[i][j] = std::max(v.real(), 0.0);
        }
    for (int i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (int j = 0; j < n; ++j) {
            row += x[i][j];
            col += x[j][i];
        }
        if (std::abs(row - 1.0) > tol.sum || std::abs(col - 1.0) > tol.sum)
            fail(errc::not_doubly_stochastic, "line sums deviate from one beyond tolerance");
    }

    // Entries below tau_pos are treated as absent; the loop stops once all
    // entries fall under tau_stop. tau_stop >> n^2 tau_pos keeps Hall's
    // condition intact on the thresholded support of the exact remainder.
    const double tau_pos = 1e-15;
    const double tau_stop = 1e-12;

    std::vector<WeightedPermutation> terms;
    for (int step = 0; step < n * n + 2; ++step) {
        double max_entry = 0.0;
        for (const auto& row : x)
            for (double v : row)
                max_entry = std::max(max_entry, v);
        if (max_entry <= tau_stop)
            break;

        std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                adj[i][j] = x[i][j] > tau_pos;
        const auto matching = lex_smallest_perfect_matching(adj);
        if (!matching)
            fail(errc::matching_failed,
                 "no perfect matching on the positive support; input is outside tolerance");

        double weight = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            weight = std::min(weight, x[i][(*matching)[i]]);
        std::vector<int> images(n);
        for (int i = 0; i < n; ++i) {
            images[(*matching)[i]] = i + 1;
            x[i][(*matching)[i]] -= weight; // the argmin cells land on exact zero
        }
        terms.push_back({weight, Permutation(std::move(images))});
    }

    for (const auto& row : x)
        for (double v : row)
            if (v > tau_stop)
                fail(errc::matching_failed, "remainder did not drain; input is outside tolerance");

    reduce_term_count(terms, n);
    return terms;
}

/*
 * Semiclassical verification
 */

SemiclassicalCheck verify_semiclassical(const QuantumMagicSquare& a, const SemiclassicalDecomposition& terms,
                                        const Tolerances& tol) {
    const int n = a.exterior_size();
    const int s = a.interior_size();
    if (terms.n != n || terms.s != s)
        fail(errc::shape_mismatch, "verify_semiclassical: decomposition sizes do not match the square");

    SemiclassicalCheck check;
    CMatrix sum(s, s);
    double psd_violation = 0.0;
    for (const auto& term : terms.terms) {
        sum += term.q;
        const PsdReport psd = psd_check(term.q, tol);
        psd_violation = std::max(psd_violation,
                                 std::max(0.0, -psd.min_eigenvalue) / std::max(1.0, term.q.frobenius_norm()));
    }
    check.sum_residual = (sum - CMatrix::identity(s)).frobenius_norm();
    check.povm_ok = psd_violation <= tol.psd && check.sum_residual <= tol.sum * s;

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            CMatrix expect(s, s);
            for (const auto& term : terms.terms)
                if (term.perm.image(j + 1) == i + 1)
                    expect += term.q;
            check.residual = std::max(check.residual, (a.at(i, j) - expect).frobenius_norm());
        }

    check.valid = check.povm_ok && check.residual <= tol.sum;
    return check;
}

/*
 * Exact decision for rank-one squares (membership in the easy set)
 */

RankOneTestResult rank_one_semiclassical_test(const QuantumMagicSquare& a, const Tolerances& tol) {
    const int n = a.exterior_size();
    if (a.interior_size() != n)
        fail(errc::precondition_failed,
             "rank_one_semiclassical_test: requires interior size equal to exterior size");
    const Classification cls = classify(a, tol);
    if (!cls.is_rank_one)
        fail(errc::precondition_failed, "rank_one_semiclassical_test: requires a rank-one square");

    RankOneTestResult out;
    if (cls.commutator_max > tol.comm) {
        out.reason = "entries do not pairwise commute";
        return out;
    }

    std::vector<CVector> basis(n);
    for (int j = 0; j < n; ++j)
        basis[j] = rank_one_factor(a.at(0, j), tol);
    if (gram_residual(basis) > 1e-9) {
        out.reason = "row-one factors are not an orthonormal basis";
        return out;
    }

    std::vector<int> cells(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int label = 0;
            for (int k = 0; k < n; ++k)
                if ((a.at(i, j) - outer(basis[k])).frobenius_norm() <= 1e-8) {
                    label = k + 1;
                    break;
                }
            if (label == 0) {
                out.reason = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                             ") matches no row-one projector";
                return out;
            }
            cells[static_cast<size_t>(i) * n + j] = label;
        }

    try {
        LatinSquare latin(n, std::move(cells));
        out.certificate = RankOneCertificate{std::move(latin), std::move(basis)};
        out.is_semiclassical = true;
    } catch (const error&) {
        out.reason = "labels do not form a Latin square";
    }
    return out;
}

/*
 * Membership by Dykstra-corrected alternating projections
 */

namespace {

// Sparse constraint pattern: column pi of the 0/1 matrix M touches the rows
// (pi(j), j) for every j plus the trailing sum row.
std::vector<std::vector<int>> constraint_rows_per_perm(const std::vector<Permutation>& perms, int n) {
    std::vector<std::vector<int>> rows(perms.size());
    for (size_t k = 0; k < perms.size(); ++k) {
        rows[k].reserve(n + 1);
        for (int j = 1; j <= n; ++j)
            rows[k].push_back((perms[k].image(j) - 1) * n + (j - 1));
        rows[k].push_back(n * n);
    }
    return rows;
}

} // namespace

MembershipVerdict semiclassical_membership(const QuantumMagicSquare& a, long max_iter, double tol_feas,
                                           bool allow_large, const Tolerances& tol) {
    const int n = a.exterior_size();
    const int s = a.interior_size();
    if (tol_feas <= 0.0)
        tol_feas = tol.feas;
    if (max_iter < 1)
        max_iter = 1;

    if (!classify(a, tol).is_qms)
        fail(errc::non_qms_input, "semiclassical_membership: input does not classify as a quantum magic square");
    if (n > 6 && !allow_large)
        fail(errc::too_large, "semiclassical_membership: " + std::to_string(n) +
                                  "! PSD blocks; pass allow_large to override");

    const std::vector<Permutation> perms = Permutation::all(n);
    const int count = static_cast<int>(perms.size());
    const int rows = n * n + 1;
    const std::vector<std::vector<int>> touches = constraint_rows_per_perm(perms, n);

    // Pseudo-inverse of M M^T once; the affine projection is
    // x - M^T pinv(M M^T) (M x - c), identical for every matrix entry slot.
    CMatrix mmt(rows, rows);
    {
        std::vector<std::vector<double>> dense(rows, std::vector<double>(count, 0.0));
        for (int k = 0; k < count; ++k)
            for (int r : touches[k])
                dense[r][k] = 1.0;
        for (int r1 = 0; r1 < rows; ++r1)
            for (int r2 = r1; r2 < rows; ++r2) {
                double dot = 0.0;
                for (int k = 0; k < count; ++k)
                    dot += dense[r1][k] * dense[r2][k];
                mmt(r1, r2) = dot;
                mmt(r2, r1) = dot;
            }
    }
    const EigResult mmt_eig = hermitian_eig(mmt);
    std::vector<std::vector<double>> pinv(rows, std::vector<double>(rows, 0.0));
    const double cut = 1e-10 * std::max(mmt_eig.values[0], 1.0);
    for (int k = 0; k < rows; ++k) {
        if (mmt_eig.values[k] <= cut)
            continue;
        const double f = 1.0 / mmt_eig.values[k];
        for (int r1 = 0; r1 < rows; ++r1) {
            const double u1 = mmt_eig.vectors(r1, k).real();
            if (u1 == 0.0)
                continue;
            for (int r2 = 0; r2 < rows; ++r2)
                pinv[r1][r2] += f * u1 * mmt_eig.vectors(r2, k).real();
        }
    }

    // Right-hand side per entry slot (alpha, beta).
    std::vector<std::vector<cplx>> rhs(static_cast<size_t>(s) * s, std::vector<cplx>(rows));
    for (int alpha = 0; alpha < s; ++alpha)
        for (int beta = 0; beta < s; ++beta) {
            auto& c = rhs[static_cast<size_t>(alpha) * s + beta];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    c[i * n + j] = a.at(i, j)(alpha, beta);
            c[n * n] = alpha == beta ? 1.0 : 0.0;
        }

    std::vector<CMatrix> x(count, CMatrix(s, s));
    for (int k = 0; k < count; ++k)
        for (int d = 0; d < s; ++d)
            x[k](d, d) = 1.0 / count;
    std::vector<CMatrix> corr_affine(count, CMatrix(s, s));
    std::vector<CMatrix> corr_cone(count, CMatrix(s, s));

    std::vector<cplx> g(rows), h(rows);
    const auto project_affine = [&](std::vector<CMatrix>& y) {
        for (int alpha = 0; alpha < s; ++alpha)
            for (int beta = 0; beta < s; ++beta) {
                const auto& c = rhs[static_cast<size_t>(alpha) * s + beta];
                std::fill(g.begin(), g.end(), cplx(0.0));
                for (int k = 0; k < count; ++k) {
                    const cplx v = y[k](alpha, beta);
                    for (int r : touches[k])
                        g[r] += v;
                }
                for (int r = 0; r < rows; ++r)
                    g[r] -= c[r];
                for (int r1 = 0; r1 < rows; ++r1) {
                    cplx acc = 0.0;
                    for (int r2 = 0; r2 < rows; ++r2)
                        acc += pinv[r1][r2] * g[r2];
                    h[r1] = acc;
                }
                for (int k = 0; k < count; ++k) {
                    cplx acc = 0.0;
                    for (int r : touches[k])
                        acc += h[r];
                    y[k](alpha, beta) -= acc;
                }
            }
    };

    const auto residuals_at = [&](const std::vector<CMatrix>& z, double& recon, double& sum_res) {
        double total = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                CMatrix expect(s, s);
                for (int k = 0; k < count; ++k)
                    if (perms[k].image(j + 1) == i + 1)
                        expect += z[k];
                const double r = (a.at(i, j) - expect).frobenius_norm();
                total += r * r;
            }
        recon = std::sqrt(total);
        CMatrix sum(s, s);
        for (const CMatrix& q : z)
            sum += q;
        sum_res = (sum - CMatrix::identity(s)).frobenius_norm();
    };

    MembershipVerdict verdict;
    double best_metric = std::numeric_limits<double>::infinity();
    long best_iter = 0;
    std::vector<CMatrix> y(count, CMatrix(s, s));

    for (long it = 1; it <= max_iter; ++it) {
        for (int k = 0; k < count; ++k)
            y[k] = x[k] + corr_affine[k];
        std::vector<CMatrix> pre = y;
        project_affine(y);
        for (int k = 0; k < count; ++k)
            corr_affine[k] = pre[k] - y[k];

        for (int k = 0; k < count; ++k) {
            const CMatrix w = y[k] + corr_cone[k];
            x[k] = s == 1 ? CMatrix(1, 1, {cplx(std::max(w(0, 0).real(), 0.0))}) : psd_project(w, tol);
            corr_cone[k] = w - x[k];
        }

        double recon = 0.0, sum_res = 0.0;
        residuals_at(x, recon, sum_res);
        const double metric = std::max(recon, sum_res);
        verdict.iterations = it;

        if (metric < best_metric * (1.0 - 1e-12)) {
            best_metric = metric;
            best_iter = it;
            verdict.residual = recon;
            verdict.sum_residual = sum_res;
        }

        if (metric <= tol_feas) {
            verdict.status = MembershipStatus::feasible;
            verdict.residual = recon;
            verdict.sum_residual = sum_res;
            std::vector<SemiclassicalDecomposition::Term> terms;
            for (int k = 0; k < count; ++k)
                if (x[k].frobenius_norm() > 1e-12)
                    terms.push_back({perms[k], x[k]});
            Tolerances cert_tol = tol;
            cert_tol.sum = std::max(cert_tol.sum, tol_feas);
            verdict.certificate = SemiclassicalDecomposition(n, s, std::move(terms), cert_tol);
            return verdict;
        }

        if (it - best_iter >= 500)
            break; // stalled: no relative progress across the window
    }

    verdict.status = best_metric >= 10.0 * tol_feas ? MembershipStatus::likely_infeasible
                                                    : MembershipStatus::undetermined;
    return verdict;
}

/*
 * Purification into easy quantum Latin squares
 */

LatinSquare latin_square_from_permutation(const Permutation& pi) {
    const int n = pi.size();
    std::vector<int> cells(static_cast<size_t>(n) * n, 0);
    for (int j = 1; j <= n; ++j)
        cells[static_cast<size_t>(pi.image(j) - 1) * n + (j - 1)] = 1;
    for (int symbol = 2; symbol <= n; ++symbol) {
        std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                adj[i][j] = cells[static_cast<size_t>(i) * n + j] == 0;
        const auto matching = lex_smallest_perfect_matching(adj);
        if (!matching)
            fail(errc::matching_failed, "latin_square_from_permutation: completion failed");
        for (int i = 0; i < n; ++i)
            cells[static_cast<size_t>(i) * n + (*matching)[i]] = symbol;
    }
    return LatinSquare(n, std::move(cells));
}

MatrixConvexCombination purify_semiclassical(const SemiclassicalDecomposition& terms,
                                             const std::optional<std::vector<CVector>>& basis,
                                             const Tolerances& tol) {
    if (terms.terms.empty())
        fail(errc::not_povm, "purify_semiclassical: decomposition has no terms");
    {
        std::vector<CMatrix> coefficients;
        coefficients.reserve(terms.terms.size());
        for (const auto& term : terms.terms)
            coefficients.push_back(term.q);
        if (!verify_povm(coefficients, tol).is_povm)
            fail(errc::not_povm, "purify_semiclassical: coefficients do not form a POVM");
    }

    const int n = terms.n;
    const int s = terms.s;
    std::vector<CVector> b = basis ? *basis : standard_basis(n);
    if (static_cast<int>(b.size()) != n)
        fail(errc::size_mismatch, "purify_semiclassical: basis must have n vectors");
    for (const CVector& v : b)
        if (static_cast<int>(v.size()) != n)
            fail(errc::size_mismatch, "purify_semiclassical: basis vectors must live in C^n");
    if (gram_residual(b) > 1e-9)
        fail(errc::not_orthonormal, "purify_semiclassical: basis is not orthonormal");

    MatrixConvexCombination out;
    out.n = n;
    out.t = s;
    for (const auto& term : terms.terms) {
        if (term.q.frobenius_norm() <= tol.rank)
            continue;
        const LatinSquare latin = latin_square_from_permutation(term.perm);
        const QuantumMagicSquare source = qls_to_qms(easy_qls(latin, b, tol));
        const EigResult eig = hermitian_eig(term.q, tol);
        for (int r = 0; r < s; ++r) {
            if (eig.values[r] <= tol.rank)
                continue;
            const double root = std::sqrt(eig.values[r]);
            // V = v_1 c* with c = sqrt(lambda_r) u_r; contracting the source
            // picks out exactly (P_pi)_ij, so the terms resum to A.
            CMatrix v(n, s);
            for (int i = 0; i < n; ++i)
                for (int d = 0; d < s; ++d)
                    v(i, d) = b[0][i] * std::conj(root * eig.vectors(d, r));
            out.terms.push_back({source, std::move(v)});
        }
    }
    return out;
}

} // namespace magicsq
