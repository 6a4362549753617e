#include "magicsq/magicsq.h"

#include <cstring>
#include <new>
#include <string>

#include "construct.hpp"
#include "decompose.hpp"
#include "io.hpp"
#include "mconv.hpp"
#include "squares.hpp"

using nlohmann::json;

struct magicsq_doc {
    magicsq::Document document;
};

namespace {

using namespace magicsq;

thread_local std::string g_last_error = "no error";

// Wrong handle kind / null pointer; separated from domain failures so the
// CLI can distinguish caller bugs from rejected inputs.
struct argument_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

magicsq_status status_of(errc code) {
    switch (code) {
        case errc::parse_error: return MAGICSQ_ERR_PARSE;
        case errc::io_error: return MAGICSQ_ERR_IO;
        case errc::too_large: return MAGICSQ_ERR_TOO_LARGE;
        default: return MAGICSQ_ERR_DOMAIN;
    }
}

template <typename Fn>
magicsq_status guarded(Fn&& fn) {
    try {
        fn();
        return MAGICSQ_OK;
    } catch (const argument_error& e) {
        g_last_error = e.what();
        return MAGICSQ_ERR_ARGUMENT;
    } catch (const error& e) {
        g_last_error = std::string(errc_name(e.code())) + ": " + e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MAGICSQ_ERR_INTERNAL;
    }
}

void require(bool ok, const char* message) {
    if (!ok)
        throw argument_error(message);
}

magicsq_doc* wrap(Document doc) {
    return new magicsq_doc{std::move(doc)};
}

const Document& doc_of(const magicsq_doc* handle, const char* who) {
    require(handle != nullptr, who);
    return handle->document;
}

const QuantumMagicSquare& get_qms(const magicsq_doc* doc, const char* who) {
    const Document& d = doc_of(doc, who);
    if (const auto* qms = std::get_if<QuantumMagicSquare>(&d.payload))
        return *qms;
    throw argument_error(std::string(who) + ": expected a qms document, got " + dockind_name(d.kind()));
}

// qms, or qls converted through its projector grid.
QuantumMagicSquare get_square(const magicsq_doc* doc, const char* who) {
    const Document& d = doc_of(doc, who);
    if (const auto* qms = std::get_if<QuantumMagicSquare>(&d.payload))
        return *qms;
    if (const auto* qls = std::get_if<QuantumLatinSquare>(&d.payload))
        return qls_to_qms(*qls);
    throw argument_error(std::string(who) + ": expected a qms or qls document, got " + dockind_name(d.kind()));
}

const LatinSquare& get_latin(const magicsq_doc* doc, const char* who) {
    const Document& d = doc_of(doc, who);
    if (const auto* latin = std::get_if<LatinSquare>(&d.payload))
        return *latin;
    throw argument_error(std::string(who) + ": expected a latin document, got " + dockind_name(d.kind()));
}

const BasisDoc& get_basis(const magicsq_doc* doc, const char* who) {
    const Document& d = doc_of(doc, who);
    if (const auto* basis = std::get_if<BasisDoc>(&d.payload))
        return *basis;
    throw argument_error(std::string(who) + ": expected a basis document, got " + dockind_name(d.kind()));
}

const SemiclassicalDecomposition& get_decomposition(const magicsq_doc* doc, const char* who) {
    const Document& d = doc_of(doc, who);
    if (const auto* terms = std::get_if<SemiclassicalDecomposition>(&d.payload))
        return *terms;
    throw argument_error(std::string(who) + ": expected a decomposition document, got " +
                         dockind_name(d.kind()));
}

json report_json(const char* command) {
    return json{{"kind", "report"}, {"command", command}};
}

json classification_json(const Classification& cls, int n, int s) {
    json residuals{{"sum", cls.sum_residual},
                   {"psd", cls.psd_violation},
                   {"projector", cls.projector_residual},
                   {"commutator", cls.commutator_max},
                   {"second_eig_ratio", cls.second_eig_ratio}};
    return json{{"n", n},
                {"s", s},
                {"qms", cls.is_qms},
                {"qpm", cls.is_qpm},
                {"commuting", cls.is_commuting},
                {"rank_one", cls.is_rank_one},
                {"residuals", residuals}};
}

} // namespace

extern "C" {

const char* magicsq_version(void) {
    return "1.0.0";
}

const char* magicsq_last_error(void) {
    return g_last_error.c_str();
}

void magicsq_doc_free(magicsq_doc* doc) {
    delete doc;
}

void magicsq_string_free(char* text) {
    delete[] text;
}

magicsq_status magicsq_doc_parse(const char* json_text, magicsq_doc** out) {
    return guarded([&] {
        require(json_text && out, "magicsq_doc_parse: null argument");
        *out = wrap(parse_document(json_text));
    });
}

magicsq_status magicsq_doc_read_file(const char* path, magicsq_doc** out) {
    return guarded([&] {
        require(path && out, "magicsq_doc_read_file: null argument");
        *out = wrap(read_document_file(path));
    });
}

magicsq_status magicsq_doc_serialize(const magicsq_doc* doc, char** out_json) {
    return guarded([&] {
        require(doc && out_json, "magicsq_doc_serialize: null argument");
        const std::string text = serialize_document(doc->document);
        char* copy = new char[text.size() + 1];
        std::memcpy(copy, text.c_str(), text.size() + 1);
        *out_json = copy;
    });
}

magicsq_status magicsq_doc_write_file(const magicsq_doc* doc, const char* path) {
    return guarded([&] {
        require(doc && path, "magicsq_doc_write_file: null argument");
        write_document_file(doc->document, path);
    });
}

const char* magicsq_doc_kind(const magicsq_doc* doc) {
    return doc ? dockind_name(doc->document.kind()) : "unknown";
}

magicsq_status magicsq_doc_get(const magicsq_doc* doc, const char* name, magicsq_doc** out) {
    return guarded([&] {
        require(doc && name && out, "magicsq_doc_get: null argument");
        const auto* bundle = std::get_if<CounterexampleBundle>(&doc->document.payload);
        require(bundle != nullptr, "magicsq_doc_get: parts can only be extracted from a bundle");
        const std::string part = name;
        if (part == "a")
            *out = wrap(Document{bundle->a});
        else if (part == "b")
            *out = wrap(Document{bundle->b});
        else if (part == "direct_sum")
            *out = wrap(Document{bundle->direct_sum});
        else if (part == "dilation")
            *out = wrap(Document{bundle->dilation});
        else if (part == "compression") {
            MatrixConvexCombination compression;
            compression.n = bundle->n;
            compression.t = bundle->m;
            compression.terms.push_back({bundle->dilation, bundle->contraction});
            *out = wrap(Document{std::move(compression)});
        } else {
            throw argument_error("magicsq_doc_get: unknown bundle part \"" + part + "\"");
        }
    });
}

magicsq_status magicsq_doc_size(const magicsq_doc* doc, int* out_n, int* out_s) {
    return guarded([&] {
        const Document& d = doc_of(doc, "magicsq_doc_size: null document");
        struct Visitor {
            int n = 0, s = 0;
            void operator()(const QuantumMagicSquare& v) { n = v.exterior_size(); s = v.interior_size(); }
            void operator()(const QuantumLatinSquare& v) { n = v.size(); s = v.size(); }
            void operator()(const LatinSquare& v) { n = v.size(); }
            void operator()(const BasisDoc& v) { n = v.n; }
            void operator()(const PovmDoc& v) { n = v.n; s = v.s; }
            void operator()(const SemiclassicalDecomposition& v) { n = v.n; s = v.s; }
            void operator()(const MatrixConvexCombination& v) { n = v.n; s = v.t; }
            void operator()(const CounterexampleBundle& v) { n = v.n; s = v.m; }
            void operator()(const json&) {}
        } visitor;
        std::visit(visitor, d.payload);
        if (out_n)
            *out_n = visitor.n;
        if (out_s)
            *out_s = visitor.s;
    });
}

magicsq_status magicsq_classify(const magicsq_doc* square, magicsq_doc** out_report) {
    return guarded([&] {
        require(out_report != nullptr, "magicsq_classify: null output");
        const QuantumMagicSquare qms = get_square(square, "magicsq_classify");
        const Classification cls = classify(qms, Tolerances::env_scaled());
        json report = report_json("classify");
        report.update(classification_json(cls, qms.exterior_size(), qms.interior_size()));
        *out_report = wrap(Document{std::move(report)});
    });
}

magicsq_status magicsq_easy_qls(const magicsq_doc* latin, const magicsq_doc* basis, magicsq_doc** out_qls) {
    return guarded([&] {
        require(out_qls != nullptr, "magicsq_easy_qls: null output");
        const LatinSquare& l = get_latin(latin, "magicsq_easy_qls");
        const BasisDoc& b = get_basis(basis, "magicsq_easy_qls");
        *out_qls = wrap(Document{easy_qls(l, b.vectors, Tolerances::env_scaled())});
    });
}

magicsq_status magicsq_povm_latin(const magicsq_doc* latin, const magicsq_doc* povm, magicsq_doc** out_qms) {
    return guarded([&] {
        require(out_qms != nullptr, "magicsq_povm_latin: null output");
        const LatinSquare& l = get_latin(latin, "magicsq_povm_latin");
        const Document& d = doc_of(povm, "magicsq_povm_latin");
        const auto* elements = std::get_if<PovmDoc>(&d.payload);
        require(elements != nullptr, "magicsq_povm_latin: expected a povm document");
        *out_qms = wrap(Document{povm_latin(l, elements->elements, Tolerances::env_scaled())});
    });
}

magicsq_status magicsq_counterexample(int m, const magicsq_doc* basis_v, const magicsq_doc* basis_w,
                                      magicsq_doc** out_bundle) {
    return guarded([&] {
        require(out_bundle != nullptr, "magicsq_counterexample: null output");
        const Tolerances tol = Tolerances::env_scaled();
        std::vector<CVector> v = basis_v ? get_basis(basis_v, "magicsq_counterexample").vectors
                                         : standard_basis(m < 1 ? 1 : m);
        std::vector<CVector> w = basis_w ? get_basis(basis_w, "magicsq_counterexample").vectors
                                         : fourier_basis(m < 1 ? 1 : m);
        *out_bundle = wrap(Document{build_counterexample(m, v, w, tol)});
    });
}

magicsq_status magicsq_standard_basis(int n, magicsq_doc** out) {
    return guarded([&] {
        require(out != nullptr, "magicsq_standard_basis: null output");
        if (n < 1)
            fail(errc::bad_size, "magicsq_standard_basis: n must be positive");
        *out = wrap(Document{BasisDoc{n, standard_basis(n)}});
    });
}

magicsq_status magicsq_random_latin(int n, uint64_t seed, magicsq_doc** out) {
    return guarded([&] {
        require(out != nullptr, "magicsq_random_latin: null output");
        *out = wrap(Document{random_latin_square(n, seed)});
    });
}

magicsq_status magicsq_random_doubly_stochastic(int n, uint64_t seed, magicsq_doc** out) {
    return guarded([&] {
        require(out != nullptr, "magicsq_random_doubly_stochastic: null output");
        *out = wrap(Document{random_doubly_stochastic(n, seed)});
    });
}

magicsq_status magicsq_random_basis(int n, uint64_t seed, magicsq_doc** out) {
    return guarded([&] {
        require(out != nullptr, "magicsq_random_basis: null output");
        if (n < 1)
            fail(errc::bad_size, "magicsq_random_basis: n must be positive");
        *out = wrap(Document{BasisDoc{n, random_haar_basis(n, seed)}});
    });
}

magicsq_status magicsq_random_decomposition(int n, int s, uint64_t seed, magicsq_doc** out) {
    return guarded([&] {
        require(out != nullptr, "magicsq_random_decomposition: null output");
        *out = wrap(Document{random_semiclassical_decomposition(n, s, seed)});
    });
}

magicsq_status magicsq_bvn(const magicsq_doc* square, magicsq_doc** out_decomposition,
                           magicsq_doc** out_report) {
    return guarded([&] {
        require(out_decomposition && out_report, "magicsq_bvn: null output");
        const Tolerances tol = Tolerances::env_scaled();
        const QuantumMagicSquare& d = get_qms(square, "magicsq_bvn");
        const std::vector<WeightedPermutation> terms = bvn_decompose(d, tol);

        const int n = d.exterior_size();
        std::vector<SemiclassicalDecomposition::Term> doc_terms;
        double weight_sum = 0.0;
        for (const auto& term : terms) {
            doc_terms.push_back({term.perm, CMatrix(1, 1, {cplx(term.weight)})});
            weight_sum += term.weight;
        }
        SemiclassicalDecomposition decomposition(n, 1, std::move(doc_terms), tol);
        const SemiclassicalCheck check = verify_semiclassical(d, decomposition, tol);

        json report = report_json("bvn");
        report["n"] = n;
        report["terms"] = static_cast<int>(terms.size());
        report["weight_sum"] = weight_sum;
        report["reconstruction_residual"] = check.residual;
        *out_decomposition = wrap(Document{std::move(decomposition)});
        *out_report = wrap(Document{std::move(report)});
    });
}

magicsq_status magicsq_rank_one_test(const magicsq_doc* square, int* out_is_semiclassical,
                                     magicsq_doc** out_latin, magicsq_doc** out_basis,
                                     magicsq_doc** out_report) {
    return guarded([&] {
        require(out_is_semiclassical && out_latin && out_basis && out_report,
                "magicsq_rank_one_test: null output");
        const QuantumMagicSquare qms = get_square(square, "magicsq_rank_one_test");
        const RankOneTestResult result = rank_one_semiclassical_test(qms, Tolerances::env_scaled());

        json report = report_json("rank-one-test");
        report["n"] = qms.exterior_size();
        report["is_semiclassical"] = result.is_semiclassical;
        report["reason"] = result.reason;

        *out_is_semiclassical = result.is_semiclassical ? 1 : 0;
        *out_latin = nullptr;
        *out_basis = nullptr;
        if (result.certificate) {
            *out_latin = wrap(Document{result.certificate->latin});
            *out_basis = wrap(Document{BasisDoc{qms.exterior_size(), result.certificate->basis}});
        }
        *out_report = wrap(Document{std::move(report)});
    });
}

magicsq_status magicsq_membership(const magicsq_doc* square, long max_iter, double tol_feas,
                                  int allow_large, magicsq_verdict* out_verdict,
                                  magicsq_doc** out_certificate, magicsq_doc** out_report) {
    return guarded([&] {
        require(out_verdict && out_certificate && out_report, "magicsq_membership: null output");
        const Tolerances tol = Tolerances::env_scaled();
        const QuantumMagicSquare qms = get_square(square, "magicsq_membership");
        if (max_iter <= 0)
            max_iter = 50000;
        const double effective_tol = tol_feas > 0.0 ? tol_feas : tol.feas;
        const MembershipVerdict verdict =
            semiclassical_membership(qms, max_iter, effective_tol, allow_large != 0, tol);

        json report = report_json("semiclassical");
        report["n"] = qms.exterior_size();
        report["s"] = qms.interior_size();
        report["status"] = verdict.status == MembershipStatus::feasible ? "feasible"
                           : verdict.status == MembershipStatus::likely_infeasible ? "likely_infeasible"
                                                                                   : "undetermined";
        report["residual"] = verdict.residual;
        report["sum_residual"] = verdict.sum_residual;
        report["iterations"] = verdict.iterations;
        report["max_iter"] = max_iter;
        report["tol_feas"] = effective_tol;

        *out_verdict = verdict.status == MembershipStatus::feasible ? MAGICSQ_FEASIBLE
                       : verdict.status == MembershipStatus::likely_infeasible ? MAGICSQ_LIKELY_INFEASIBLE
                                                                               : MAGICSQ_UNDETERMINED;
        *out_certificate = verdict.certificate ? wrap(Document{*verdict.certificate}) : nullptr;
        *out_report = wrap(Document{std::move(report)});
    });
}

magicsq_status magicsq_verify_semiclassical(const magicsq_doc* square, const magicsq_doc* decomposition,
                                            int* out_valid, magicsq_doc** out_report) {
    return guarded([&] {
        require(out_valid && out_report, "magicsq_verify_semiclassical: null output");
        const Tolerances tol = Tolerances::env_scaled();
        const QuantumMagicSquare qms = get_square(square, "magicsq_verify_semiclassical");
        const SemiclassicalDecomposition& terms =
            get_decomposition(decomposition, "magicsq_verify_semiclassical");
        const SemiclassicalCheck check = verify_semiclassical(qms, terms, tol);

        json report = report_json("verify");
        report["valid"] = check.valid;
        report["povm_ok"] = check.povm_ok;
        report["residual"] = check.residual;
        report["sum_residual"] = check.sum_residual;
        *out_valid = check.valid ? 1 : 0;
        *out_report = wrap(Document{std::move(report)});
    });
}

magicsq_status magicsq_purify(const magicsq_doc* decomposition, const magicsq_doc* basis,
                              magicsq_doc** out_combination, magicsq_doc** out_report) {
    return guarded([&] {
        require(out_combination && out_report, "magicsq_purify: null output");
        const Tolerances tol = Tolerances::env_scaled();
        const SemiclassicalDecomposition& terms = get_decomposition(decomposition, "magicsq_purify");
        std::optional<std::vector<CVector>> b;
        if (basis)
            b = get_basis(basis, "magicsq_purify").vectors;
        const MatrixConvexCombination combination = purify_semiclassical(terms, b, tol);

        std::vector<CMatrix> family;
        for (const auto& term : combination.terms)
            family.push_back(term.contraction);
        const ContractionFamilyReport fam = check_contraction_family(family, combination.t, tol);
        const QuantumMagicSquare target = semiclassical_from_decomposition(terms, tol);
        const QuantumMagicSquare recombined = combine(combination, tol);

        json report = report_json("purify");
        report["n"] = combination.n;
        report["t"] = combination.t;
        report["terms"] = static_cast<int>(combination.terms.size());
        report["isometry_residual"] = fam.residual;
        report["reconstruction_residual"] = grid_distance_frobenius(target, recombined);
        *out_combination = wrap(Document{std::move(combination)});
        *out_report = wrap(Document{std::move(report)});
    });
}

magicsq_status magicsq_combine(const magicsq_doc* combination, magicsq_doc** out_qms,
                               magicsq_doc** out_report) {
    return guarded([&] {
        require(out_qms && out_report, "magicsq_combine: null output");
        const Tolerances tol = Tolerances::env_scaled();
        const Document& d = doc_of(combination, "magicsq_combine");
        const auto* c = std::get_if<MatrixConvexCombination>(&d.payload);
        require(c != nullptr, "magicsq_combine: expected a combination document");

        std::vector<CMatrix> family;
        for (const auto& term : c->terms)
            family.push_back(term.contraction);
        const ContractionFamilyReport fam = check_contraction_family(family, c->t, tol);
        const QuantumMagicSquare result = combine(*c, tol);
        const Classification cls = classify(result, tol);

        json report = report_json("combine");
        report["terms"] = static_cast<int>(c->terms.size());
        report["isometry_residual"] = fam.residual;
        report["result"] = classification_json(cls, result.exterior_size(), result.interior_size());
        *out_qms = wrap(Document{std::move(result)});
        *out_report = wrap(Document{std::move(report)});
    });
}

} // extern "C"
