#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace magicsq {

using nlohmann::json;

const char* dockind_name(DocKind kind) {
    switch (kind) {
        case DocKind::qms: return "qms";
        case DocKind::qls: return "qls";
        case DocKind::latin: return "latin";
        case DocKind::basis: return "basis";
        case DocKind::povm: return "povm";
        case DocKind::decomposition: return "decomposition";
        case DocKind::combination: return "combination";
        case DocKind::report: return "report";
        case DocKind::bundle: return "bundle";
    }
    return "unknown";
}

DocKind Document::kind() const {
    struct Visitor {
        DocKind operator()(const QuantumMagicSquare&) const { return DocKind::qms; }
        DocKind operator()(const QuantumLatinSquare&) const { return DocKind::qls; }
        DocKind operator()(const LatinSquare&) const { return DocKind::latin; }
        DocKind operator()(const BasisDoc&) const { return DocKind::basis; }
        DocKind operator()(const PovmDoc&) const { return DocKind::povm; }
        DocKind operator()(const SemiclassicalDecomposition&) const { return DocKind::decomposition; }
        DocKind operator()(const MatrixConvexCombination&) const { return DocKind::combination; }
        DocKind operator()(const CounterexampleBundle&) const { return DocKind::bundle; }
        DocKind operator()(const json&) const { return DocKind::report; }
    };
    return std::visit(Visitor{}, payload);
}

/*
 * Canonical text
 */

namespace {

std::string format_double(double v) {
    if (v == 0.0)
        return "0"; // canonical zero; also folds -0
    if (!std::isfinite(v))
        fail(errc::io_error, "non-finite number in document");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void dump_value(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first)
                    out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                dump_value(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const json& item : j) {
                if (!first)
                    out += ',';
                first = false;
                dump_value(item, out);
            }
            out += ']';
            break;
        }
        case json::value_t::string:
            out += j.dump();
            break;
        case json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case json::value_t::number_integer:
            out += std::to_string(j.get<long long>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(j.get<unsigned long long>());
            break;
        case json::value_t::number_float:
            out += format_double(j.get<double>());
            break;
        case json::value_t::null:
            out += "null";
            break;
        default:
            fail(errc::io_error, "unsupported JSON value in document");
    }
}

double number_at(const json& j, const std::string& where) {
    if (!j.is_number())
        fail(errc::parse_error, where + ": expected a number");
    return j.get<double>();
}

int int_at(const json& j, const std::string& where) {
    if (!j.is_number_integer())
        fail(errc::parse_error, where + ": expected an integer");
    return j.get<int>();
}

const json& field(const json& j, const char* name, const std::string& where) {
    const auto it = j.find(name);
    if (it == j.end())
        fail(errc::parse_error, where + ": missing field \"" + name + "\"");
    return *it;
}

void expect_array(const json& j, size_t size, const std::string& where) {
    if (!j.is_array())
        fail(errc::parse_error, where + ": expected an array");
    if (j.size() != size)
        fail(errc::parse_error, where + ": expected " + std::to_string(size) + " items, found " +
                                    std::to_string(j.size()));
}

} // namespace

std::string canonical_dump(const json& j) {
    std::string out;
    dump_value(j, out);
    return out;
}

/*
 * Fragments
 */

json complex_json(cplx v) {
    return json::array({v.real(), v.imag()});
}

json matrix_json(const CMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_json(const CVector& v) {
    json out = json::array();
    for (const cplx& x : v)
        out.push_back(complex_json(x));
    return out;
}

cplx parse_complex(const json& j, const std::string& where) {
    expect_array(j, 2, where);
    return cplx(number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]"));
}

CMatrix parse_matrix(const json& j, int rows, int cols, const std::string& where) {
    expect_array(j, static_cast<size_t>(rows), where);
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const std::string row_where = where + "[" + std::to_string(i + 1) + "]";
        expect_array(j[i], static_cast<size_t>(cols), row_where);
        for (int c = 0; c < cols; ++c)
            m(i, c) = parse_complex(j[i][c], row_where + "[" + std::to_string(c + 1) + "]");
    }
    return m;
}

CVector parse_vector(const json& j, int dim, const std::string& where) {
    expect_array(j, static_cast<size_t>(dim), where);
    CVector v(dim);
    for (int i = 0; i < dim; ++i)
        v[i] = parse_complex(j[i], where + "[" + std::to_string(i + 1) + "]");
    return v;
}

/*
 * Document kinds
 */

namespace {

json qms_json(const QuantumMagicSquare& a) {
    json entries = json::array();
    for (int i = 0; i < a.exterior_size(); ++i) {
        json row = json::array();
        for (int j = 0; j < a.exterior_size(); ++j)
            row.push_back(matrix_json(a.at(i, j)));
        entries.push_back(std::move(row));
    }
    return json{{"kind", "qms"}, {"n", a.exterior_size()}, {"s", a.interior_size()}, {"entries", entries}};
}

QuantumMagicSquare parse_qms(const json& j) {
    const int n = int_at(field(j, "n", "qms"), "qms.n");
    const int s = int_at(field(j, "s", "qms"), "qms.s");
    if (n < 1 || s < 1)
        fail(errc::parse_error, "qms: sizes must be positive");
    const json& entries = field(j, "entries", "qms");
    expect_array(entries, static_cast<size_t>(n), "qms.entries");
    std::vector<CMatrix> grid;
    grid.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const std::string row_where = "qms.entries[" + std::to_string(i + 1) + "]";
        expect_array(entries[i], static_cast<size_t>(n), row_where);
        for (int c = 0; c < n; ++c)
            grid.push_back(parse_matrix(entries[i][c], s, s, row_where + "[" + std::to_string(c + 1) + "]"));
    }
    return QuantumMagicSquare(n, s, std::move(grid));
}

json qls_json(const QuantumLatinSquare& q) {
    json cells = json::array();
    for (int i = 0; i < q.size(); ++i) {
        json row = json::array();
        for (int j = 0; j < q.size(); ++j)
            row.push_back(vector_json(q.at(i, j)));
        cells.push_back(std::move(row));
    }
    return json{{"kind", "qls"}, {"n", q.size()}, {"cells", cells}};
}

QuantumLatinSquare parse_qls(const json& j) {
    const int n = int_at(field(j, "n", "qls"), "qls.n");
    if (n < 1)
        fail(errc::parse_error, "qls: n must be positive");
    const json& cells = field(j, "cells", "qls");
    expect_array(cells, static_cast<size_t>(n), "qls.cells");
    std::vector<CVector> grid;
    grid.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const std::string row_where = "qls.cells[" + std::to_string(i + 1) + "]";
        expect_array(cells[i], static_cast<size_t>(n), row_where);
        for (int c = 0; c < n; ++c)
            grid.push_back(parse_vector(cells[i][c], n, row_where + "[" + std::to_string(c + 1) + "]"));
    }
    return QuantumLatinSquare(n, std::move(grid));
}

json latin_json(const LatinSquare& l) {
    json cells = json::array();
    for (int i = 0; i < l.size(); ++i) {
        json row = json::array();
        for (int j = 0; j < l.size(); ++j)
            row.push_back(l.at(i, j));
        cells.push_back(std::move(row));
    }
    return json{{"kind", "latin"}, {"n", l.size()}, {"cells", cells}};
}

LatinSquare parse_latin(const json& j) {
    const int n = int_at(field(j, "n", "latin"), "latin.n");
    if (n < 1)
        fail(errc::parse_error, "latin: n must be positive");
    const json& cells = field(j, "cells", "latin");
    expect_array(cells, static_cast<size_t>(n), "latin.cells");
    std::vector<int> grid;
    grid.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const std::string row_where = "latin.cells[" + std::to_string(i + 1) + "]";
        expect_array(cells[i], static_cast<size_t>(n), row_where);
        for (int c = 0; c < n; ++c)
            grid.push_back(int_at(cells[i][c], row_where + "[" + std::to_string(c + 1) + "]"));
    }
    return LatinSquare(n, std::move(grid));
}

json basis_json(const BasisDoc& b) {
    json vectors = json::array();
    for (const CVector& v : b.vectors)
        vectors.push_back(vector_json(v));
    return json{{"kind", "basis"}, {"n", b.n}, {"vectors", vectors}};
}

BasisDoc parse_basis(const json& j) {
    BasisDoc b;
    b.n = int_at(field(j, "n", "basis"), "basis.n");
    if (b.n < 1)
        fail(errc::parse_error, "basis: n must be positive");
    const json& vectors = field(j, "vectors", "basis");
    expect_array(vectors, static_cast<size_t>(b.n), "basis.vectors");
    for (int k = 0; k < b.n; ++k)
        b.vectors.push_back(parse_vector(vectors[k], b.n, "basis.vectors[" + std::to_string(k + 1) + "]"));
    return b;
}

json povm_json(const PovmDoc& p) {
    json elements = json::array();
    for (const CMatrix& e : p.elements)
        elements.push_back(matrix_json(e));
    return json{{"kind", "povm"}, {"n", p.n}, {"s", p.s}, {"elements", elements}};
}

PovmDoc parse_povm(const json& j) {
    PovmDoc p;
    p.n = int_at(field(j, "n", "povm"), "povm.n");
    p.s = int_at(field(j, "s", "povm"), "povm.s");
    if (p.n < 1 || p.s < 1)
        fail(errc::parse_error, "povm: sizes must be positive");
    const json& elements = field(j, "elements", "povm");
    expect_array(elements, static_cast<size_t>(p.n), "povm.elements");
    for (int k = 0; k < p.n; ++k)
        p.elements.push_back(parse_matrix(elements[k], p.s, p.s, "povm.elements[" + std::to_string(k + 1) + "]"));
    return p;
}

json decomposition_json(const SemiclassicalDecomposition& d) {
    json terms = json::array();
    for (const auto& term : d.terms) {
        json perm = json::array();
        for (int v : term.perm.images())
            perm.push_back(v);
        terms.push_back(json{{"perm", perm}, {"q", matrix_json(term.q)}});
    }
    return json{{"kind", "decomposition"}, {"n", d.n}, {"s", d.s}, {"terms", terms}};
}

SemiclassicalDecomposition parse_decomposition(const json& j) {
    const int n = int_at(field(j, "n", "decomposition"), "decomposition.n");
    const int s = int_at(field(j, "s", "decomposition"), "decomposition.s");
    if (n < 1 || s < 1)
        fail(errc::parse_error, "decomposition: sizes must be positive");
    const json& terms = field(j, "terms", "decomposition");
    if (!terms.is_array())
        fail(errc::parse_error, "decomposition.terms: expected an array");
    std::vector<SemiclassicalDecomposition::Term> parsed;
    parsed.reserve(terms.size());
    int index = 0;
    for (const json& term : terms) {
        ++index;
        const std::string where = "decomposition.terms[" + std::to_string(index) + "]";
        const json& perm = field(term, "perm", where);
        expect_array(perm, static_cast<size_t>(n), where + ".perm");
        std::vector<int> images(n);
        for (int k = 0; k < n; ++k)
            images[k] = int_at(perm[k], where + ".perm[" + std::to_string(k + 1) + "]");
        CMatrix q = parse_matrix(field(term, "q", where), s, s, where + ".q");
        parsed.push_back({Permutation(std::move(images)), std::move(q)});
    }
    return SemiclassicalDecomposition(n, s, std::move(parsed));
}

json combination_json(const MatrixConvexCombination& c) {
    json terms = json::array();
    for (const auto& term : c.terms)
        terms.push_back(json{{"source", qms_json(term.source)}, {"v", matrix_json(term.contraction)}});
    return json{{"kind", "combination"}, {"n", c.n}, {"t", c.t}, {"terms", terms}};
}

MatrixConvexCombination parse_combination(const json& j) {
    MatrixConvexCombination c;
    c.n = int_at(field(j, "n", "combination"), "combination.n");
    c.t = int_at(field(j, "t", "combination"), "combination.t");
    if (c.n < 1 || c.t < 1)
        fail(errc::parse_error, "combination: sizes must be positive");
    const json& terms = field(j, "terms", "combination");
    if (!terms.is_array() || terms.empty())
        fail(errc::parse_error, "combination.terms: expected a nonempty array");
    int index = 0;
    for (const json& term : terms) {
        ++index;
        const std::string where = "combination.terms[" + std::to_string(index) + "]";
        QuantumMagicSquare source = parse_qms(field(term, "source", where));
        if (source.exterior_size() != c.n)
            fail(errc::parse_error, where + ".source: exterior size differs from the header");
        CMatrix v = parse_matrix(field(term, "v", where), source.interior_size(), c.t, where + ".v");
        c.terms.push_back({std::move(source), std::move(v)});
    }
    return c;
}

json bundle_json(const CounterexampleBundle& b) {
    MatrixConvexCombination compression;
    compression.n = b.n;
    compression.t = b.m;
    compression.terms.push_back({b.dilation, b.contraction});
    return json{{"kind", "bundle"},
                {"m", b.m},
                {"n", b.n},
                {"a", qms_json(b.a)},
                {"b", qms_json(b.b)},
                {"direct_sum", qms_json(b.direct_sum)},
                {"dilation", qms_json(b.dilation)},
                {"compression", combination_json(compression)}};
}

CounterexampleBundle parse_bundle(const json& j) {
    const int m = int_at(field(j, "m", "bundle"), "bundle.m");
    const int n = int_at(field(j, "n", "bundle"), "bundle.n");
    if (m < 2 || n != 2 * m)
        fail(errc::parse_error, "bundle: need m >= 2 and n = 2m");
    MatrixConvexCombination compression = parse_combination(field(j, "compression", "bundle"));
    if (compression.terms.size() != 1)
        fail(errc::parse_error, "bundle.compression: expected exactly one term");
    CounterexampleBundle b{m,
                           n,
                           parse_qms(field(j, "a", "bundle")),
                           parse_qms(field(j, "b", "bundle")),
                           parse_qms(field(j, "direct_sum", "bundle")),
                           parse_qms(field(j, "dilation", "bundle")),
                           compression.terms[0].contraction};
    if (b.a.exterior_size() != m || b.b.exterior_size() != m || b.direct_sum.exterior_size() != n ||
        b.dilation.exterior_size() != n)
        fail(errc::parse_error, "bundle: component sizes are inconsistent");
    return b;
}

} // namespace

json document_json(const Document& doc) {
    struct Visitor {
        json operator()(const QuantumMagicSquare& v) const { return qms_json(v); }
        json operator()(const QuantumLatinSquare& v) const { return qls_json(v); }
        json operator()(const LatinSquare& v) const { return latin_json(v); }
        json operator()(const BasisDoc& v) const { return basis_json(v); }
        json operator()(const PovmDoc& v) const { return povm_json(v); }
        json operator()(const SemiclassicalDecomposition& v) const { return decomposition_json(v); }
        json operator()(const MatrixConvexCombination& v) const { return combination_json(v); }
        json operator()(const CounterexampleBundle& v) const { return bundle_json(v); }
        json operator()(const json& v) const { return v; }
    };
    return std::visit(Visitor{}, doc.payload);
}

Document parse_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(errc::parse_error, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        fail(errc::parse_error, "document must be a JSON object");
    const json& kind = field(j, "kind", "document");
    if (!kind.is_string())
        fail(errc::parse_error, "document.kind must be a string");
    const std::string name = kind.get<std::string>();

    if (name == "qms")
        return Document{parse_qms(j)};
    if (name == "qls")
        return Document{parse_qls(j)};
    if (name == "latin")
        return Document{parse_latin(j)};
    if (name == "basis")
        return Document{parse_basis(j)};
    if (name == "povm")
        return Document{parse_povm(j)};
    if (name == "decomposition")
        return Document{parse_decomposition(j)};
    if (name == "combination")
        return Document{parse_combination(j)};
    if (name == "bundle")
        return Document{parse_bundle(j)};
    if (name == "report")
        return Document{j};
    fail(errc::parse_error, "unknown document kind \"" + name + "\"");
}

std::string serialize_document(const Document& doc) {
    return canonical_dump(document_json(doc)) + "\n";
}

Document read_document_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(errc::io_error, "cannot open \"" + path + "\" for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_document(buffer.str());
}

void write_document_file(const Document& doc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(errc::io_error, "cannot open \"" + path + "\" for writing");
    out << serialize_document(doc);
    if (!out)
        fail(errc::io_error, "failed writing \"" + path + "\"");
}

} // namespace magicsq
