#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "construct.hpp"
#include "decompose.hpp"
#include "mconv.hpp"
#include "squares.hpp"

namespace magicsq {

// On-disk interchange: UTF-8 JSON, complex numbers as [re, im] pairs,
// 1-based indices, canonical serialization (sorted keys, 17 significant
// digits) so golden-file comparisons are byte-stable.
enum class DocKind { qms, qls, latin, basis, povm, decomposition, combination, report, bundle };

const char* dockind_name(DocKind kind);

struct BasisDoc {
    int n = 0;
    std::vector<CVector> vectors;
};

struct PovmDoc {
    int n = 0;
    int s = 0;
    std::vector<CMatrix> elements;
};

struct Document {
    using Payload = std::variant<QuantumMagicSquare, QuantumLatinSquare, LatinSquare, BasisDoc, PovmDoc,
                                 SemiclassicalDecomposition, MatrixConvexCombination, CounterexampleBundle,
                                 nlohmann::json>; // last: report
    Payload payload;

    DocKind kind() const;
};

Document parse_document(const std::string& text);
nlohmann::json document_json(const Document& doc);

// Canonical text: sorted keys, no whitespace, floats at 17 significant
// digits, zeros (including -0) printed as "0".
std::string canonical_dump(const nlohmann::json& j);
std::string serialize_document(const Document& doc); // canonical + trailing newline

Document read_document_file(const std::string& path);
void write_document_file(const Document& doc, const std::string& path);

/*
 * JSON fragments shared by the document kinds
 */

nlohmann::json complex_json(cplx v);
nlohmann::json matrix_json(const CMatrix& m);
nlohmann::json vector_json(const CVector& v);
cplx parse_complex(const nlohmann::json& j, const std::string& where);
CMatrix parse_matrix(const nlohmann::json& j, int rows, int cols, const std::string& where);
CVector parse_vector(const nlohmann::json& j, int dim, const std::string& where);

} // namespace magicsq
