#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "evoclass/adjunction.hpp"
#include "evoclass/algebra.hpp"
#include "evoclass/classify3d.hpp"
#include "evoclass/moduli.hpp"

namespace evoclass {

using json = nlohmann::ordered_json;

/// {"kind": "Q"} or {"kind": "Fp", "p": 5}; also accepts the strings "q", "f5", "F5".
FieldSpec parse_field(const json& j);
FieldSpec parse_field_name(const std::string& s);
json field_json(const FieldSpec& f);

json scalar_json(const Scalar& s);
json vec_json(const Vec& v);
json matrix_json(const Matrix& m);  ///< rows of scalar strings
Scalar parse_scalar(const FieldSpec& f, const json& j, const std::string& where);
Vec parse_vec(const FieldSpec& f, const json& j, const std::string& where);
Matrix parse_matrix(const FieldSpec& f, const json& j, const std::string& where);
json subspace_json(const Subspace& s);

/// Algebra file:
///   {"field": ..., "dim": n, "convention": "columns-are-squares",
///    "structure_matrix": [[...]]}                   evolution algebras
///   {"field": ..., "dim": n, "general_tensor": [[[...]]]}   e_i e_j = general_tensor[i][j]
/// A field override replaces the declared field; rational entries are reduced into it.
Algebra parse_algebra(const json& j, const std::optional<FieldSpec>& field_override = std::nullopt);
Algebra parse_algebra_text(const std::string& text, const std::optional<FieldSpec>& field_override = std::nullopt);
json algebra_json(const Algebra& a);

AdjunctionSpec parse_adjunction_spec(const json& j, const std::optional<FieldSpec>& field_override = std::nullopt);
json adjunction_spec_json(const AdjunctionSpec& s);

/// {"action": id, "field": ..., "values": [...], "base": algebra, "functional": [...]};
/// the action may also be given separately.
ModuliPoint parse_moduli_point(const json& j, std::optional<ActionId> action = std::nullopt,
                               const std::optional<FieldSpec>& field_override = std::nullopt);
json moduli_point_json(const ModuliPoint& x);
json group_element_json(const GroupElement& g);

json invariants_json(const Algebra& a);
json report_json(const ClassificationReport& r);

/// Isomorphism decision: brute force where supported, else classification for 3-dim
/// evolution algebras, else verdict Unknown with method "unsupported".
json iso_json(const Algebra& a, const Algebra& b);
/// Catalog summary and class table; verify adds the brute-force partition comparison.
json catalog_json(const Catalog& c, bool verify);

/// Whole file contents; ParseError when the file cannot be opened.
std::string read_file(const std::string& path);

}  // namespace evoclass
