#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evoclass/adjunction.hpp"
#include "evoclass/algebra.hpp"
#include "evoclass/evolution.hpp"
#include "evoclass/moduli.hpp"

namespace evoclass {

/// Leaves of the classification tree for 3-dim evolution algebras.
enum class CaseLabel {
    Zero,                         ///< A^2 = 0
    NilpotentIndexThree,          ///< asi = 3
    AnnLineDecomposable,          ///< asi = 2, dim ann = 1, dim ann^(2) = 2, e3 idempotent
    AnnLineIndecomposable,        ///< asi = 2, dim ann = 1, dim ann^(2) = 2, e3^2 = e2 + e3
    AnnLineSquareClass,           ///< asi = 2, dim ann = 1, ann^(2) = A: e2^2 = e1, e3^2 = b e1
    AnnPlaneNilpotent,            ///< asi = 2, dim ann = 2
    AnnPlaneIdempotent,           ///< asi = 1, dim ann = 2
    AnnLineAdjoined,              ///< asi = 1, dim ann = 1: Ad(B, form)
    SocleSimple,                  ///< simple
    SocleSimplePlusLine,          ///< 2-dim simple ideal plus an idempotent line
    SocleThreeLines,              ///< K^3
    SocleMinimalPair,             ///< 2-dim minimal socle, e3^2 = e1 + e2
    SocleMinimalSingle,           ///< 2-dim minimal socle, e3^2 = e1
    SocleMinimalPairWeighted,     ///< 2-dim minimal socle, e3^2 = e1 + e2 + w e3
    SocleMinimalSingleWeighted,   ///< 2-dim minimal socle, e3^2 = e1 + w e3
    SocleSplit,                   ///< two idempotent lines, e3^2 = x e1 + y e2
    SocleSplitWeighted,           ///< two idempotent lines, e3^2 = x e1 + y e2 + z e3
    SocleDecomposable,            ///< 2-dim socle without the extension property, K + 2-dim
    SocleMixedPosition,           ///< soc = span{f_i, f_j + f_k}, minimal: Au(B, phi, b0, 0)
    SocleOverlapPosition,         ///< soc = span{f_i + f_j, f_j + f_k}: Au(B, phi, b0, 0)
    SocleLineSquareNonzero,       ///< dim soc = 1, soc^2 != 0: Av(B, form)
    SocleLineSquareZero,          ///< dim soc = 1, soc^2 = 0: Aw(B, form, f)
};
const char* case_label_name(CaseLabel c);
CaseLabel parse_case_label(const std::string& s);
std::vector<CaseLabel> all_case_labels();

struct Invariants3 {
    std::size_t dim_ann = 0;
    std::size_t asi = 0;
    std::optional<std::size_t> dim_soc;  ///< non-degenerate algebras only
    std::optional<std::size_t> ssi;
    bool nondegenerate = false;
    bool perfect = false;
    std::size_t dim_square = 0;

    friend bool operator==(const Invariants3&, const Invariants3&) = default;
};
Invariants3 invariants3(const Algebra& a);

struct ClassificationReport {
    Algebra source;
    Invariants3 invariants;
    CaseLabel label = CaseLabel::Zero;
    std::optional<Matrix> canonical_matrix;      ///< structure matrix of the canonical presentation
    std::optional<AdjunctionSpec> canonical_spec;
    std::optional<ModuliPoint> moduli_point;
    /// source.change_basis(*witness) equals the canonical algebra; absent for the nilpotent leaf.
    std::optional<Matrix> witness;
    /// Single-support socle leaves: e3^2 had its socle coordinate on the second vector, so the
    /// first two basis vectors were swapped before normalizing.
    bool socle_swapped = false;

    /// The canonical algebra (canonical matrix or built spec); the source for the nilpotent leaf.
    Algebra canonical_algebra() const;
};

/// Classify a 3-dim evolution algebra given in a natural basis. Every witness is replayed
/// before returning; a failed replay throws InternalInconsistency.
ClassificationReport classify(const Algebra& a);

/// Whether two reports describe isomorphic algebras, decided from the canonical data.
Verdict canonical_equal(const ClassificationReport& r1, const ClassificationReport& r2);

/// Every matrix of F_p^(3x3) (p <= 3) classified and partitioned by canonical_equal.
struct CatalogClass {
    CaseLabel label;
    std::size_t representative = 0;  ///< index into matrices
    std::size_t size = 0;
};
struct Catalog {
    FieldSpec field;
    std::vector<Matrix> matrices;  ///< lexicographic order of the entries
    std::vector<ClassificationReport> reports;
    std::vector<std::size_t> class_of;
    std::vector<CatalogClass> classes;
    std::map<CaseLabel, std::size_t> leaf_counts;
    std::size_t unknown_comparisons = 0;
    /// How the partition comparisons were decided: fixed, moduli, structural, brute_force, ...
    std::map<std::string, std::size_t> comparison_methods;
};
/// jobs = 0 uses the hardware concurrency. The result does not depend on jobs.
Catalog catalog(const FieldSpec& f, std::size_t jobs = 0);

/// All 3x3 matrices over F_p in lexicographic order of the row-major entries.
std::vector<Matrix> all_structure_matrices(const FieldSpec& f);

}  // namespace evoclass
