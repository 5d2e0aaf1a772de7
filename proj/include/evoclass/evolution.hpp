#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "evoclass/algebra.hpp"

namespace evoclass {

/// Indices of nonzero coordinates.
std::vector<std::size_t> support(const Vec& z);

/// Every column of the structure matrix is nonzero; cross-checked against ann(A) = 0.
bool is_nondegenerate(const Algebra& a);
bool is_perfect(const Algebra& a);

enum class Verdict { Yes, No, Unknown };
const char* verdict_name(Verdict v);

enum class Naturality { Natural, NotNatural, Unknown };
Naturality is_natural_vector(const Algebra& a, const Vec& z);

enum class IdealCase { SpanOfTwoBasisVectors, EiPlusEjEk, EiEjPlusEjEk };
const char* ideal_case_name(IdealCase c);

struct IdealPosition {
    IdealCase kind;
    /// Rescaled natural basis (columns, designated coordinates). With f = basis columns:
    /// SpanOfTwoBasisVectors: I = span{f_i, f_j}; EiPlusEjEk: I = span{f_i, f_j + f_k};
    /// EiEjPlusEjEk: I = span{f_i + f_j, f_j + f_k}; (i, j, k) = idx.
    Matrix basis;
    std::array<std::size_t, 3> idx{};
    std::array<Scalar, 3> delta;
    /// Whether I with the induced product is an evolution algebra, when decided.
    std::optional<bool> evolution_ideal;
};
IdealPosition ideal_position(const Algebra& a, const Subspace& i);

struct ExtensionResult {
    bool holds = false;
    /// Natural basis (columns) whose first two vectors span the socle.
    std::optional<Matrix> basis;
};
/// Whether some natural basis contains a basis of the 2-dim ideal soc.
ExtensionResult extension_property(const Algebra& a, const Subspace& soc);

enum class SimpleType { NotSimple, TypeI, TypeII, TypeIII };
const char* simple_type_name(SimpleType t);

struct TwoDimSimple {
    SimpleType type = SimpleType::NotSimple;
    std::optional<Scalar> x, y;  ///< normal form [[a, y], [x, b]]
    Matrix normal;               ///< normal-form structure matrix
    Matrix basis;                ///< monomial basis change realizing the normal form
};
TwoDimSimple two_dim_simple_type(const Matrix& m);

/// Natural bases as column matrices, the designated basis first.
/// Over F_p (small) every ordered natural basis; over Q only the structured family when
/// the algebra is 3-dim, non-degenerate with dim A^2 = 2, or perfect. limit 0: all over F_p, 64 over Q.
std::vector<Matrix> natural_bases(const Algebra& a, std::size_t limit = 0);

struct EvolutionCheck {
    Verdict verdict = Verdict::Unknown;
    std::optional<Matrix> basis;  ///< a natural basis when verdict is Yes
    std::uint64_t candidates = 0;
};
EvolutionCheck is_evolution(const Algebra& a);

/// All isomorphisms between perfect algebras whose coordinate bases are natural.
/// These are monomial matrices, so the search is over permutations and scalings.
std::vector<Matrix> perfect_evolution_isomorphisms(const Algebra& a, const Algebra& b, std::size_t limit = SIZE_MAX);

/// Isomorphisms a -> b with a completeness flag (false when the set could not be enumerated).
struct IsoSet {
    bool complete = false;
    std::vector<Matrix> maps;
};
IsoSet enumerate_isomorphisms(const Algebra& a, const Algebra& b);

}  // namespace evoclass
