#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "evoclass/adjunction.hpp"
#include "evoclass/algebra.hpp"
#include "evoclass/evolution.hpp"

namespace evoclass {

/// Group actions whose orbits parametrize isomorphism classes.
///
/// The six socle actions classify 3-dim algebras with a 2-dim socle spanned by two natural
/// basis vectors. "Minimal" means the socle is a minimal ideal with structure matrix M in W
/// (invertible, nonzero off-diagonal entries); "Split" means two idempotent lines. "Pair" and
/// "Single" refer to the support of e3^2 inside the socle; "Weighted" means e3^2 has a nonzero
/// e3-coordinate w.
enum class ActionId {
    SquareClass,                 ///< nonzero squares acting on K^x by multiplication
    MonomialPlane,               ///< diagonal matrices and the swap acting on K^2 \ 0
    SocleMinimalPair,            ///< (l square, i): M -> l E^i M E^i
    SocleMinimalSingle,          ///< (a square, b): M -> diag(a, b) M diag(a^-2, b^-2)
    SocleMinimalPairWeighted,    ///< (l, i): (M, w) -> (l^2 E^i M E^i, l w)
    SocleMinimalSingleWeighted,  ///< (a, b): (M, w) -> (diag(a^2, b) M diag(a^-4, b^-2), w / a)
    SocleSplit,                  ///< (l square, i): v -> l v E^i
    SocleSplitWeighted,          ///< (l, i): (x, y, z) -> (l^2 swap^i(x, y), l z)
    TypeISwap,                   ///< [[1, x], [y, 1]] -> [[1, y], [x, 1]]
    AdGroup,                     ///< (theta, k, T) on symmetric forms of B
    AuGroupK0,                   ///< (theta, c, k) on End(B) x B, extra square k0 = 0
    AuGroupK1,                   ///< (theta, c) on End(B) x B, extra square k0 = 1
    AwGroup,                     ///< (beta, k, alpha) on symmetric forms of B, functional fixed
};
const char* action_name(ActionId id);
ActionId parse_action(const std::string& s);
std::vector<ActionId> all_actions();
/// The action needs a base algebra (and for AwGroup a functional).
bool action_needs_base(ActionId id);

/// A point of the set acted on.
///   SquareClass: [x]; MonomialPlane, SocleSplit: [x, y]; SocleSplitWeighted: [x, y, z];
///   SocleMinimalPair, SocleMinimalSingle, TypeISwap: 2x2 row-major;
///   SocleMinimalPairWeighted, SocleMinimalSingleWeighted: 3x3 row-major [[M, v], [0, 0, w]]
///   with v = (1, 1) resp. (1, 0);
///   AdGroup, AwGroup: n x n symmetric form row-major; AuGroupK*: phi row-major, then b0.
struct ModuliPoint {
    ActionId id = ActionId::SquareClass;
    std::vector<Scalar> values;
    std::optional<Algebra> base;
    Vec functional;  ///< AwGroup

    FieldSpec field() const;
    /// Square matrix payloads (2x2, 3x3, forms); the phi block for AuGroupK*.
    Matrix matrix() const;
    /// b0 for AuGroupK*.
    Vec b0() const;

    static ModuliPoint of_values(ActionId id, std::vector<Scalar> values);
    static ModuliPoint of_matrix(ActionId id, const Matrix& m);
    static ModuliPoint ad(const Algebra& b, const Matrix& form);
    static ModuliPoint au(const Algebra& b, const Matrix& phi, const Vec& b0, bool k0_one);
    static ModuliPoint aw(const Algebra& b, const Matrix& form, const Vec& functional);

    friend bool operator==(const ModuliPoint&, const ModuliPoint&);
};

/// Throws ShapeMismatch or InvalidArgument when the payload is outside the point set.
void validate(const ModuliPoint& x);

/// Group element. Scalars per action:
///   SquareClass [l]; MonomialPlane [a, b] (v -> E^flip diag(a, b) v); SocleMinimalPair,
///   SocleSplit, SocleMinimalPairWeighted, SocleSplitWeighted [l]; SocleMinimalSingle,
///   SocleMinimalSingleWeighted [a, b]; TypeISwap none; AdGroup, AuGroupK0, AwGroup [k];
///   AuGroupK1 none. map is theta (or beta) in Aut(B); shift is T, c or alpha.
struct GroupElement {
    std::vector<Scalar> scalars;
    bool flip = false;
    Matrix map;
    Vec shift;

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// Throws InvalidGroupElement when g is not in the group acting on the set of x.
void validate(const GroupElement& g, const ModuliPoint& x);

ModuliPoint act(const GroupElement& g, const ModuliPoint& x);
/// g h, so that act(g h, x) = act(g, act(h, x)). The context point fixes the field and shapes.
GroupElement compose(const GroupElement& g, const GroupElement& h, const ModuliPoint& context);
GroupElement identity_element(const ModuliPoint& context);
GroupElement inverse(const GroupElement& g, const ModuliPoint& context);

struct OrbitDecision {
    Verdict verdict = Verdict::Unknown;
    std::optional<GroupElement> witness;  ///< act(witness, x) == y
};
/// Throws ShapeMismatch when x and y live in different sets.
OrbitDecision same_orbit(const ModuliPoint& x, const ModuliPoint& y);

/// The point set and the group over F_p. The context supplies the base and functional.
std::vector<ModuliPoint> all_points(ActionId id, const FieldSpec& f, const ModuliPoint* context = nullptr);
std::vector<GroupElement> all_elements(ActionId id, const FieldSpec& f, const ModuliPoint* context = nullptr);

struct OrbitCount {
    std::size_t count = 0;
    std::vector<ModuliPoint> representatives;  ///< lexicographically least point of each orbit
    std::vector<std::size_t> orbit_of;         ///< orbit index of each point of all_points
};
/// Exhaustive orbit partition over F_p; Unsupported over Q.
OrbitCount orbit_count(ActionId id, const FieldSpec& f, const ModuliPoint* context = nullptr);

/// Random elements and points; the context supplies the base and functional.
GroupElement random_element(ActionId id, const FieldSpec& f, std::mt19937_64& rng, const ModuliPoint* context = nullptr);
ModuliPoint random_point(ActionId id, const FieldSpec& f, std::mt19937_64& rng, const ModuliPoint* context = nullptr);

/// Structure matrix of the algebra classified by a point of the socle actions or TypeISwap.
Matrix structure_matrix(const ModuliPoint& x);
/// The adjunction data of a point of AuGroupK* or AwGroup, or AdGroup with a diagonal form.
AdjunctionSpec adjunction_spec(const ModuliPoint& x);

}  // namespace evoclass
