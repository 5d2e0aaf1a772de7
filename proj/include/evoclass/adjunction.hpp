#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evoclass/algebra.hpp"
#include "evoclass/evolution.hpp"

namespace evoclass {

enum class AdjunctionTag { Ad, Au, Av, Aw };
const char* adjunction_tag_name(AdjunctionTag t);
AdjunctionTag parse_adjunction_tag(const std::string& s);

/// Data of a one-dimensional extension of a base algebra B.
///   Ad: (l, x)(l', x') = (form(x, x'), x x'), extra coordinate first.
///   Au: (b, l)(b', l') = (b b' + l' phi(b) + l phi(b') + l l' b0, l l' k0), extra coordinate last.
///   Av: (l, b)(l', b') = (l l' + form(b, b'), b b'), extra coordinate first.
///   Aw: (l, b)(l', b') = (form(b, b') + l f(b') + l' f(b), b b'), extra coordinate first.
struct AdjunctionSpec {
    AdjunctionTag tag = AdjunctionTag::Ad;
    Algebra base;
    Matrix form;     ///< Ad, Av, Aw: symmetric, diagonal for Ad
    Matrix phi;      ///< Au: endomorphism of B, columns are images
    Vec functional;  ///< Aw: values on the basis of B
    Vec b0;          ///< Au
    Scalar k0;       ///< Au

    static AdjunctionSpec ad(const Algebra& b, const Vec& diagonal);
    static AdjunctionSpec au(const Algebra& b, const Matrix& phi, const Vec& b0, const Scalar& k0);
    static AdjunctionSpec av(const Algebra& b, const Matrix& form);
    static AdjunctionSpec aw(const Algebra& b, const Matrix& form, const Vec& functional);

    /// Throws on shape errors, non-symmetric forms, and IncompatibleForm for Ad.
    void validate() const;
    friend bool operator==(const AdjunctionSpec&, const AdjunctionSpec&);
};

/// Coordinate of the adjoined direction in build(s): dim B for Au, 0 otherwise.
std::size_t extra_index(const AdjunctionSpec& s);
/// Embedding B -> build(s) as an (n+1) x n matrix.
Matrix base_embedding(const AdjunctionSpec& s);
Algebra build(const AdjunctionSpec& s);

/// a.change_basis(witness) == build(spec) holds exactly.
struct Decomposition {
    AdjunctionSpec spec;
    Matrix witness;
};
/// Requires a diagonal tensor with dim ann = 1.
Decomposition ad_decompose(const Algebra& a);
/// Requires a diagonal, non-degenerate tensor whose socle is a line with nonzero square.
Decomposition av_decompose(const Algebra& a);
/// Requires a diagonal, non-degenerate tensor whose socle is a line with zero square.
Decomposition aw_decompose(const Algebra& a);

struct IsoDecision {
    Verdict verdict = Verdict::Unknown;
    std::optional<Matrix> witness;   ///< build(s1) -> build(s2), columns are images
    std::optional<Matrix> base_map;  ///< induced B1 -> B2 when structural
    std::optional<Scalar> scale;
    std::string method;              ///< structural, invariant, brute_force or unsupported
};

IsoDecision ad_iso(const AdjunctionSpec& s1, const AdjunctionSpec& s2);
IsoDecision au_iso(const AdjunctionSpec& s1, const AdjunctionSpec& s2);
IsoDecision av_iso(const AdjunctionSpec& s1, const AdjunctionSpec& s2);
IsoDecision aw_iso(const AdjunctionSpec& s1, const AdjunctionSpec& s2);
/// Dispatch on the common tag; different tags fall back to brute force or Unknown.
IsoDecision adjunction_iso(const AdjunctionSpec& s1, const AdjunctionSpec& s2);

/// Transport data between symmetric forms on B1 and B2:
/// a2(beta x, beta y) = k a1(x, y) + t(x y). Used by ad_iso and the Ad moduli group.
struct FormTransport {
    Matrix beta;
    Scalar k;
    Vec t;
};
struct FormTransportSearch {
    Verdict verdict = Verdict::Unknown;
    std::optional<FormTransport> data;
};
FormTransportSearch ad_form_transport(const Algebra& b1, const Matrix& a1, const Algebra& b2, const Matrix& a2);

/// theta in Iso(B1, B2), c in B2 and k != 0 such that [[theta, c], [0, k]] is a homomorphism
/// build(s1) -> build(s2) of Au builds. This is the orbit relation of the Au moduli groups.
struct AuTransport {
    Matrix theta;
    Vec c;
    Scalar k;
};
struct AuTransportSearch {
    Verdict verdict = Verdict::Unknown;
    std::optional<AuTransport> data;
};
AuTransportSearch au_transport(const AdjunctionSpec& s1, const AdjunctionSpec& s2);

/// beta in Iso(B1, B2) with f2 beta = f1, k != 0 and a functional alpha with
/// <beta z, beta z'>_2 = k <z, z'>_1 + alpha(z z') - alpha(z) f1(z') - alpha(z') f1(z).
struct AwTransport {
    Matrix beta;
    Scalar k;
    Vec alpha;
};
struct AwTransportSearch {
    Verdict verdict = Verdict::Unknown;
    std::optional<AwTransport> data;
};
AwTransportSearch aw_transport(const AdjunctionSpec& s1, const AdjunctionSpec& s2);

/// No proper nonzero ideal of B is phi-invariant.
bool au_minimal_base(const Algebra& b, const Matrix& phi);
/// Some ideal of B of the given dimension is phi-invariant.
bool has_invariant_ideal(const Algebra& b, const Matrix& phi, std::size_t dim);

struct AuAnnihilatorProfile {
    Subspace ker_phi;
    Subspace ann_base_ker_phi;  ///< ann(B) meet ker(phi)
    Subspace ann;               ///< ann(build), in build coordinates
    /// b with phi = -L_b and b^2 = b0, when one exists.
    std::optional<Vec> root;
};
/// Requires k0 = 0. Cross-checks every structural statement relating the three subspaces.
AuAnnihilatorProfile au_annihilator_profile(const AdjunctionSpec& s);

/// Whether soc(build) = K x 0 for a non-degenerate Av build with nonzero form:
/// true iff no nonzero ideal of B lies in the radical of the form.
bool av_socle_check(const AdjunctionSpec& s);
/// The two conditions for soc(build) = K x 0 of a non-degenerate Aw build:
/// (1) no nonzero b in B^perp meet ker f with B b in K b;
/// (2) no nonzero b in ker f with z b = (f(z) + <z, b>) b for all z.
struct AwSocleConditions {
    bool first = false;
    bool second = false;
    bool holds() const { return first && second; }
};
AwSocleConditions aw_socle_conditions(const AdjunctionSpec& s);
bool aw_socle_check(const AdjunctionSpec& s);

}  // namespace evoclass
