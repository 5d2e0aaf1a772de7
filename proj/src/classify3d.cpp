#include "evoclass/classify3d.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "evoclass/bruteforce.hpp"
#include "evoclass/error.hpp"

namespace evoclass {

namespace {

struct LabelName {
    CaseLabel label;
    const char* name;
};

constexpr LabelName kLabels[] = {
    {CaseLabel::Zero, "degenerate.zero"},
    {CaseLabel::NilpotentIndexThree, "degenerate.nilpotent_index3"},
    {CaseLabel::AnnLineDecomposable, "degenerate.ann_line.decomposable"},
    {CaseLabel::AnnLineIndecomposable, "degenerate.ann_line.indecomposable"},
    {CaseLabel::AnnLineSquareClass, "degenerate.ann_line.square_class"},
    {CaseLabel::AnnPlaneNilpotent, "degenerate.ann_plane.nilpotent"},
    {CaseLabel::AnnPlaneIdempotent, "degenerate.ann_plane.idempotent"},
    {CaseLabel::AnnLineAdjoined, "degenerate.ann_line.adjoined"},
    {CaseLabel::SocleSimple, "socle3.simple"},
    {CaseLabel::SocleSimplePlusLine, "socle3.simple_plus_line"},
    {CaseLabel::SocleThreeLines, "socle3.three_lines"},
    {CaseLabel::SocleMinimalPair, "socle2.minimal.pair"},
    {CaseLabel::SocleMinimalSingle, "socle2.minimal.single"},
    {CaseLabel::SocleMinimalPairWeighted, "socle2.minimal.pair_weighted"},
    {CaseLabel::SocleMinimalSingleWeighted, "socle2.minimal.single_weighted"},
    {CaseLabel::SocleSplit, "socle2.split"},
    {CaseLabel::SocleSplitWeighted, "socle2.split_weighted"},
    {CaseLabel::SocleDecomposable, "socle2.decomposable"},
    {CaseLabel::SocleMixedPosition, "socle2.mixed_position"},
    {CaseLabel::SocleOverlapPosition, "socle2.overlap_position"},
    {CaseLabel::SocleLineSquareNonzero, "socle1.square_nonzero"},
    {CaseLabel::SocleLineSquareZero, "socle1.square_zero"},
};

Error inconsistent(const std::string& what) { return Error(ErrorKind::InternalInconsistency, what); }

Matrix diag3(const FieldSpec& f, const Scalar& a, const Scalar& b, const Scalar& c) {
    Matrix m(f, 3, 3);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
}

Matrix columns(const FieldSpec& f, const std::vector<Vec>& cols) { return Matrix::from_columns(f, cols, 3); }

/// u / k where u^2 = k u with k != 0.
Vec idempotent_on_line(const Algebra& a, const Vec& g) {
    Vec sq = a.multiply(g, g);
    std::size_t r = support(g).at(0);
    Scalar k = sq[r] / g[r];
    if (k.is_zero() || !(sq == k * g)) throw inconsistent("socle line is not spanned by an idempotent");
    return k.inverse() * g;
}

/// Record the basis, the canonical structure matrix, and check that the basis is natural.
void set_matrix_leaf(ClassificationReport& r, const Matrix& basis) {
    Algebra c = r.source.change_basis(basis);
    if (!c.is_diagonal()) throw inconsistent("leaf basis is not natural");
    r.witness = basis;
    r.canonical_matrix = c.structure_matrix();
}

/// Au(B, phi, b0, k0) read off the basis (b1, b2, w) with span{b1, b2} an ideal.
void set_au_leaf(ClassificationReport& r, const Matrix& basis) {
    Algebra c = r.source.change_basis(basis);
    FieldSpec f = c.field();
    std::vector<Scalar> t;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k) t.push_back(c.c(i, j, k));
    Algebra b(f, 2, t);
    Matrix phi(f, 2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 2; ++k) phi(k, i) = c.c(2, i, k);
    Vec b0{c.c(2, 2, 0), c.c(2, 2, 1)};
    auto spec = AdjunctionSpec::au(b, phi, b0, c.c(2, 2, 2));
    if (!(build(spec) == c)) throw inconsistent("socle is not an ideal complemented by the extra vector");
    r.witness = basis;
    r.canonical_spec = spec;
    if (spec.k0.is_zero()) r.moduli_point = ModuliPoint::au(b, phi, b0, false);
}

void set_decomposition_leaf(ClassificationReport& r, const Decomposition& d) {
    r.witness = d.witness;
    r.canonical_spec = d.spec;
}

void classify_degenerate(ClassificationReport& r, const AnnSeriesReport& series) {
    const Algebra& a = r.source;
    FieldSpec f = a.field();
    Matrix sm = a.structure_matrix();
    std::vector<Vec> sq, u;
    std::vector<std::size_t> zero, live;
    for (std::size_t i = 0; i < 3; ++i) {
        sq.push_back(sm.col(i));
        u.push_back(unit_vec(f, 3, i));
        (is_zero(sq[i]) ? zero : live).push_back(i);
    }
    if (zero.size() != r.invariants.dim_ann) throw inconsistent("annihilator differs from the zero-square basis vectors");
    Scalar one = Scalar::one(f);
    std::size_t asi = series.asi;

    if (zero.size() == 3) {
        r.label = CaseLabel::Zero;
        set_matrix_leaf(r, Matrix::identity(f, 3));
        return;
    }
    if (asi == 3) {
        if (!nilpotency(a).nilpotent) throw inconsistent("asi 3 but not nilpotent");
        r.label = CaseLabel::NilpotentIndexThree;
        return;
    }
    if (asi == 2 && zero.size() == 1) {
        std::size_t rr = zero[0];
        if (series.chain.at(2).dim() == 2) {
            // One live index squares into the annihilator line, the other carries a nonzero
            // coefficient on itself.
            std::size_t s = 3, t = 3;
            for (std::size_t i : live) (support(sq[i]) == std::vector<std::size_t>{rr} ? s : t) = i;
            if (s == 3 || t == 3) throw inconsistent("second annihilator has no chain vector");
            Scalar lambda = sq[s][rr];
            Scalar delta = sq[t][t];
            if (delta.is_zero()) throw inconsistent("asi 2 with a nilpotent quotient direction");
            Vec f1 = sq[s], f2 = u[s];
            Vec f3 = u[t] + (sq[t][rr] / (lambda * delta)) * f1;
            Scalar beta = sq[t][s];
            if (beta.is_zero()) {
                r.label = CaseLabel::AnnLineDecomposable;
                set_matrix_leaf(r, columns(f, {f1, f2, delta.inverse() * f3}));
            } else {
                Scalar s3 = delta.inverse();
                Scalar s2 = beta * s3 * s3;
                r.label = CaseLabel::AnnLineIndecomposable;
                set_matrix_leaf(r, columns(f, {s2 * s2 * f1, s2 * f2, s3 * f3}));
            }
            return;
        }
        std::size_t s = live[0], t = live[1];
        Scalar alpha = sq[s][rr];
        r.label = CaseLabel::AnnLineSquareClass;
        set_matrix_leaf(r, columns(f, {sq[s], u[s], u[t]}));
        r.moduli_point = ModuliPoint::of_values(ActionId::SquareClass, {sq[t][rr] / alpha});
        return;
    }
    if (zero.size() == 2) {
        std::size_t t = live[0];
        if (asi == 2) {
            Vec f1 = sq[t];
            Vec f2 = Subspace::span(f, 3, {f1, u[zero[0]]}).dim() == 2 ? u[zero[0]] : u[zero[1]];
            r.label = CaseLabel::AnnPlaneNilpotent;
            set_matrix_leaf(r, columns(f, {f1, f2, u[t]}));
        } else {
            Scalar c = sq[t][t];
            Vec rest = sq[t] - c * u[t];
            Vec f3 = c.inverse() * (u[t] + c.inverse() * rest);
            r.label = CaseLabel::AnnPlaneIdempotent;
            set_matrix_leaf(r, columns(f, {u[zero[0]], u[zero[1]], f3}));
        }
        return;
    }
    if (asi == 1 && zero.size() == 1) {
        auto d = ad_decompose(a);
        r.label = CaseLabel::AnnLineAdjoined;
        set_decomposition_leaf(r, d);
        r.moduli_point = ModuliPoint::ad(d.spec.base, d.spec.form);
        return;
    }
    throw inconsistent("no degenerate leaf matches asi " + std::to_string(asi) + " and dim ann " + std::to_string(zero.size()));
}

void classify_full_socle(ClassificationReport& r, const SocleReport& soc) {
    const Algebra& a = r.source;
    FieldSpec f = a.field();
    const auto& mins = soc.minimal_ideals;
    if (mins.size() == 1) {
        r.label = CaseLabel::SocleSimple;
        set_matrix_leaf(r, Matrix::identity(f, 3));
        return;
    }
    if (mins.size() == 3) {
        std::vector<Vec> cols;
        for (const auto& m : mins) cols.push_back(idempotent_on_line(a, m.basis()[0]));
        r.label = CaseLabel::SocleThreeLines;
        set_matrix_leaf(r, columns(f, cols));
        return;
    }
    if (mins.size() != 2) throw inconsistent("full socle with an unexpected number of minimal ideals");
    const Subspace& plane = mins[0].dim() == 2 ? mins[0] : mins[1];
    const Subspace& line = mins[0].dim() == 2 ? mins[1] : mins[0];
    if (plane.dim() != 2 || line.dim() != 1) throw inconsistent("full socle summands have the wrong dimensions");
    // A perfect non-degenerate algebra has a unique natural basis up to scaling and order,
    // so the plane contains two coordinate vectors.
    std::vector<std::size_t> in_plane;
    for (std::size_t i = 0; i < 3; ++i)
        if (plane.contains(unit_vec(f, 3, i))) in_plane.push_back(i);
    if (in_plane.size() != 2) throw inconsistent("simple summand is not spanned by natural basis vectors");
    std::size_t i = in_plane[0], j = in_plane[1];
    Matrix sm = a.structure_matrix();
    Matrix m(f, 2, 2);
    m(0, 0) = sm(i, i);
    m(1, 0) = sm(j, i);
    m(0, 1) = sm(i, j);
    m(1, 1) = sm(j, j);
    auto t = two_dim_simple_type(m);
    if (t.type == SimpleType::NotSimple) throw inconsistent("two-dim minimal ideal is not simple");
    Matrix p2 = t.basis;
    if (t.type != SimpleType::TypeI) {
        // Scaling the first vector by y moves the normal form to [[0, 1], [x y^2, b]].
        for (std::size_t k = 0; k < 2; ++k) p2(k, 0) *= *t.y;
    }
    Vec b1 = zero_vec(f, 3), b2 = zero_vec(f, 3);
    b1[i] = p2(0, 0);
    b1[j] = p2(1, 0);
    b2[i] = p2(0, 1);
    b2[j] = p2(1, 1);
    r.label = CaseLabel::SocleSimplePlusLine;
    set_matrix_leaf(r, columns(f, {b1, b2, idempotent_on_line(a, line.basis()[0])}));
    if (t.type == SimpleType::TypeI) {
        Matrix n(f, 2, 2);
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y) n(x, y) = (*r.canonical_matrix)(x, y);
        r.moduli_point = ModuliPoint::of_matrix(ActionId::TypeISwap, n);
    }
}

Matrix block2(const Matrix& m) {
    Matrix out(m.field(), 2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) out(i, j) = m(i, j);
    return out;
}

void classify_extended_socle(ClassificationReport& r, const SocleReport& soc, const Matrix& basis) {
    const Algebra& a = r.source;
    FieldSpec f = a.field();
    Scalar one = Scalar::one(f);
    Matrix m = a.change_basis(basis).structure_matrix();
    if (!m(2, 0).is_zero() || !m(2, 1).is_zero()) throw inconsistent("socle is not spanned by the first two basis vectors");
    Scalar w = m(2, 2);
    bool weighted = !w.is_zero();
    if (soc.minimal_ideals.size() == 1) {
        Vec v{m(0, 2), m(1, 2)};
        Matrix p = basis;
        if (!v[0].is_zero() && !v[1].is_zero()) {
            p = basis * diag3(f, v[0], v[1], one);
            r.label = weighted ? CaseLabel::SocleMinimalPairWeighted : CaseLabel::SocleMinimalPair;
        } else {
            if (v[0].is_zero() && v[1].is_zero()) throw inconsistent("minimal socle with e3^2 outside the socle");
            if (v[0].is_zero()) {
                p = columns(f, {basis.col(1), basis.col(0), basis.col(2)});
                std::swap(v[0], v[1]);
                r.socle_swapped = true;
            }
            p = p * diag3(f, v[0], one, one);
            r.label = weighted ? CaseLabel::SocleMinimalSingleWeighted : CaseLabel::SocleMinimalSingle;
        }
        set_matrix_leaf(r, p);
        const Matrix& c = *r.canonical_matrix;
        ActionId id = r.label == CaseLabel::SocleMinimalPair           ? ActionId::SocleMinimalPair
                      : r.label == CaseLabel::SocleMinimalSingle       ? ActionId::SocleMinimalSingle
                      : r.label == CaseLabel::SocleMinimalPairWeighted ? ActionId::SocleMinimalPairWeighted
                                                                       : ActionId::SocleMinimalSingleWeighted;
        r.moduli_point = ModuliPoint::of_matrix(id, weighted ? c : block2(c));
        return;
    }
    if (soc.minimal_ideals.size() != 2) throw inconsistent("2-dim socle with an unexpected number of minimal ideals");
    Vec u1 = idempotent_on_line(a, soc.minimal_ideals[0].basis()[0]);
    Vec u2 = idempotent_on_line(a, soc.minimal_ideals[1].basis()[0]);
    r.label = weighted ? CaseLabel::SocleSplitWeighted : CaseLabel::SocleSplit;
    set_matrix_leaf(r, columns(f, {u1, u2, basis.col(2)}));
    const Matrix& c = *r.canonical_matrix;
    std::vector<Scalar> vals{c(0, 2), c(1, 2)};
    if (weighted) vals.push_back(c(2, 2));
    r.moduli_point = ModuliPoint::of_values(weighted ? ActionId::SocleSplitWeighted : ActionId::SocleSplit, vals);
}

/// Basis realizing K + C where C has n^2 = 0, e n = n, e^2 = n.
Matrix decomposable_basis(const Algebra& a, const SocleReport& soc) {
    FieldSpec f = a.field();
    Vec g0 = soc.minimal_ideals[0].basis()[0], g1 = soc.minimal_ideals[1].basis()[0];
    if (is_zero(a.multiply(g0, g0))) std::swap(g0, g1);
    Vec idem = idempotent_on_line(a, g0);
    Vec n0 = g1;
    if (!is_zero(a.multiply(n0, n0))) throw inconsistent("decomposable socle has no zero-square line");
    Subspace comp = Subspace::span(f, 3, nullspace(a.left_multiplication(idem)));
    if (comp.dim() != 2 || !comp.contains(n0)) throw inconsistent("idempotent line has no complementary ideal");
    Vec x;
    for (const auto& b : comp.basis())
        if (Subspace::span(f, 3, {n0, b}).dim() == 2) x = b;
    Vec xn = a.multiply(x, n0);
    std::size_t r = support(n0)[0];
    x = (n0[r] / xn[r]) * x;
    Vec xx = a.multiply(x, x);
    Scalar t = Scalar::zero(f);
    if (is_zero(xx)) {
        if (f.characteristic() == 2) throw inconsistent("no square root of the complement in characteristic 2");
        t = Scalar::from_int(f, 2).inverse();
    }
    Vec e = x + t * n0;
    Vec n = a.multiply(e, e);
    return columns(f, {idem, e, e - n});
}

void classify_nondegenerate(ClassificationReport& r) {
    const Algebra& a = r.source;
    FieldSpec f = a.field();
    SocleReport soc = socle(a);
    std::size_t d = soc.socle.dim();
    if (d == 3) return classify_full_socle(r, soc);
    if (d == 2) {
        auto ext = extension_property(a, soc.socle);
        if (ext.holds) return classify_extended_socle(r, soc, *ext.basis);
        auto pos = ideal_position(a, soc.socle);
        if (pos.kind == IdealCase::EiEjPlusEjEk) {
            // The position depends on the natural basis; prefer a mixed presentation when one exists.
            for (const auto& p : natural_bases(a)) {
                Matrix pinv = *inverse(p);
                std::vector<Vec> gens;
                for (const auto& v : soc.socle.basis()) gens.push_back(pinv.apply(v));
                auto other = ideal_position(a.change_basis(p), Subspace::span(f, 3, gens));
                if (other.kind == IdealCase::EiPlusEjEk) {
                    other.basis = p * other.basis;
                    pos = other;
                    break;
                }
            }
        }
        auto [i, j, k] = pos.idx;
        Vec fi = pos.basis.col(i), fj = pos.basis.col(j), fk = pos.basis.col(k);
        if (pos.kind == IdealCase::EiPlusEjEk) {
            if (soc.minimal_ideals.size() == 2) {
                r.label = CaseLabel::SocleDecomposable;
                set_matrix_leaf(r, decomposable_basis(a, soc));
                return;
            }
            r.label = CaseLabel::SocleMixedPosition;
            set_au_leaf(r, columns(f, {fi, fj + fk, fk}));
            return;
        }
        if (pos.kind == IdealCase::EiEjPlusEjEk) {
            if (soc.minimal_ideals.size() != 1) throw inconsistent("overlap position with a non-minimal socle");
            r.label = CaseLabel::SocleOverlapPosition;
            set_au_leaf(r, columns(f, {fi + fj, fj + fk, fk}));
            return;
        }
        throw inconsistent("socle spans two basis vectors but the extension property failed");
    }
    if (d == 1) {
        Vec g = soc.socle.basis()[0];
        if (!is_zero(a.multiply(g, g))) {
            r.label = CaseLabel::SocleLineSquareNonzero;
            set_decomposition_leaf(r, av_decompose(a));
        } else {
            auto dec = aw_decompose(a);
            r.label = CaseLabel::SocleLineSquareZero;
            set_decomposition_leaf(r, dec);
            r.moduli_point = ModuliPoint::aw(dec.spec.base, dec.spec.form, dec.spec.functional);
        }
        return;
    }
    throw inconsistent("non-degenerate algebra with zero socle");
}

bool fixed_leaf(CaseLabel c) {
    switch (c) {
        case CaseLabel::Zero:
        case CaseLabel::AnnLineDecomposable:
        case CaseLabel::AnnLineIndecomposable:
        case CaseLabel::AnnPlaneNilpotent:
        case CaseLabel::AnnPlaneIdempotent:
        case CaseLabel::SocleThreeLines:
        case CaseLabel::SocleDecomposable:
            return true;
        default:
            return false;
    }
}

}  // namespace

const char* case_label_name(CaseLabel c) {
    for (const auto& l : kLabels)
        if (l.label == c) return l.name;
    return "?";
}

CaseLabel parse_case_label(const std::string& s) {
    for (const auto& l : kLabels)
        if (s == l.name) return l.label;
    throw Error(ErrorKind::ParseError, "unknown case label '" + s + "'");
}

std::vector<CaseLabel> all_case_labels() {
    std::vector<CaseLabel> out;
    for (const auto& l : kLabels) out.push_back(l.label);
    return out;
}

Invariants3 invariants3(const Algebra& a) {
    Invariants3 inv;
    auto series = ann_series(a);
    inv.dim_ann = annihilator(a).dim();
    inv.asi = series.asi;
    inv.nondegenerate = is_nondegenerate(a);
    inv.perfect = is_perfect(a);
    inv.dim_square = square(a).dim();
    if (inv.nondegenerate) {
        auto soc = socle(a);
        inv.dim_soc = soc.socle.dim();
        inv.ssi = soc.ssi;
    }
    return inv;
}

Algebra ClassificationReport::canonical_algebra() const {
    if (canonical_matrix) return Algebra::evolution(*canonical_matrix);
    if (canonical_spec) return build(*canonical_spec);
    return source;
}

ClassificationReport classify(const Algebra& a) {
    if (a.dim() != 3) throw Error(ErrorKind::DimensionMismatch, "classify needs a 3-dim algebra");
    if (!a.is_diagonal()) throw Error(ErrorKind::NotEvolution, "coordinate basis is not natural");
    ClassificationReport r;
    r.source = a;
    r.invariants = invariants3(a);
    if (r.invariants.dim_ann > 0) classify_degenerate(r, ann_series(a));
    else classify_nondegenerate(r);
    if (r.witness) {
        if (det(*r.witness).is_zero() || !(a.change_basis(*r.witness) == r.canonical_algebra()))
            throw inconsistent(std::string("witness of ") + case_label_name(r.label) + " does not replay");
    }
    if (r.moduli_point) {
        const auto& x = *r.moduli_point;
        bool matrix_point = x.id != ActionId::SquareClass && x.id != ActionId::TypeISwap && !action_needs_base(x.id);
        if (matrix_point && !(structure_matrix(x) == *r.canonical_matrix))
            throw inconsistent("moduli point does not describe the canonical matrix");
    }
    return r;
}

namespace {

struct Comparison {
    Verdict verdict = Verdict::Unknown;
    const char* method = "unsupported";
};

Verdict of_bool(bool b) { return b ? Verdict::Yes : Verdict::No; }

Comparison compare_reports(const ClassificationReport& r1, const ClassificationReport& r2) {
    if (!(r1.source.field() == r2.source.field())) throw Error(ErrorKind::FieldMismatch, "reports over different fields");
    if (r1.label != r2.label) return {Verdict::No, "label"};
    if (fixed_leaf(r1.label)) {
        if (!(*r1.canonical_matrix == *r2.canonical_matrix)) throw inconsistent("fixed leaf with two canonical matrices");
        return {Verdict::Yes, "fixed"};
    }
    if (r1.canonical_spec) {
        if (r1.canonical_spec == r2.canonical_spec) return {Verdict::Yes, "equal"};
        auto d = adjunction_iso(*r1.canonical_spec, *r2.canonical_spec);
        return {d.verdict, d.method == "structural" ? "structural" : d.method == "brute_force" ? "brute_force" : "unsupported"};
    }
    if (r1.moduli_point || r2.moduli_point) {
        if (!r1.moduli_point || !r2.moduli_point) return {Verdict::No, "moduli"};
        return {same_orbit(*r1.moduli_point, *r2.moduli_point).verdict, "moduli"};
    }
    if (r1.label == CaseLabel::SocleSimple || r1.label == CaseLabel::SocleSimplePlusLine)
        return {of_bool(!perfect_evolution_isomorphisms(r1.canonical_algebra(), r2.canonical_algebra(), 1).empty()),
                "perfect_monomial"};
    if (r1.label == CaseLabel::NilpotentIndexThree) {
        if (r1.source == r2.source) return {Verdict::Yes, "equal"};
        if (!brute_force_supported(r1.source.field(), 3)) return {Verdict::Unknown, "unsupported"};
        return {of_bool(brute_force_iso(r1.source, r2.source).witness.has_value()), "brute_force"};
    }
    throw inconsistent(std::string("no comparison for ") + case_label_name(r1.label));
}

}  // namespace

Verdict canonical_equal(const ClassificationReport& r1, const ClassificationReport& r2) {
    return compare_reports(r1, r2).verdict;
}

std::vector<Matrix> all_structure_matrices(const FieldSpec& f) {
    if (!f.is_prime() || f.p > 3) throw Error(ErrorKind::Unsupported, "the structure-matrix sweep needs F_2 or F_3");
    std::vector<Matrix> out;
    for (const auto& v : all_vectors(f, 9)) {
        Matrix m(f, 3, 3);
        for (std::size_t i = 0; i < 9; ++i) m(i / 3, i % 3) = v[i];
        out.push_back(m);
    }
    return out;
}

Catalog catalog(const FieldSpec& f, std::size_t jobs) {
    Catalog c;
    c.field = f;
    c.matrices = all_structure_matrices(f);
    std::size_t n = c.matrices.size();
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    c.reports.resize(n);
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex fail_mu;
        for (std::size_t w = 0; w < jobs; ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next++) < n;) {
                    try {
                        c.reports[i] = classify(Algebra::evolution(c.matrices[i]));
                    } catch (...) {
                        std::lock_guard lock(fail_mu);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }
    // Partition each leaf independently; leaves run in parallel, members in index order.
    std::map<CaseLabel, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < n; ++i) by_label[c.reports[i].label].push_back(i);
    std::vector<std::pair<CaseLabel, std::vector<std::size_t>>> groups(by_label.begin(), by_label.end());
    struct Partial {
        std::vector<std::size_t> reps;
        std::vector<std::size_t> local;  ///< class position in reps for each member
        std::size_t unknown = 0;
        std::map<std::string, std::size_t> methods;
    };
    std::vector<Partial> parts(groups.size());
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex fail_mu;
        for (std::size_t w = 0; w < std::min(jobs, groups.size()); ++w)
            pool.emplace_back([&] {
                for (std::size_t g; (g = next++) < groups.size();) {
                    try {
                        Partial& p = parts[g];
                        for (std::size_t i : groups[g].second) {
                            std::size_t found = p.reps.size();
                            for (std::size_t k = 0; k < p.reps.size(); ++k) {
                                auto cmp = compare_reports(c.reports[i], c.reports[p.reps[k]]);
                                Verdict v = cmp.verdict;
                                ++p.methods[std::string(case_label_name(groups[g].first)) + ":" + cmp.method];
                                if (v == Verdict::Unknown) ++p.unknown;
                                if (v == Verdict::Yes) {
                                    found = k;
                                    break;
                                }
                            }
                            if (found == p.reps.size()) p.reps.push_back(i);
                            p.local.push_back(found);
                        }
                    } catch (...) {
                        std::lock_guard lock(fail_mu);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }
    // Number classes by their least member so the numbering is independent of the grouping.
    std::vector<std::pair<std::size_t, std::pair<std::size_t, std::size_t>>> order;
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t k = 0; k < parts[g].reps.size(); ++k) order.push_back({parts[g].reps[k], {g, k}});
    std::sort(order.begin(), order.end());
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    for (const auto& [rep, gk] : order) {
        index[gk] = c.classes.size();
        c.classes.push_back({c.reports[rep].label, rep, 0});
    }
    c.class_of.assign(n, 0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        c.leaf_counts[groups[g].first] = groups[g].second.size();
        c.unknown_comparisons += parts[g].unknown;
        for (const auto& [m, k] : parts[g].methods) c.comparison_methods[m] += k;
        for (std::size_t m = 0; m < groups[g].second.size(); ++m) {
            std::size_t cls = index[{g, parts[g].local[m]}];
            c.class_of[groups[g].second[m]] = cls;
            ++c.classes[cls].size;
        }
    }
    return c;
}

}  // namespace evoclass
