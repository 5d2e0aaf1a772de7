#include "evoclass/adjunction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "evoclass/bruteforce.hpp"

namespace evoclass {

const char* adjunction_tag_name(AdjunctionTag t) {
    switch (t) {
    case AdjunctionTag::Ad: return "Ad";
    case AdjunctionTag::Au: return "Au";
    case AdjunctionTag::Av: return "Av";
    case AdjunctionTag::Aw: return "Aw";
    }
    return "?";
}

AdjunctionTag parse_adjunction_tag(const std::string& s) {
    if (s == "Ad") return AdjunctionTag::Ad;
    if (s == "Au") return AdjunctionTag::Au;
    if (s == "Av") return AdjunctionTag::Av;
    if (s == "Aw") return AdjunctionTag::Aw;
    throw Error(ErrorKind::ParseError, "unknown adjunction tag '" + s + "'");
}

namespace {

bool is_symmetric(const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (!(m(i, j) == m(j, i))) return false;
    return true;
}

bool is_diagonal_matrix(const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j && !m(i, j).is_zero()) return false;
    return true;
}

void check_matrix(const Matrix& m, const FieldSpec& f, std::size_t r, std::size_t c, const char* what) {
    if (m.rows() != r || m.cols() != c) throw Error(ErrorKind::ShapeMismatch, std::string(what) + " has the wrong shape");
    if (r > 0 && c > 0 && !(m.field() == f)) throw Error(ErrorKind::FieldMismatch, std::string(what) + " over another field");
}

void check_vec(const Vec& v, const FieldSpec& f, std::size_t n, const char* what) {
    if (v.size() != n) throw Error(ErrorKind::ShapeMismatch, std::string(what) + " has the wrong length");
    for (const auto& x : v)
        if (!(x.field() == f)) throw Error(ErrorKind::FieldMismatch, std::string(what) + " over another field");
}

Matrix gram(const Matrix& form, const Matrix& beta) { return beta.transpose() * form * beta; }

Subspace span_of(const FieldSpec& f, std::size_t n, const std::vector<Vec>& gens) { return Subspace::span(f, n, gens); }

Subspace kernel(const Matrix& m) { return Subspace::span(m.field(), m.cols(), nullspace(m)); }

Matrix row_matrix(const Vec& v, const FieldSpec& f) { return Matrix::from_rows(f, {v}, v.size()); }

/// y in K x for nonzero x.
bool in_line(const Vec& x, const Vec& y) {
    std::size_t p = 0;
    while (x[p].is_zero()) ++p;
    Scalar r = y[p] / x[p];
    return y == r * x;
}

std::vector<Vec> coordinate_points(const FieldSpec& f, std::size_t s, bool projective) {
    std::vector<Vec> out;
    for (const auto& c : all_vectors(f, s)) {
        if (is_zero(c)) continue;
        if (projective) {
            std::size_t p = 0;
            while (c[p].is_zero()) ++p;
            if (!c[p].is_one()) continue;
        }
        out.push_back(c);
    }
    return out;
}

Vec combine(const std::vector<Vec>& basis, const Vec& coords, const FieldSpec& f, std::size_t n) {
    Vec x = zero_vec(f, n);
    for (std::size_t i = 0; i < basis.size(); ++i) x = x + coords[i] * basis[i];
    return x;
}

bool enumerable(const FieldSpec& f, std::size_t s) {
    if (!f.is_prime()) return false;
    double size = std::pow(double(f.p), double(s));
    return size <= 2e5;
}

/// Projective roots (s1 : s2) of a s1^2 + b s1 s2 + c s2^2, not identically zero.
std::vector<std::pair<Scalar, Scalar>> binary_roots(const Scalar& a, const Scalar& b, const Scalar& c) {
    FieldSpec f = a.field();
    Scalar one = Scalar::one(f), zero = Scalar::zero(f);
    std::vector<std::pair<Scalar, Scalar>> out;
    if (a.is_zero()) {
        out.push_back({one, zero});
        if (!b.is_zero()) out.push_back({-c / b, one});
        return out;
    }
    Scalar disc = b * b - Scalar::from_int(f, 4) * a * c;
    if (f.characteristic() == 2) {
        for (const auto& t : elements(f))
            if ((a * t * t + b * t + c).is_zero()) out.push_back({t, one});
        return out;
    }
    auto s = sqrt(disc);
    if (!s) return out;
    Scalar two_a = Scalar::from_int(f, 2) * a;
    out.push_back({(-b + *s) / two_a, one});
    if (!s->is_zero()) out.push_back({(-b - *s) / two_a, one});
    return out;
}

struct LineSet {
    bool all = false;          ///< every line of the subspace qualifies
    std::vector<Vec> lines;    ///< listed representatives (empty when all over Q)
};

/// Lines K x inside span(basis) with M x in K x for every M.
LineSet invariant_lines(const FieldSpec& f, std::size_t n, const std::vector<Vec>& basis, const std::vector<Matrix>& mats) {
    LineSet r;
    std::size_t s = basis.size();
    if (s == 0) return r;
    auto good = [&](const Vec& x) {
        return std::all_of(mats.begin(), mats.end(), [&](const Matrix& m) { return in_line(x, m.apply(x)); });
    };
    if (enumerable(f, s)) {
        auto pts = coordinate_points(f, s, true);
        for (const auto& c : pts) {
            Vec x = combine(basis, c, f, n);
            if (good(x)) r.lines.push_back(x);
        }
        r.all = r.lines.size() == pts.size();
        return r;
    }
    if (s == 1) {
        if (good(basis[0])) {
            r.lines.push_back(basis[0]);
            r.all = true;
        }
        return r;
    }
    if (s != 2) throw Error(ErrorKind::Unsupported, "line search in a subspace of dimension > 2 over Q");
    Scalar one = Scalar::one(f), zero = Scalar::zero(f);
    auto point = [&](const Scalar& s1, const Scalar& s2) { return s1 * basis[0] + s2 * basis[1]; };
    for (const auto& m : mats) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                auto minor = [&](const Vec& x) {
                    Vec y = m.apply(x);
                    return x[a] * y[b] - x[b] * y[a];
                };
                Scalar qa = minor(point(one, zero)), qc = minor(point(zero, one));
                Scalar qb = minor(point(one, one)) - qa - qc;
                if (qa.is_zero() && qb.is_zero() && qc.is_zero()) continue;
                for (const auto& [s1, s2] : binary_roots(qa, qb, qc)) {
                    Vec x = point(s1, s2);
                    if (good(x)) r.lines.push_back(x);
                }
                return r;
            }
    }
    r.all = true;
    return r;
}

std::vector<Matrix> left_multiplications(const Algebra& b) {
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < b.dim(); ++i) out.push_back(b.left_multiplication(unit_vec(b.field(), b.dim(), i)));
    return out;
}

/// A solution of the affine system with first coordinate nonzero.
std::optional<Vec> nonzero_scale_solution(const Matrix& m, const Vec& rhs) {
    auto sol = solve_affine(m, rhs);
    if (!sol) return std::nullopt;
    if (!sol->particular[0].is_zero()) return sol->particular;
    for (const auto& d : sol->directions)
        if (!d[0].is_zero()) return sol->particular + d;
    return std::nullopt;
}

Algebra base_from(const Algebra& c, std::size_t offset, std::size_t n) {
    std::vector<Scalar> t;
    t.reserve(n * n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) t.push_back(c.c(offset + i, offset + j, offset + k));
    return Algebra(c.field(), n, t);
}

void verify_decomposition(const Algebra& a, const Decomposition& d) {
    if (!(a.change_basis(d.witness) == build(d.spec)))
        throw Error(ErrorKind::InternalInconsistency, "decomposition does not rebuild the algebra");
}

IsoDecision fallback(const AdjunctionSpec& s1, const AdjunctionSpec& s2) {
    IsoDecision r;
    Algebra a1 = build(s1), a2 = build(s2);
    if (a1.dim() == a2.dim() && brute_force_supported(a1.field(), a1.dim())) {
        auto bf = brute_force_iso(a1, a2);
        r.method = "brute_force";
        r.verdict = bf.witness ? Verdict::Yes : Verdict::No;
        r.witness = bf.witness;
        return r;
    }
    r.method = "unsupported";
    return r;
}

IsoDecision accept(const AdjunctionSpec& s1, const AdjunctionSpec& s2, Matrix w, Matrix beta, Scalar k) {
    if (!build(s1).is_homomorphism(w, build(s2)) || det(w).is_zero())
        throw Error(ErrorKind::InternalInconsistency, "isomorphism witness does not replay");
    IsoDecision r;
    r.verdict = Verdict::Yes;
    r.witness = std::move(w);
    r.base_map = std::move(beta);
    r.scale = std::move(k);
    r.method = "structural";
    return r;
}

IsoDecision decided_no(const char* method) {
    IsoDecision r;
    r.verdict = Verdict::No;
    r.method = method;
    return r;
}

void require_tag(const AdjunctionSpec& s, AdjunctionTag t) {
    if (s.tag != t) throw Error(ErrorKind::InvalidArgument, std::string("expected an ") + adjunction_tag_name(t) + " spec");
}

void require_compatible(const AdjunctionSpec& s1, const AdjunctionSpec& s2) {
    if (!(s1.base.field() == s2.base.field())) throw Error(ErrorKind::FieldMismatch, "specs over different fields");
}

/// Block matrix with the extra coordinate first: [[k, row], [0, beta]].
Matrix extra_first(const Scalar& k, const Vec& row, const Matrix& beta) {
    std::size_t n = beta.rows();
    Matrix w(beta.field(), n + 1, n + 1);
    w(0, 0) = k;
    for (std::size_t j = 0; j < n; ++j) {
        w(0, j + 1) = row[j];
        for (std::size_t i = 0; i < n; ++i) w(i + 1, j + 1) = beta(i, j);
    }
    return w;
}

}  // namespace

AdjunctionSpec AdjunctionSpec::ad(const Algebra& b, const Vec& diagonal) {
    AdjunctionSpec s;
    s.tag = AdjunctionTag::Ad;
    s.base = b;
    check_vec(diagonal, b.field(), b.dim(), "form diagonal");
    s.form = Matrix(b.field(), b.dim(), b.dim());
    for (std::size_t i = 0; i < b.dim(); ++i) s.form(i, i) = diagonal[i];
    s.validate();
    return s;
}

AdjunctionSpec AdjunctionSpec::au(const Algebra& b, const Matrix& phi, const Vec& b0, const Scalar& k0) {
    AdjunctionSpec s;
    s.tag = AdjunctionTag::Au;
    s.base = b;
    s.phi = phi;
    s.b0 = b0;
    s.k0 = k0;
    s.validate();
    return s;
}

AdjunctionSpec AdjunctionSpec::av(const Algebra& b, const Matrix& form) {
    AdjunctionSpec s;
    s.tag = AdjunctionTag::Av;
    s.base = b;
    s.form = form;
    s.validate();
    return s;
}

AdjunctionSpec AdjunctionSpec::aw(const Algebra& b, const Matrix& form, const Vec& functional) {
    AdjunctionSpec s;
    s.tag = AdjunctionTag::Aw;
    s.base = b;
    s.form = form;
    s.functional = functional;
    s.validate();
    return s;
}

void AdjunctionSpec::validate() const {
    FieldSpec f = base.field();
    std::size_t n = base.dim();
    switch (tag) {
    case AdjunctionTag::Ad:
        check_matrix(form, f, n, n, "form");
        if (!base.is_diagonal()) throw Error(ErrorKind::NotEvolution, "Ad needs a natural coordinate basis of B");
        if (!is_diagonal_matrix(form)) throw Error(ErrorKind::IncompatibleForm, "form is not diagonal in the natural basis");
        break;
    case AdjunctionTag::Au:
        check_matrix(phi, f, n, n, "phi");
        check_vec(b0, f, n, "b0");
        if (!(k0.field() == f)) throw Error(ErrorKind::FieldMismatch, "k0 over another field");
        break;
    case AdjunctionTag::Av:
        check_matrix(form, f, n, n, "form");
        if (!is_symmetric(form)) throw Error(ErrorKind::InvalidArgument, "form is not symmetric");
        break;
    case AdjunctionTag::Aw:
        check_matrix(form, f, n, n, "form");
        if (!is_symmetric(form)) throw Error(ErrorKind::InvalidArgument, "form is not symmetric");
        check_vec(functional, f, n, "functional");
        break;
    }
}

bool operator==(const AdjunctionSpec& a, const AdjunctionSpec& b) {
    if (a.tag != b.tag || !(a.base == b.base)) return false;
    switch (a.tag) {
    case AdjunctionTag::Ad:
    case AdjunctionTag::Av: return a.form == b.form;
    case AdjunctionTag::Au: return a.phi == b.phi && a.b0 == b.b0 && a.k0 == b.k0;
    case AdjunctionTag::Aw: return a.form == b.form && a.functional == b.functional;
    }
    return false;
}

std::size_t extra_index(const AdjunctionSpec& s) { return s.tag == AdjunctionTag::Au ? s.base.dim() : 0; }

Matrix base_embedding(const AdjunctionSpec& s) {
    std::size_t n = s.base.dim(), off = s.tag == AdjunctionTag::Au ? 0 : 1;
    Matrix m(s.base.field(), n + 1, n);
    for (std::size_t i = 0; i < n; ++i) m(i + off, i) = Scalar::one(s.base.field());
    return m;
}

Algebra build(const AdjunctionSpec& s) {
    s.validate();
    FieldSpec f = s.base.field();
    std::size_t n = s.base.dim(), m = n + 1;
    std::size_t x = extra_index(s), off = s.tag == AdjunctionTag::Au ? 0 : 1;
    std::vector<Scalar> t(m * m * m, Scalar::zero(f));
    auto set = [&](std::size_t i, std::size_t j, const Vec& v) {
        for (std::size_t k = 0; k < m; ++k) {
            t[(i * m + j) * m + k] = v[k];
            t[(j * m + i) * m + k] = v[k];
        }
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Vec v = zero_vec(f, m);
            for (std::size_t k = 0; k < n; ++k) v[k + off] = s.base.c(i, j, k);
            if (s.tag != AdjunctionTag::Au) v[x] = s.form(i, j);
            set(i + off, j + off, v);
        }
    Vec ext = zero_vec(f, m);
    switch (s.tag) {
    case AdjunctionTag::Ad: break;
    case AdjunctionTag::Au:
        for (std::size_t i = 0; i < n; ++i) {
            Vec v = zero_vec(f, m);
            for (std::size_t k = 0; k < n; ++k) v[k] = s.phi(k, i);
            set(i, x, v);
        }
        for (std::size_t k = 0; k < n; ++k) ext[k] = s.b0[k];
        ext[x] = s.k0;
        break;
    case AdjunctionTag::Av: ext[x] = Scalar::one(f); break;
    case AdjunctionTag::Aw:
        for (std::size_t i = 0; i < n; ++i) {
            Vec v = zero_vec(f, m);
            v[x] = s.functional[i];
            set(x, i + off, v);
        }
        break;
    }
    set(x, x, ext);
    return Algebra(f, m, t);
}

Decomposition ad_decompose(const Algebra& a) {
    if (!a.is_diagonal()) throw Error(ErrorKind::NotEvolution, "coordinate basis is not natural");
    if (annihilator(a).dim() != 1) throw Error(ErrorKind::PreconditionViolated, "ad_decompose needs dim ann = 1");
    FieldSpec f = a.field();
    std::size_t n = a.dim(), r = 0;
    while (!is_zero(a.basis_product(r, r))) ++r;
    std::vector<Vec> cols{unit_vec(f, n, r)};
    for (std::size_t i = 0; i < n; ++i)
        if (i != r) cols.push_back(unit_vec(f, n, i));
    Matrix w = Matrix::from_columns(f, cols, n);
    Algebra c = a.change_basis(w);
    Algebra b = base_from(c, 1, n - 1);
    Vec d;
    for (std::size_t i = 0; i < n - 1; ++i) d.push_back(c.c(i + 1, i + 1, 0));
    Decomposition out{AdjunctionSpec::ad(b, d), w};
    verify_decomposition(a, out);
    if (ann_series(a).asi == 1 && annihilator(b).dim() != 0)
        throw Error(ErrorKind::InternalInconsistency, "asi 1 but the base has a nonzero annihilator");
    return out;
}

Decomposition av_decompose(const Algebra& a) {
    if (!a.is_diagonal()) throw Error(ErrorKind::NotEvolution, "coordinate basis is not natural");
    if (!is_nondegenerate(a)) throw Error(ErrorKind::PreconditionViolated, "av_decompose needs a non-degenerate algebra");
    Subspace soc = socle(a).socle;
    if (soc.dim() != 1) throw Error(ErrorKind::PreconditionViolated, "av_decompose needs a one-dimensional socle");
    FieldSpec f = a.field();
    std::size_t n = a.dim();
    Vec e = soc.basis()[0];
    Vec sq = a.multiply(e, e);
    if (is_zero(sq)) throw Error(ErrorKind::PreconditionViolated, "socle square is zero");
    e = (soc.coordinates(sq)[0]).inverse() * e;
    std::size_t r = support(e)[0];
    std::vector<Vec> cols{e};
    for (std::size_t i = 0; i < n; ++i) {
        if (i == r) continue;
        Vec ei = unit_vec(f, n, i);
        Vec prod = a.multiply(e, ei);
        Scalar phi = prod[r] / e[r];
        cols.push_back(ei - phi * e);
    }
    Matrix w = Matrix::from_columns(f, cols, n);
    Algebra c = a.change_basis(w);
    Matrix form(f, n - 1, n - 1);
    for (std::size_t i = 0; i < n - 1; ++i)
        for (std::size_t j = 0; j < n - 1; ++j) form(i, j) = c.c(i + 1, j + 1, 0);
    Decomposition out{AdjunctionSpec::av(base_from(c, 1, n - 1), form), w};
    verify_decomposition(a, out);
    return out;
}

Decomposition aw_decompose(const Algebra& a) {
    if (!a.is_diagonal()) throw Error(ErrorKind::NotEvolution, "coordinate basis is not natural");
    if (!is_nondegenerate(a)) throw Error(ErrorKind::PreconditionViolated, "aw_decompose needs a non-degenerate algebra");
    Subspace soc = socle(a).socle;
    if (soc.dim() != 1) throw Error(ErrorKind::PreconditionViolated, "aw_decompose needs a one-dimensional socle");
    FieldSpec f = a.field();
    std::size_t n = a.dim();
    Vec e = soc.basis()[0];
    if (!is_zero(a.multiply(e, e))) throw Error(ErrorKind::PreconditionViolated, "socle square is nonzero");
    std::size_t r = support(e)[0];
    std::vector<Vec> cols{e};
    for (std::size_t i = 0; i < n; ++i)
        if (i != r) cols.push_back(unit_vec(f, n, i));
    Matrix w = Matrix::from_columns(f, cols, n);
    Algebra c = a.change_basis(w);
    Matrix form(f, n - 1, n - 1);
    Vec fn;
    for (std::size_t i = 0; i < n - 1; ++i) {
        fn.push_back(c.c(0, i + 1, 0));
        for (std::size_t j = 0; j < n - 1; ++j) form(i, j) = c.c(i + 1, j + 1, 0);
    }
    Decomposition out{AdjunctionSpec::aw(base_from(c, 1, n - 1), form, fn), w};
    verify_decomposition(a, out);
    return out;
}

FormTransportSearch ad_form_transport(const Algebra& b1, const Matrix& a1, const Algebra& b2, const Matrix& a2) {
    FormTransportSearch r;
    IsoSet iso = enumerate_isomorphisms(b1, b2);
    FieldSpec f = b1.field();
    std::size_t n = b1.dim();
    for (const auto& beta : iso.maps) {
        Matrix target = gram(a2, beta);
        std::vector<Vec> rows;
        Vec rhs;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                Vec row{a1(i, j)};
                for (std::size_t l = 0; l < n; ++l) row.push_back(b1.c(i, j, l));
                rows.push_back(row);
                rhs.push_back(target(i, j));
            }
        auto u = nonzero_scale_solution(Matrix::from_rows(f, rows, n + 1), rhs);
        if (!u) continue;
        r.verdict = Verdict::Yes;
        r.data = FormTransport{beta, (*u)[0], Vec(u->begin() + 1, u->end())};
        return r;
    }
    r.verdict = iso.complete ? Verdict::No : Verdict::Unknown;
    return r;
}

IsoDecision ad_iso(const AdjunctionSpec& s1, const AdjunctionSpec& s2) {
    require_tag(s1, AdjunctionTag::Ad);
    require_tag(s2, AdjunctionTag::Ad);
    require_compatible(s1, s2);
    if (s1.base.dim() != s2.base.dim()) return decided_no("invariant");
    bool structural = annihilator(s1.base).dim() == 0 && annihilator(s2.base).dim() == 0;
    if (!structural) {
        if (annihilator(build(s1)).dim() != annihilator(build(s2)).dim()) return decided_no("invariant");
        return fallback(s1, s2);
    }
    auto t = ad_form_transport(s1.base, s1.form, s2.base, s2.form);
    if (t.verdict == Verdict::Yes)
        return accept(s1, s2, extra_first(t.data->k, t.data->t, t.data->beta), t.data->beta, t.data->k);
    if (t.verdict == Verdict::No) return decided_no("structural");
    return fallback(s1, s2);
}

bool has_invariant_ideal(const Algebra& b, const Matrix& phi, std::size_t d) {
    std::size_t n = b.dim();
    if (d == 0 || d == n) return true;
    if (d > n) return false;
    FieldSpec f = b.field();
    if (enumerable(f, n)) {
        for (const auto& s : all_subspaces(f, n, d)) {
            if (!is_ideal(b, s)) continue;
            bool inv = std::all_of(s.basis().begin(), s.basis().end(), [&](const Vec& v) { return s.contains(phi.apply(v)); });
            if (inv) return true;
        }
        return false;
    }
    if (n == 2 && d == 1) {
        auto mats = left_multiplications(b);
        mats.push_back(phi);
        std::vector<Vec> basis{unit_vec(f, 2, 0), unit_vec(f, 2, 1)};
        auto lines = invariant_lines(f, 2, basis, mats);
        return lines.all || !lines.lines.empty();
    }
    throw Error(ErrorKind::Unsupported, "invariant ideal search beyond dimension 2 over Q");
}

bool au_minimal_base(const Algebra& b, const Matrix& phi) {
    for (std::size_t d = 1; d < b.dim(); ++d)
        if (has_invariant_ideal(b, phi, d)) return false;
    return true;
}

namespace {

/// B x 0 is preserved by every isomorphism out of build(s).
bool base_is_characteristic(const AdjunctionSpec& s) {
    std::size_t n = s.base.dim();
    if (s.k0.is_zero()) {
        Algebra a = build(s);
        Matrix emb = base_embedding(s);
        std::vector<Vec> cols;
        for (std::size_t i = 0; i < n; ++i) cols.push_back(emb.col(i));
        if (square(a) == Subspace::span(s.base.field(), n + 1, cols)) return true;
    }
    if (n < 2) return false;
    try {
        return !has_invariant_ideal(s.base, s.phi, n - 1);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Unsupported) return false;
        throw;
    }
}

Vec au_residual(const AdjunctionSpec& s1, const AdjunctionSpec& s2, const Matrix& theta, const Vec& u) {
    const Algebra& b2 = s2.base;
    Scalar k = u[0];
    Vec c(u.begin() + 1, u.end());
    Vec lhs = theta.apply(s1.b0) + s1.k0 * c;
    Vec rhs = b2.multiply(c, c) + (Scalar::from_int(b2.field(), 2) * k) * s2.phi.apply(c) + (k * k) * s2.b0;
    return lhs - rhs;
}

}  // namespace

AuTransportSearch au_transport(const AdjunctionSpec& s1, const AdjunctionSpec& s2) {
    require_tag(s1, AdjunctionTag::Au);
    require_tag(s2, AdjunctionTag::Au);
    require_compatible(s1, s2);
    AuTransportSearch out;
    out.verdict = Verdict::No;
    if (s1.base.dim() != s2.base.dim() || s1.k0.is_zero() != s2.k0.is_zero()) return out;
    FieldSpec f = s1.base.field();
    std::size_t n = s1.base.dim();
    IsoSet iso = enumerate_isomorphisms(s1.base, s2.base);
    bool undecided = !iso.complete;
    auto l2 = left_multiplications(s2.base);
    for (const auto& theta : iso.maps) {
        Matrix target = theta * s1.phi * *inverse(theta);
        std::vector<Vec> rows;
        Vec rhs;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                Vec row{s2.phi(r, c)};
                for (std::size_t l = 0; l < n; ++l) row.push_back(l2[l](r, c));
                rows.push_back(row);
                rhs.push_back(target(r, c));
            }
        if (!s1.k0.is_zero()) {
            Vec row = zero_vec(f, n + 1);
            row[0] = Scalar::one(f);
            rows.push_back(row);
            rhs.push_back(s1.k0 / s2.k0);
        }
        auto sol = solve_affine(Matrix::from_rows(f, rows, n + 1), rhs);
        if (!sol) continue;
        std::vector<Vec> cands;
        std::size_t nd = sol->directions.size();
        if (nd == 0) {
            cands.push_back(sol->particular);
        } else if (enumerable(f, nd)) {
            for (const auto& t : all_vectors(f, nd)) cands.push_back(combine(sol->directions, t, f, n + 1) + sol->particular);
        } else if (nd == 1 && f.is_rationals()) {
            // The residual is quadratic along the single free direction.
            const Vec& p0 = sol->particular;
            const Vec& d = sol->directions[0];
            Scalar one = Scalar::one(f), two = Scalar::from_int(f, 2);
            Vec r0 = au_residual(s1, s2, theta, p0);
            Vec r1 = au_residual(s1, s2, theta, p0 + d);
            Vec rm = au_residual(s1, s2, theta, p0 - d);
            std::optional<std::vector<Scalar>> ts;
            for (std::size_t i = 0; i < n && !ts; ++i) {
                Scalar a2 = (r1[i] + rm[i]) / two - r0[i], a1 = (r1[i] - rm[i]) / two, a0 = r0[i];
                if (a2.is_zero() && a1.is_zero() && a0.is_zero()) continue;
                std::vector<Scalar> roots;
                for (const auto& [x, y] : binary_roots(a2, a1, a0))
                    if (!y.is_zero()) roots.push_back(x / y);
                ts = roots;
            }
            if (!ts) ts = std::vector<Scalar>{Scalar::zero(f), one, two};
            for (const auto& t : *ts) cands.push_back(p0 + t * d);
        } else {
            undecided = true;
            continue;
        }
        for (const auto& u : cands) {
            if (u[0].is_zero() || !is_zero(au_residual(s1, s2, theta, u))) continue;
            out.verdict = Verdict::Yes;
            out.data = AuTransport{theta, Vec(u.begin() + 1, u.end()), u[0]};
            return out;
        }
    }
    if (undecided) out.verdict = Verdict::Unknown;
    return out;
}

IsoDecision au_iso(const AdjunctionSpec& s1, const AdjunctionSpec& s2) {
    require_tag(s1, AdjunctionTag::Au);
    require_tag(s2, AdjunctionTag::Au);
    require_compatible(s1, s2);
    if (s1.base.dim() != s2.base.dim()) return decided_no("invariant");
    if (!base_is_characteristic(s1) || !base_is_characteristic(s2)) return fallback(s1, s2);
    auto t = au_transport(s1, s2);
    if (t.verdict == Verdict::No) return decided_no("structural");
    if (t.verdict == Verdict::Unknown) return fallback(s1, s2);
    std::size_t n = s1.base.dim();
    Matrix w(s1.base.field(), n + 1, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) w(i, j) = t.data->theta(i, j);
        w(i, n) = t.data->c[i];
    }
    w(n, n) = t.data->k;
    return accept(s1, s2, w, t.data->theta, t.data->k);
}

bool av_socle_check(const AdjunctionSpec& s) {
    require_tag(s, AdjunctionTag::Av);
    if (s.form.is_zero()) throw Error(ErrorKind::PreconditionViolated, "Av socle check needs a nonzero form");
    if (annihilator(build(s)).dim() != 0) throw Error(ErrorKind::PreconditionViolated, "Av build is degenerate");
    FieldSpec f = s.base.field();
    std::size_t n = s.base.dim();
    Subspace rad = kernel(s.form);
    if (rad.dim() == 0) return true;
    if (enumerable(f, n)) {
        for (std::size_t d = 1; d <= rad.dim(); ++d)
            for (const auto& sub : all_subspaces(f, n, d))
                if (rad.contains(sub) && is_ideal(s.base, sub)) return false;
        return true;
    }
    if (rad.dim() > 2) throw Error(ErrorKind::Unsupported, "radical of dimension > 2 over Q");
    auto lines = invariant_lines(f, n, rad.basis(), left_multiplications(s.base));
    if (lines.all || !lines.lines.empty()) return false;
    return !is_ideal(s.base, rad);
}

AwSocleConditions aw_socle_conditions(const AdjunctionSpec& s) {
    require_tag(s, AdjunctionTag::Aw);
    if (annihilator(build(s)).dim() != 0) throw Error(ErrorKind::PreconditionViolated, "Aw build is degenerate");
    FieldSpec f = s.base.field();
    std::size_t n = s.base.dim();
    Subspace ker = kernel(row_matrix(s.functional, f));
    Subspace perp = kernel(s.form);
    auto mults = left_multiplications(s.base);
    AwSocleConditions r;
    Subspace s1 = intersect(ker, perp);
    auto l1 = invariant_lines(f, n, s1.basis(), mults);
    r.first = !(l1.all && s1.dim() > 0) && l1.lines.empty();
    auto second_holds_at = [&](const Vec& b) {
        for (std::size_t i = 0; i < n; ++i) {
            Vec z = unit_vec(f, n, i);
            Scalar coef = s.functional[i];
            for (std::size_t j = 0; j < n; ++j) coef += s.form(i, j) * b[j];
            if (!(s.base.multiply(z, b) == coef * b)) return false;
        }
        return true;
    };
    r.second = true;
    if (enumerable(f, ker.dim())) {
        for (const auto& c : coordinate_points(f, ker.dim(), false))
            if (second_holds_at(combine(ker.basis(), c, f, n))) {
                r.second = false;
                break;
            }
        return r;
    }
    auto l2 = invariant_lines(f, n, ker.basis(), mults);
    if (l2.all && ker.dim() > 1) throw Error(ErrorKind::Unsupported, "every line of ker f is stable under B over Q");
    std::vector<Vec> lines = l2.lines;
    if (l2.all && ker.dim() == 1) lines = ker.basis();
    for (const auto& b0 : lines) {
        // z b0 = mu(z) b0; need mu(e_i) = f_i + t <e_i, b0> for one t != 0.
        std::optional<Scalar> t;
        bool consistent = true;
        for (std::size_t i = 0; i < n && consistent; ++i) {
            Vec zb = s.base.multiply(unit_vec(f, n, i), b0);
            std::size_t p = support(b0)[0];
            Scalar mu = zb[p] / b0[p];
            Scalar g = Scalar::zero(f);
            for (std::size_t j = 0; j < n; ++j) g += s.form(i, j) * b0[j];
            Scalar rest = mu - s.functional[i];
            if (g.is_zero()) {
                if (!rest.is_zero()) consistent = false;
            } else {
                Scalar ti = rest / g;
                if (t && !(*t == ti)) consistent = false;
                t = ti;
            }
        }
        if (!consistent) continue;
        Scalar tt = t ? *t : Scalar::one(f);
        if (tt.is_zero()) continue;
        if (second_holds_at(tt * b0)) {
            r.second = false;
            break;
        }
    }
    return r;
}

bool aw_socle_check(const AdjunctionSpec& s) { return aw_socle_conditions(s).holds(); }

IsoDecision av_iso(const AdjunctionSpec& s1, const AdjunctionSpec& s2) {
    require_tag(s1, AdjunctionTag::Av);
    require_tag(s2, AdjunctionTag::Av);
    require_compatible(s1, s2);
    if (s1.base.dim() != s2.base.dim()) return decided_no("invariant");
    if (s1.form.is_zero() || s2.form.is_zero()) return fallback(s1, s2);
    if (annihilator(build(s1)).dim() != 0 || annihilator(build(s2)).dim() != 0) return fallback(s1, s2);
    bool c1, c2;
    try {
        c1 = av_socle_check(s1);
        c2 = av_socle_check(s2);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Unsupported) throw;
        return fallback(s1, s2);
    }
    if (c1 != c2) return decided_no("invariant");
    if (!c1) return fallback(s1, s2);
    IsoSet iso = enumerate_isomorphisms(s1.base, s2.base);
    for (const auto& beta : iso.maps)
        if (gram(s2.form, beta) == s1.form) {
            Scalar one = Scalar::one(s1.base.field());
            return accept(s1, s2, extra_first(one, zero_vec(one.field(), beta.cols()), beta), beta, one);
        }
    if (!iso.complete) return fallback(s1, s2);
    return decided_no("structural");
}

AwTransportSearch aw_transport(const AdjunctionSpec& s1, const AdjunctionSpec& s2) {
    require_tag(s1, AdjunctionTag::Aw);
    require_tag(s2, AdjunctionTag::Aw);
    require_compatible(s1, s2);
    AwTransportSearch out;
    out.verdict = Verdict::No;
    if (s1.base.dim() != s2.base.dim()) return out;
    FieldSpec f = s1.base.field();
    std::size_t n = s1.base.dim();
    IsoSet iso = enumerate_isomorphisms(s1.base, s2.base);
    Matrix f2 = row_matrix(s2.functional, f);
    for (const auto& beta : iso.maps) {
        if (!((f2 * beta).row(0) == s1.functional)) continue;
        Matrix target = gram(s2.form, beta);
        std::vector<Vec> rows;
        Vec rhs;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                Vec row{s1.form(i, j)};
                for (std::size_t l = 0; l < n; ++l) {
                    Scalar v = s1.base.c(i, j, l);
                    if (l == i) v -= s1.functional[j];
                    if (l == j) v -= s1.functional[i];
                    row.push_back(v);
                }
                rows.push_back(row);
                rhs.push_back(target(i, j));
            }
        auto u = nonzero_scale_solution(Matrix::from_rows(f, rows, n + 1), rhs);
        if (!u) continue;
        out.verdict = Verdict::Yes;
        out.data = AwTransport{beta, (*u)[0], Vec(u->begin() + 1, u->end())};
        return out;
    }
    if (!iso.complete) out.verdict = Verdict::Unknown;
    return out;
}

IsoDecision aw_iso(const AdjunctionSpec& s1, const AdjunctionSpec& s2) {
    require_tag(s1, AdjunctionTag::Aw);
    require_tag(s2, AdjunctionTag::Aw);
    require_compatible(s1, s2);
    if (s1.base.dim() != s2.base.dim()) return decided_no("invariant");
    if (annihilator(build(s1)).dim() != 0 || annihilator(build(s2)).dim() != 0) return fallback(s1, s2);
    bool c1, c2;
    try {
        c1 = aw_socle_check(s1);
        c2 = aw_socle_check(s2);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Unsupported) throw;
        return fallback(s1, s2);
    }
    if (c1 != c2) return decided_no("invariant");
    if (!c1) return fallback(s1, s2);
    auto t = aw_transport(s1, s2);
    if (t.verdict == Verdict::No) return decided_no("structural");
    if (t.verdict == Verdict::Unknown) return fallback(s1, s2);
    return accept(s1, s2, extra_first(t.data->k, t.data->alpha, t.data->beta), t.data->beta, t.data->k);
}

IsoDecision adjunction_iso(const AdjunctionSpec& s1, const AdjunctionSpec& s2) {
    if (s1.tag != s2.tag) return fallback(s1, s2);
    switch (s1.tag) {
    case AdjunctionTag::Ad: return ad_iso(s1, s2);
    case AdjunctionTag::Au: return au_iso(s1, s2);
    case AdjunctionTag::Av: return av_iso(s1, s2);
    case AdjunctionTag::Aw: return aw_iso(s1, s2);
    }
    return fallback(s1, s2);
}

AuAnnihilatorProfile au_annihilator_profile(const AdjunctionSpec& s) {
    require_tag(s, AdjunctionTag::Au);
    if (!s.k0.is_zero()) throw Error(ErrorKind::PreconditionViolated, "annihilator profile needs k0 = 0");
    FieldSpec f = s.base.field();
    std::size_t n = s.base.dim();
    Algebra a = build(s);
    AuAnnihilatorProfile p;
    p.ker_phi = kernel(s.phi);
    p.ann_base_ker_phi = intersect(annihilator(s.base), p.ker_phi);
    p.ann = annihilator(a);

    std::vector<Vec> rows;
    Vec rhs;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            Vec row;
            for (std::size_t l = 0; l < n; ++l) row.push_back(s.base.c(l, j, k));
            rows.push_back(row);
            rhs.push_back(-s.phi(k, j));
        }
    if (auto b = solve(Matrix::from_rows(f, rows, n), rhs); b && s.base.multiply(*b, *b) == s.b0) p.root = b;

    auto fail = [](const char* what) { throw Error(ErrorKind::InternalInconsistency, what); };
    Matrix emb = base_embedding(s);
    auto lift = [&](const Subspace& sub) {
        std::vector<Vec> g;
        for (const auto& v : sub.basis()) g.push_back(emb.apply(v));
        return span_of(f, n + 1, g);
    };
    Vec extra = unit_vec(f, n + 1, n);
    std::vector<Vec> cols;
    for (std::size_t i = 0; i < n; ++i) cols.push_back(a.multiply(emb.col(i), extra));
    if (!(kernel(Matrix::from_columns(f, cols, n + 1)) == p.ker_phi)) fail("kernel of phi is not the annihilator of the extra line");
    Subspace base_part = lift(Subspace::whole(f, n));
    Subspace cap = lift(p.ann_base_ker_phi);
    if (!(intersect(p.ann, base_part) == cap)) fail("ann(A) meet B differs from ann(B) meet ker(phi)");
    Vec rootvec;
    if (p.root) {
        rootvec = emb.apply(*p.root) + extra;
        if (!p.ann.contains(rootvec)) fail("(b, 1) is not in ann(A)");
    }
    bool cap_zero = cap.dim() == 0, ann_zero = p.ann.dim() == 0;
    if (cap_zero && p.ann.dim() > 1) fail("dim ann(A) exceeds one");
    if (cap_zero && !ann_zero) {
        if (!p.root) fail("ann(A) is nonzero without a root");
        if (!(p.ann == span_of(f, n + 1, {rootvec}))) fail("ann(A) is not spanned by (b, 1)");
    }
    if (!cap_zero && !ann_zero) {
        Subspace expect = p.root ? cap + span_of(f, n + 1, {rootvec}) : cap;
        if (!(p.ann == expect)) fail("ann(A) differs from the predicted sum");
    }
    if (annihilator(s.base).dim() == 0 && !p.root && !ann_zero) fail("ann(A) should vanish");
    return p;
}

}  // namespace evoclass
