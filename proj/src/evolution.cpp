#include "evoclass/evolution.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "evoclass/bruteforce.hpp"

namespace evoclass {

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

const char* ideal_case_name(IdealCase c) {
    switch (c) {
    case IdealCase::SpanOfTwoBasisVectors: return "SpanOfTwoBasisVectors";
    case IdealCase::EiPlusEjEk: return "EiPlusEjEk";
    case IdealCase::EiEjPlusEjEk: return "EiEjPlusEjEk";
    }
    return "?";
}

const char* simple_type_name(SimpleType t) {
    switch (t) {
    case SimpleType::NotSimple: return "NotSimple";
    case SimpleType::TypeI: return "TypeI";
    case SimpleType::TypeII: return "TypeII";
    case SimpleType::TypeIII: return "TypeIII";
    }
    return "?";
}

std::vector<std::size_t> support(const Vec& z) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < z.size(); ++i)
        if (!z[i].is_zero()) s.push_back(i);
    return s;
}

namespace {

void require_diagonal(const Algebra& a) {
    if (!a.is_diagonal()) throw Error(ErrorKind::NotEvolution, "coordinate basis is not natural");
}

Matrix diag(const FieldSpec& f, const std::vector<Scalar>& d) {
    Matrix m(f, d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

bool pairwise_orthogonal(const Algebra& a, const std::vector<Vec>& vs) {
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            if (!is_zero(a.multiply(vs[i], vs[j]))) return false;
    return true;
}

bool is_natural_basis(const Algebra& a, const Matrix& p) {
    std::vector<Vec> cols;
    for (std::size_t j = 0; j < p.cols(); ++j) cols.push_back(p.col(j));
    return p.rows() == p.cols() && !det(p).is_zero() && pairwise_orthogonal(a, cols);
}

/// Exhaustive search for pairwise orthogonal, independent vectors extending `prefix` to a basis.
/// With `projective`, only vectors whose first nonzero coordinate is 1 are tried, in increasing order.
void search_natural(const Algebra& a, std::vector<Vec>& chosen, const std::vector<Vec>& pool, bool projective,
                    std::size_t start, std::uint64_t& nodes, const std::function<bool(const std::vector<Vec>&)>& emit,
                    bool& stop) {
    std::size_t n = a.dim();
    if (chosen.size() == n) {
        if (!emit(chosen)) stop = true;
        return;
    }
    Subspace cur = Subspace::span(a.field(), n, chosen);
    for (std::size_t idx = projective ? start : 0; idx < pool.size() && !stop; ++idx) {
        const Vec& v = pool[idx];
        if (cur.contains(v)) continue;
        bool ok = true;
        for (const auto& c : chosen)
            if (!is_zero(a.multiply(c, v))) {
                ok = false;
                break;
            }
        ++nodes;
        if (!ok) continue;
        chosen.push_back(v);
        search_natural(a, chosen, pool, projective, idx + 1, nodes, emit, stop);
        chosen.pop_back();
    }
}

std::vector<Vec> projective_points(const FieldSpec& f, std::size_t n) {
    std::vector<Vec> out;
    for (auto& v : all_vectors(f, n)) {
        auto s = support(v);
        if (!s.empty() && v[s[0]].is_one()) out.push_back(v);
    }
    return out;
}

std::vector<Vec> nonzero_vectors(const FieldSpec& f, std::size_t n) {
    std::vector<Vec> out;
    for (auto& v : all_vectors(f, n))
        if (!is_zero(v)) out.push_back(v);
    return out;
}

std::optional<Matrix> find_natural_basis_exhaustive(const Algebra& a, std::vector<Vec> prefix, std::uint64_t& nodes) {
    std::optional<Matrix> found;
    bool stop = false;
    auto pool = projective_points(a.field(), a.dim());
    if (!pairwise_orthogonal(a, prefix)) return std::nullopt;
    search_natural(a, prefix, pool, prefix.empty(), 0, nodes,
                   [&](const std::vector<Vec>& b) {
                       found = Matrix::from_columns(a.field(), b, a.dim());
                       return false;
                   },
                   stop);
    return found;
}

}  // namespace

bool is_nondegenerate(const Algebra& a) {
    require_diagonal(a);
    bool cols = true;
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (is_zero(a.basis_product(i, i))) cols = false;
    bool ann = annihilator(a).dim() == 0;
    if (cols != ann) throw Error(ErrorKind::InternalInconsistency, "column test and annihilator disagree");
    return cols;
}

bool is_perfect(const Algebra& a) { return square(a).dim() == a.dim(); }

Naturality is_natural_vector(const Algebra& a, const Vec& z) {
    require_diagonal(a);
    if (is_zero(z)) throw Error(ErrorKind::InvalidArgument, "zero vector");
    Vec sq = a.multiply(z, z);
    auto sup = support(z);
    if (!is_zero(sq)) {
        std::vector<Vec> squares;
        for (auto i : sup) squares.push_back(a.basis_product(i, i));
        bool one_dim = Subspace::span(a.field(), a.dim(), squares).dim() == 1;
        // The criterion needs an orthogonal complement of z inside span(e_i : i in Supp z);
        // for supports of size >= 3 in characteristic 2 that complement may not diagonalize.
        if (one_dim && sup.size() >= 3 && a.field().characteristic() == 2) {
            if (!brute_force_supported(a.field(), a.dim())) return Naturality::Unknown;
            std::uint64_t nodes = 0;
            return find_natural_basis_exhaustive(a, {z}, nodes) ? Naturality::Natural : Naturality::NotNatural;
        }
        return one_dim ? Naturality::Natural : Naturality::NotNatural;
    }
    // A natural vector with zero square annihilates its basis, hence the algebra; conversely a vector of
    // ann(A) can replace any e_i with i in its support, since those e_i already lie in ann(A).
    return annihilator(a).contains(z) ? Naturality::Natural : Naturality::NotNatural;
}

IdealPosition ideal_position(const Algebra& a, const Subspace& ideal) {
    require_diagonal(a);
    if (a.dim() != 3 || ideal.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "needs a 2-dim ideal of a 3-dim algebra");
    if (!is_ideal(a, ideal)) throw Error(ErrorKind::NotAnIdeal, ideal.to_string());
    FieldSpec f = a.field();
    const Vec& r1 = ideal.basis()[0];
    const Vec& r2 = ideal.basis()[1];
    IdealPosition pos{IdealCase::SpanOfTwoBasisVectors, Matrix::identity(f, 3), {0, 1, 2},
                      {Scalar::zero(f), Scalar::zero(f), Scalar::zero(f)}, std::nullopt};
    for (std::size_t i = 0; i < 3; ++i)
        pos.delta[i] = det(Matrix::from_rows(f, {r1, r2, a.basis_product(i, i)}, 3));
    auto s1 = support(r1), s2 = support(r2);
    std::vector<Scalar> scale(3, Scalar::one(f));
    if (s1.size() == 1 && s2.size() == 1) {
        std::size_t k = 3 - s1[0] - s2[0];
        pos.idx = {s1[0], s2[0], k};
    } else if (s1.size() == 1 || s2.size() == 1) {
        const Vec& other = s1.size() == 1 ? r2 : r1;
        std::size_t i = s1.size() == 1 ? s1[0] : s2[0];
        auto so = support(other);
        if (so.size() != 2) throw Error(ErrorKind::InternalInconsistency, "unexpected echelon shape");
        std::size_t j = so[0], k = so[1];
        scale[k] = other[k] / other[j];
        pos.kind = IdealCase::EiPlusEjEk;
        pos.idx = {i, j, k};
    } else {
        if (s1.size() != 2 || s2.size() != 2) throw Error(ErrorKind::InternalInconsistency, "unexpected echelon shape");
        std::size_t p1 = s1[0], p2 = s2[0], c = s1[1];
        if (s2[1] != c) throw Error(ErrorKind::InternalInconsistency, "echelon rows do not share a column");
        Scalar x = r1[c], y = r2[c];
        scale[c] = x;
        scale[p2] = x / y;
        pos.kind = IdealCase::EiEjPlusEjEk;
        pos.idx = {p1, c, p2};
    }
    bool any_delta = std::any_of(pos.delta.begin(), pos.delta.end(), [](const Scalar& d) { return !d.is_zero(); });
    if (any_delta && pos.kind != IdealCase::SpanOfTwoBasisVectors)
        throw Error(ErrorKind::InternalInconsistency, "nonzero determinant but ideal not spanned by basis vectors");
    pos.basis = diag(f, scale);
    auto fcol = [&](std::size_t t) { return pos.basis.col(t); };
    auto [i, j, k] = pos.idx;
    Subspace claimed;
    switch (pos.kind) {
    case IdealCase::SpanOfTwoBasisVectors: claimed = Subspace::span(f, 3, {fcol(i), fcol(j)}); break;
    case IdealCase::EiPlusEjEk: claimed = Subspace::span(f, 3, {fcol(i), fcol(j) + fcol(k)}); break;
    case IdealCase::EiEjPlusEjEk: claimed = Subspace::span(f, 3, {fcol(i) + fcol(j), fcol(j) + fcol(k)}); break;
    }
    if (!(claimed == ideal)) throw Error(ErrorKind::InternalInconsistency, "ideal position witness does not reproduce the ideal");
    if (pos.kind != IdealCase::EiEjPlusEjEk) {
        pos.evolution_ideal = true;
    } else if (is_perfect(a)) {
        pos.evolution_ideal = false;
    } else {
        auto check = is_evolution(restrict_to(a, ideal));
        if (check.verdict != Verdict::Unknown) pos.evolution_ideal = check.verdict == Verdict::Yes;
    }
    return pos;
}

ExtensionResult extension_property(const Algebra& a, const Subspace& soc) {
    if (!is_nondegenerate(a) || square(a).dim() < 2)
        throw Error(ErrorKind::PreconditionViolated, "needs a non-degenerate algebra with dim A^2 >= 2");
    auto pos = ideal_position(a, soc);
    FieldSpec f = a.field();
    auto [i, j, k] = pos.idx;
    Vec fi = pos.basis.col(i), fj = pos.basis.col(j), fk = pos.basis.col(k);
    ExtensionResult r;
    if (pos.kind == IdealCase::SpanOfTwoBasisVectors) {
        r.holds = true;
        r.basis = Matrix::from_columns(f, {fi, fj, fk}, 3);
    } else if (pos.kind == IdealCase::EiPlusEjEk) {
        Vec sj = a.multiply(fj, fj), sk = a.multiply(fk, fk);
        bool dependent = Subspace::span(f, 3, {sj, sk}).dim() < 2;
        if (dependent && !is_zero(sj + sk)) {
            auto null = nullspace(Matrix::from_columns(f, {sj, sk}, 3));
            for (const auto& ab : null)
                if (!(ab[0] == ab[1])) {
                    r.holds = true;
                    r.basis = Matrix::from_columns(f, {fi, fj + fk, ab[0] * fj + ab[1] * fk}, 3);
                    break;
                }
            if (!r.holds) throw Error(ErrorKind::InternalInconsistency, "no independent orthogonal partner found");
        }
    }
    if (r.basis) {
        if (!is_natural_basis(a, *r.basis) ||
            !(Subspace::span(f, 3, {r.basis->col(0), r.basis->col(1)}) == soc))
            throw Error(ErrorKind::InternalInconsistency, "extension witness failed verification");
    }
    return r;
}

TwoDimSimple two_dim_simple_type(const Matrix& m) {
    if (m.rows() != 2 || m.cols() != 2) throw Error(ErrorKind::ShapeMismatch, "needs a 2x2 matrix");
    FieldSpec f = m.field();
    TwoDimSimple r;
    if (det(m).is_zero() || m(0, 1).is_zero() || m(1, 0).is_zero()) return r;
    Matrix p(f, 2, 2);
    Matrix w = m;
    if (w(0, 0).is_zero() == false && w(1, 1).is_zero()) {
        p(1, 0) = Scalar::one(f);
        p(0, 1) = Scalar::one(f);
        w = Algebra::evolution(m).change_basis(p).structure_matrix();
    } else {
        p = Matrix::identity(f, 2);
    }
    Scalar s1 = Scalar::one(f), s2 = Scalar::one(f);
    if (!w(0, 0).is_zero()) {
        r.type = SimpleType::TypeI;
        s1 = w(0, 0).inverse();
        s2 = w(1, 1).inverse();
    } else if (!w(1, 1).is_zero()) {
        r.type = SimpleType::TypeII;
        s2 = w(1, 1).inverse();
    } else {
        r.type = SimpleType::TypeIII;
    }
    r.basis = p * diag(f, {s1, s2});
    r.normal = Algebra::evolution(m).change_basis(r.basis).structure_matrix();
    r.x = r.normal(1, 0);
    r.y = r.normal(0, 1);
    return r;
}

namespace {

/// Nonzero rationals in a fixed order: 1, -1, 2, -2, 1/2, -1/2, 3, ...
std::vector<Scalar> rational_sequence(std::size_t count) {
    std::vector<Scalar> out;
    mpz_class a = 1, b = 1;
    while (out.size() < count) {
        mpq_class q(a, b);
        q.canonicalize();
        out.push_back(Scalar(q));
        out.push_back(Scalar(mpq_class(-q)));
        // Calkin-Wilf successor.
        mpz_class na = b, nb = 2 * (a / b) * b + b - a;
        a = na;
        b = nb;
    }
    out.resize(count);
    return out;
}

}  // namespace

std::vector<Matrix> natural_bases(const Algebra& a, std::size_t limit) {
    require_diagonal(a);
    FieldSpec f = a.field();
    std::size_t n = a.dim();
    std::vector<Matrix> out{Matrix::identity(f, n)};
    if (brute_force_supported(f, n)) {
        std::uint64_t nodes = 0;
        bool stop = false;
        std::vector<Vec> chosen;
        auto pool = nonzero_vectors(f, n);
        search_natural(a, chosen, pool, false, 0, nodes,
                       [&](const std::vector<Vec>& b) {
                           Matrix m = Matrix::from_columns(f, b, n);
                           if (!(m == out[0])) out.push_back(m);
                           return limit == 0 || out.size() < limit;
                       },
                       stop);
        return out;
    }
    if (n != 3 || !is_nondegenerate(a)) throw Error(ErrorKind::Unsupported, "natural basis enumeration over Q");
    std::size_t d2 = square(a).dim();
    if (d2 == 3) return out;
    if (d2 != 2) throw Error(ErrorKind::Unsupported, "natural basis enumeration over Q");
    std::size_t cap = limit == 0 ? 64 : limit;
    auto ks = rational_sequence(cap * 2);
    for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t y = 0; y < 3; ++y) {
            if (x == y) continue;
            Vec sx = a.basis_product(x, x), sy = a.basis_product(y, y);
            if (Subspace::span(f, 3, {sx, sy}).dim() != 1) continue;
            // e_x^2 = t e_y^2; (e_x + k e_y)(e_x + k' e_y) = (t + k k') e_y^2.
            std::size_t piv = support(sy)[0];
            Scalar t = sx[piv] / sy[piv];
            std::size_t z = 3 - x - y;
            for (const auto& k : ks) {
                if (out.size() >= cap) return out;
                Scalar k2 = -t / k;
                if (k2 == k || !(x < y)) continue;
                Matrix m(f, 3, 3);
                m(x, 0) = Scalar::one(f);
                m(y, 0) = k;
                m(x, 1) = Scalar::one(f);
                m(y, 1) = k2;
                m(z, 2) = Scalar::one(f);
                out.push_back(m);
            }
        }
    return out;
}

namespace {

/// Finds independent v, w in span(o1, o2) with v w = 0; std::nullopt with `impossible` set when none exist.
std::optional<std::pair<Vec, Vec>> orthogonal_pair(const Algebra& a, const Vec& o1, const Vec& o2, bool& impossible) {
    FieldSpec f = a.field();
    impossible = false;
    Vec p11 = a.multiply(o1, o1), p12 = a.multiply(o1, o2), p22 = a.multiply(o2, o2);
    std::vector<Vec> forms;
    for (std::size_t k = 0; k < a.dim(); ++k) forms.push_back({p11[k], p12[k], p22[k]});
    Subspace v = Subspace::span(f, 3, forms);
    auto combine = [&](const Scalar& x, const Scalar& y) { return x * o1 + y * o2; };
    auto verify = [&](const Vec& c1, const Vec& c2) -> std::optional<std::pair<Vec, Vec>> {
        Vec v1 = combine(c1[0], c1[1]), v2 = combine(c2[0], c2[1]);
        if (Subspace::span(f, a.dim(), {v1, v2}).dim() == 2 && is_zero(a.multiply(v1, v2))) return std::make_pair(v1, v2);
        return std::nullopt;
    };
    Scalar zero = Scalar::zero(f), one = Scalar::one(f);
    if (v.dim() == 0) return std::make_pair(o1, o2);
    if (v.dim() == 3) {
        impossible = true;
        return std::nullopt;
    }
    // Candidate first vectors c = (c0, c1); the partner spans the common kernel of q(c, .).
    auto partner = [&](const Vec& c) -> std::optional<std::pair<Vec, Vec>> {
        std::vector<Vec> rows;
        for (const auto& q : v.basis()) rows.push_back({q[0] * c[0] + q[1] * c[1], q[1] * c[0] + q[2] * c[1]});
        for (const auto& w : nullspace(Matrix::from_rows(f, rows, 2)))
            if (auto ok = verify(c, w)) return ok;
        if (nullspace(Matrix::from_rows(f, rows, 2)).size() == 2)
            for (const auto& w : {Vec{one, zero}, Vec{zero, one}})
                if (auto ok = verify(c, w)) return ok;
        return std::nullopt;
    };
    std::vector<Vec> cands;
    if (v.dim() == 1) {
        cands = {{one, zero}, {zero, one}, {one, one}, {one, -one}};
    } else {
        const Vec& q = v.basis()[0];
        const Vec& r = v.basis()[1];
        // det[q c, r c] = A c0^2 + B c0 c1 + C c1^2.
        Scalar A = q[0] * r[1] - q[1] * r[0];
        Scalar B = q[0] * r[2] - q[2] * r[0];
        Scalar C = q[1] * r[2] - q[2] * r[1];
        if (A.is_zero() && B.is_zero() && C.is_zero()) {
            cands = {{one, zero}, {zero, one}, {one, one}, {one, -one}};
        } else {
            if (A.is_zero()) cands.push_back({one, zero});
            if (!A.is_zero()) {
                Scalar disc = B * B - Scalar::from_int(f, 4) * A * C;
                if (f.characteristic() == 2) {
                    for (const auto& t : elements(f))
                        if ((A * t * t + B * t + C).is_zero()) cands.push_back({t, one});
                } else if (auto s = sqrt(disc)) {
                    Scalar two_a = Scalar::from_int(f, 2) * A;
                    cands.push_back({(-B + *s) / two_a, one});
                    cands.push_back({(-B - *s) / two_a, one});
                }
            } else if (!B.is_zero()) {
                cands.push_back({-C / B, one});
            }
        }
    }
    for (const auto& c : cands)
        if (auto ok = partner(c)) return ok;
    // Exhausted every admissible first vector (for dim V = 2 all roots were tried; for dim V <= 1
    // a non-isotropic vector exists unless the form is alternating in characteristic 2).
    impossible = true;
    return std::nullopt;
}

/// Rational roots of a polynomial with rational coefficients (coeffs[i] multiplies x^i).
std::optional<std::vector<Scalar>> rational_roots(std::vector<mpq_class> coeffs) {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    mpz_class lcm = 1;
    for (auto& c : coeffs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<mpz_class> z;
    for (auto& c : coeffs) z.push_back(mpz_class(c * lcm));
    std::vector<Scalar> roots;
    std::size_t shift = 0;
    while (shift < z.size() && z[shift] == 0) ++shift;
    if (shift > 0) roots.push_back(Scalar(mpq_class(0)));
    z.erase(z.begin(), z.begin() + shift);
    if (z.size() <= 1) return roots;
    auto divisors = [](mpz_class v) -> std::optional<std::vector<mpz_class>> {
        v = abs(v);
        if (v > mpz_class("1000000000000")) return std::nullopt;
        std::vector<mpz_class> d;
        for (mpz_class i = 1; i * i <= v; ++i)
            if (v % i == 0) {
                d.push_back(i);
                if (i * i != v) d.push_back(v / i);
            }
        return d;
    };
    auto dn = divisors(z.front()), dd = divisors(z.back());
    if (!dn || !dd) return std::nullopt;
    std::set<mpq_class> seen;
    for (const auto& p : *dn)
        for (const auto& q : *dd)
            for (int sign : {1, -1}) {
                mpq_class x(sign * p, q);
                x.canonicalize();
                if (!seen.insert(x).second) continue;
                mpq_class val = 0;
                for (std::size_t i = z.size(); i-- > 0;) val = val * x + z[i];
                if (val == 0) roots.push_back(Scalar(x));
            }
    return roots;
}

/// Perfect algebras over Q: eigenvectors of L_y^{-1} L_x are the natural basis vectors.
EvolutionCheck perfect_eigen_search(const Algebra& a) {
    FieldSpec f = a.field();
    std::size_t n = a.dim();
    std::mt19937_64 rng(12345);
    for (int attempt = 0; attempt < 24; ++attempt) {
        Vec x, y;
        for (std::size_t i = 0; i < n; ++i) {
            x.push_back(Scalar::from_int(f, static_cast<long long>(rng() % 7) - 3));
            y.push_back(Scalar::from_int(f, static_cast<long long>(rng() % 7) - 3));
        }
        auto ly = inverse(a.left_multiplication(y));
        if (!ly) continue;
        Matrix nmat = *ly * a.left_multiplication(x);
        // Characteristic polynomial by evaluating det(N - t I) at n+1 points and interpolating.
        std::vector<mpq_class> pts, vals;
        for (std::size_t t = 0; t <= n; ++t) {
            Matrix m = nmat - Scalar::from_int(f, static_cast<long long>(t)) * Matrix::identity(f, n);
            pts.push_back(mpq_class(static_cast<long>(t)));
            vals.push_back(det(m).rational());
        }
        std::vector<mpq_class> coeffs(n + 1, 0);
        for (std::size_t i = 0; i <= n; ++i) {
            std::vector<mpq_class> basis{1};
            mpq_class denom = 1;
            for (std::size_t j = 0; j <= n; ++j) {
                if (j == i) continue;
                std::vector<mpq_class> next(basis.size() + 1, 0);
                for (std::size_t k = 0; k < basis.size(); ++k) {
                    next[k + 1] += basis[k];
                    next[k] -= basis[k] * pts[j];
                }
                basis = next;
                denom *= pts[i] - pts[j];
            }
            for (std::size_t k = 0; k < basis.size(); ++k) coeffs[k] += vals[i] * basis[k] / denom;
        }
        auto roots = rational_roots(coeffs);
        if (!roots) return {};
        std::vector<Vec> vecs;
        for (const auto& r : *roots) {
            auto ker = nullspace(nmat - r * Matrix::identity(f, n));
            vecs.insert(vecs.end(), ker.begin(), ker.end());
        }
        if (Subspace::span(f, n, vecs).dim() < n) return {Verdict::No, std::nullopt, 0};
        if (roots->size() < n) continue;  // repeated eigenvalue: eigenvectors not pinned
        Matrix p = Matrix::from_columns(f, vecs, n);
        if (is_natural_basis(a, p)) return {Verdict::Yes, p, 0};
        return {Verdict::No, std::nullopt, 0};
    }
    return {};
}

/// Subspaces spanned by members of every natural basis, starting from radicals of the coordinate forms.
EvolutionCheck pinning_search(const Algebra& a) {
    FieldSpec f = a.field();
    std::size_t n = a.dim();
    auto orth = [&](const Subspace& w) {
        if (w.dim() == 0) return Subspace::whole(f, n);
        std::vector<Vec> rows;
        for (std::size_t k = 0; k < n; ++k)
            for (const auto& b : w.basis()) {
                Vec r;
                for (std::size_t i = 0; i < n; ++i) r.push_back(a.multiply(unit_vec(f, n, i), b)[k]);
                rows.push_back(r);
            }
        return Subspace::span(f, n, nullspace(Matrix::from_rows(f, rows, n)));
    };
    std::vector<Subspace> family{Subspace::zero(f, n), Subspace::whole(f, n)};
    auto add = [&](const Subspace& s) {
        if (std::find(family.begin(), family.end(), s) == family.end()) family.push_back(s);
    };
    for (std::size_t k = 0; k < n; ++k) {
        Matrix q(f, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) q(i, j) = a.c(i, j, k);
        add(Subspace::span(f, n, nullspace(q)));
    }
    const std::size_t cap = std::size_t{1} << n;
    for (bool grew = true; grew;) {
        grew = false;
        std::size_t before = family.size();
        for (std::size_t i = 0; i < before && family.size() <= cap; ++i) {
            add(orth(family[i]));
            for (std::size_t j = i + 1; j < before; ++j) {
                add(family[i] + family[j]);
                add(intersect(family[i], family[j]));
            }
        }
        if (family.size() > cap) return {Verdict::No, std::nullopt, 0};
        grew = family.size() > before;
    }
    std::vector<Vec> pinned;
    for (const auto& s : family)
        if (s.dim() == 1) pinned.push_back(s.basis()[0]);
    if (pinned.size() > n || Subspace::span(f, n, pinned).dim() < pinned.size() || !pairwise_orthogonal(a, pinned))
        return {Verdict::No, std::nullopt, 0};
    if (pinned.size() == n) return {Verdict::Yes, Matrix::from_columns(f, pinned, n), 0};
    if (n == 3 && pinned.size() == 2) {
        Subspace span2 = Subspace::span(f, n, pinned);
        Subspace o = orth(span2);
        for (const auto& w : o.basis())
            if (!span2.contains(w)) return {Verdict::Yes, Matrix::from_columns(f, {pinned[0], pinned[1], w}, n), 0};
        return {Verdict::No, std::nullopt, 0};
    }
    if (n == 3 && pinned.size() == 1) {
        const Vec& u = pinned[0];
        std::vector<Vec> rest;
        if (!is_zero(a.multiply(u, u))) {
            Subspace o = orth(Subspace::span(f, n, {u}));
            if (o.dim() != 2) return {Verdict::No, std::nullopt, 0};
            rest = o.basis();
        } else {
            if (!annihilator(a).contains(u)) return {Verdict::No, std::nullopt, 0};
            for (auto idx : Subspace::span(f, n, {u}).complement_indices()) rest.push_back(unit_vec(f, n, idx));
        }
        bool impossible = false;
        auto pair = orthogonal_pair(a, rest[0], rest[1], impossible);
        if (pair) return {Verdict::Yes, Matrix::from_columns(f, {u, pair->first, pair->second}, n), 0};
        return {impossible ? Verdict::No : Verdict::Unknown, std::nullopt, 0};
    }
    return {};
}

}  // namespace

EvolutionCheck is_evolution(const Algebra& a) {
    FieldSpec f = a.field();
    std::size_t n = a.dim();
    if (a.is_diagonal()) return {Verdict::Yes, Matrix::identity(f, n), 0};
    EvolutionCheck r;
    if (brute_force_supported(f, n)) {
        auto b = find_natural_basis_exhaustive(a, {}, r.candidates);
        r.verdict = b ? Verdict::Yes : Verdict::No;
        r.basis = b;
    } else if (n == 2) {
        bool impossible = false;
        auto pair = orthogonal_pair(a, unit_vec(f, 2, 0), unit_vec(f, 2, 1), impossible);
        if (pair) {
            r.verdict = Verdict::Yes;
            r.basis = Matrix::from_columns(f, {pair->first, pair->second}, 2);
        } else {
            r.verdict = impossible ? Verdict::No : Verdict::Unknown;
        }
    } else if (n == 3) {
        if (f.is_rationals() && is_perfect(a)) r = perfect_eigen_search(a);
        if (r.verdict == Verdict::Unknown) r = pinning_search(a);
    }
    if (r.verdict == Verdict::Yes && (!r.basis || !is_natural_basis(a, *r.basis)))
        throw Error(ErrorKind::InternalInconsistency, "natural basis witness failed verification");
    return r;
}

std::vector<Matrix> perfect_evolution_isomorphisms(const Algebra& a, const Algebra& b, std::size_t limit) {
    require_diagonal(a);
    require_diagonal(b);
    if (!(a.field() == b.field())) throw Error(ErrorKind::FieldMismatch, "algebras over different fields");
    std::vector<Matrix> out;
    std::size_t n = a.dim();
    if (b.dim() != n) return out;
    if (!is_perfect(a) || !is_perfect(b)) throw Error(ErrorKind::PreconditionViolated, "algebras must be perfect");
    FieldSpec f = a.field();
    Matrix wa = a.structure_matrix(), wb = b.structure_matrix();
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        bool pattern = true;
        for (std::size_t i = 0; i < n && pattern; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (wa(j, i).is_zero() != wb(sigma[j], sigma[i]).is_zero()) {
                    pattern = false;
                    break;
                }
        if (!pattern) continue;
        // Equations s_j = r_ji s_i^2 for every nonzero entry (j, i).
        struct Edge {
            std::size_t j, i;
            Scalar r;
        };
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!wa(j, i).is_zero()) edges.push_back({j, i, wb(sigma[j], sigma[i]) / wa(j, i)});
        auto accept = [&](const std::vector<Scalar>& s) {
            for (const auto& e : edges)
                if (!(s[e.j] == e.r * s[e.i] * s[e.i])) return;
            Matrix m(f, n, n);
            for (std::size_t i = 0; i < n; ++i) m(sigma[i], i) = s[i];
            out.push_back(m);
        };
        if (f.is_prime()) {
            std::vector<std::optional<Scalar>> s(n);
            std::function<void()> rec = [&]() {
                if (out.size() >= limit) return;
                auto free = std::find_if(s.begin(), s.end(), [](const auto& x) { return !x.has_value(); });
                if (free == s.end()) {
                    std::vector<Scalar> v;
                    for (auto& x : s) v.push_back(*x);
                    accept(v);
                    return;
                }
                for (const auto& u : units(f)) {
                    auto saved = s;
                    *free = u;
                    bool ok = true;
                    for (bool changed = true; changed && ok;) {
                        changed = false;
                        for (const auto& e : edges) {
                            if (!s[e.i]) continue;
                            Scalar val = e.r * *s[e.i] * *s[e.i];
                            if (!s[e.j]) {
                                s[e.j] = val;
                                changed = true;
                            } else if (!(*s[e.j] == val)) {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if (ok) rec();
                    s = saved;
                }
            };
            rec();
        } else {
            // Signs: s_j has the sign of r_ji. Magnitudes: solve log|s_j| - 2 log|s_i| = log|r_ji|
            // through an invertible integer subsystem and take exact roots.
            std::vector<int> sign(n, 0);
            bool ok = true;
            for (const auto& e : edges) {
                int sg = sgn(e.r.rational()) > 0 ? 1 : -1;
                if (sign[e.j] != 0 && sign[e.j] != sg) ok = false;
                sign[e.j] = sg;
            }
            if (!ok || std::find(sign.begin(), sign.end(), 0) != sign.end()) continue;
            std::vector<std::size_t> rows;
            std::vector<Vec> chosen;
            for (std::size_t t = 0; t < edges.size() && rows.size() < n; ++t) {
                Vec row = zero_vec(f, n);
                row[edges[t].j] += Scalar::one(f);
                row[edges[t].i] -= Scalar::from_int(f, 2);
                chosen.push_back(row);
                if (Subspace::span(f, n, chosen).dim() == chosen.size()) rows.push_back(t);
                else chosen.pop_back();
            }
            if (rows.size() < n) throw Error(ErrorKind::InternalInconsistency, "exponent system not of full rank");
            Matrix k = Matrix::from_rows(f, chosen, n);
            Scalar d = det(k);
            Matrix adj = d * *inverse(k);
            std::vector<Scalar> s(n);
            long dd = mpz_class(abs(d.rational().get_num())).get_si();
            for (std::size_t i = 0; i < n && ok; ++i) {
                Scalar prod = Scalar::one(f);
                for (std::size_t t = 0; t < n; ++t) {
                    long e = adj(i, t).rational().get_num().get_si();
                    Scalar mag(mpq_class(abs(edges[rows[t]].r.rational())));
                    prod *= mag.pow(e);
                }
                if (sgn(d.rational()) < 0) prod = prod.inverse();
                auto root = nth_root(prod, static_cast<unsigned>(dd));
                if (!root) ok = false;
                else s[i] = sign[i] > 0 ? *root : -*root;
            }
            if (ok) accept(s);
        }
        if (out.size() >= limit) break;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

IsoSet enumerate_isomorphisms(const Algebra& a, const Algebra& b) {
    if (!(a.field() == b.field())) throw Error(ErrorKind::FieldMismatch, "algebras over different fields");
    IsoSet r;
    std::size_t n = a.dim();
    if (b.dim() != n) {
        r.complete = true;
        return r;
    }
    FieldSpec f = a.field();
    if (n == 0) return {true, {Matrix(f, 0, 0)}};
    if (brute_force_supported(f, n)) return {true, all_isomorphisms(a, b)};
    if (n == 1) {
        Scalar la = a.c(0, 0, 0), lb = b.c(0, 0, 0);
        if (la.is_zero() && lb.is_zero()) return r;
        r.complete = true;
        if (la.is_zero() != lb.is_zero()) return r;
        Matrix m(f, 1, 1);
        m(0, 0) = la / lb;
        r.maps.push_back(m);
        return r;
    }
    if (a.is_diagonal() && b.is_diagonal()) {
        bool pa = is_perfect(a), pb = is_perfect(b);
        if (pa != pb) {
            r.complete = true;
            return r;
        }
        if (pa) return {true, perfect_evolution_isomorphisms(a, b)};
    }
    return r;
}

}  // namespace evoclass
