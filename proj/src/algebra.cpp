#include "evoclass/algebra.hpp"

#include <algorithm>

namespace evoclass {

Algebra::Algebra(FieldSpec f, std::size_t n, std::vector<Scalar> tensor) : f_(f), n_(n), t_(std::move(tensor)) {
    if (t_.size() != n * n * n) throw Error(ErrorKind::DimensionMismatch, "tensor must have n^3 entries");
    for (const auto& s : t_)
        if (!(s.field() == f)) throw Error(ErrorKind::FieldMismatch, "tensor entry over wrong field");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (!(c(i, j, k) == c(j, i, k)))
                    throw Error(ErrorKind::InvalidArgument, "structure tensor is not commutative");
}

Algebra Algebra::zero(FieldSpec f, std::size_t n) {
    return Algebra(f, n, std::vector<Scalar>(n * n * n, Scalar::zero(f)));
}

Algebra Algebra::evolution(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::ShapeMismatch, "structure matrix must be square");
    std::size_t n = m.rows();
    std::vector<Scalar> t(n * n * n, Scalar::zero(m.field()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) t[(i * n + i) * n + k] = m(k, i);
    return Algebra(m.field(), n, std::move(t));
}

Vec Algebra::basis_product(std::size_t i, std::size_t j) const {
    return Vec(t_.begin() + (i * n_ + j) * n_, t_.begin() + (i * n_ + j + 1) * n_);
}

Vec Algebra::multiply(const Vec& x, const Vec& y) const {
    if (x.size() != n_ || y.size() != n_) throw Error(ErrorKind::DimensionMismatch, "element of wrong length");
    Vec out = zero_vec(f_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (x[i].is_zero()) continue;
        for (std::size_t j = 0; j < n_; ++j) {
            if (y[j].is_zero()) continue;
            Scalar s = x[i] * y[j];
            for (std::size_t k = 0; k < n_; ++k)
                if (!c(i, j, k).is_zero()) out[k] += s * c(i, j, k);
        }
    }
    return out;
}

Matrix Algebra::left_multiplication(const Vec& x) const {
    std::vector<Vec> cols;
    for (std::size_t j = 0; j < n_; ++j) cols.push_back(multiply(x, unit_vec(f_, n_, j)));
    return Matrix::from_columns(f_, cols, n_);
}

bool Algebra::is_diagonal() const {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (i != j)
                for (std::size_t k = 0; k < n_; ++k)
                    if (!c(i, j, k).is_zero()) return false;
    return true;
}

Matrix Algebra::structure_matrix() const {
    if (!is_diagonal()) throw Error(ErrorKind::NotEvolution, "coordinate basis is not natural");
    Matrix m(f_, n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) m(k, i) = c(i, i, k);
    return m;
}

Algebra Algebra::change_basis(const Matrix& p) const {
    auto inv = inverse(p);
    if (!inv) throw Error(ErrorKind::InvalidArgument, "basis change matrix is singular");
    std::vector<Vec> cols;
    for (std::size_t i = 0; i < n_; ++i) cols.push_back(p.col(i));
    std::vector<Scalar> t(n_ * n_ * n_, Scalar::zero(f_));
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j) {
            Vec prod = inv->apply(multiply(cols[i], cols[j]));
            for (std::size_t k = 0; k < n_; ++k) {
                t[(i * n_ + j) * n_ + k] = prod[k];
                t[(j * n_ + i) * n_ + k] = prod[k];
            }
        }
    return Algebra(f_, n_, std::move(t));
}

bool Algebra::is_homomorphism(const Matrix& f, const Algebra& b) const {
    std::vector<Vec> img;
    for (std::size_t i = 0; i < n_; ++i) img.push_back(f.col(i));
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j)
            if (!(f.apply(basis_product(i, j)) == b.multiply(img[i], img[j]))) return false;
    return true;
}

std::string Algebra::to_string() const {
    std::string s = "Algebra(" + f_.name() + ", dim " + std::to_string(n_) + ")";
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j) {
            Vec v = basis_product(i, j);
            if (!evoclass::is_zero(v))
                s += " e" + std::to_string(i + 1) + "e" + std::to_string(j + 1) + "=" + evoclass::to_string(v);
        }
    return s;
}

Subspace product_space(const Algebra& a, const Subspace& u, const Subspace& v) {
    std::vector<Vec> gens;
    for (const auto& x : u.basis())
        for (const auto& y : v.basis()) gens.push_back(a.multiply(x, y));
    return Subspace::span(a.field(), a.dim(), gens);
}

Subspace square(const Algebra& a) {
    Subspace w = Subspace::whole(a.field(), a.dim());
    return product_space(a, w, w);
}

Subspace preimage_annihilator(const Algebra& a, const Subspace& s) {
    // x e_j in s for all j: linear conditions through a complement of s.
    std::size_t n = a.dim();
    auto comp = s.complement_indices();
    Matrix m(a.field(), n * comp.size(), n);
    // Reduce modulo s: coordinate on complement index after subtracting pivots.
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            Vec prod = a.basis_product(i, j);
            Vec r = prod;
            for (std::size_t b = 0; b < s.dim(); ++b) {
                const Scalar lead = r[s.pivots()[b]];
                if (!lead.is_zero()) r = r - lead * s.basis()[b];
            }
            for (std::size_t c = 0; c < comp.size(); ++c) m(j * comp.size() + c, i) = r[comp[c]];
        }
    if (comp.empty()) return Subspace::whole(a.field(), n);
    return Subspace::span(a.field(), n, nullspace(m));
}

Subspace annihilator(const Algebra& a) { return preimage_annihilator(a, Subspace::zero(a.field(), a.dim())); }

Subspace ideal_closure(const Algebra& a, const std::vector<Vec>& gens) {
    Subspace cur = Subspace::span(a.field(), a.dim(), gens);
    Subspace whole = Subspace::whole(a.field(), a.dim());
    for (std::size_t step = 0; step <= a.dim() + 1; ++step) {
        Subspace next = cur + product_space(a, cur, whole);
        if (next == cur) return cur;
        cur = next;
    }
    throw Error(ErrorKind::InternalInconsistency, "ideal closure did not stabilize");
}

bool is_ideal(const Algebra& a, const Subspace& s) {
    return s.contains(product_space(a, s, Subspace::whole(a.field(), a.dim())));
}

bool is_subalgebra(const Algebra& a, const Subspace& s) { return s.contains(product_space(a, s, s)); }

Algebra restrict_to(const Algebra& a, const Subspace& s) {
    if (!is_subalgebra(a, s)) throw Error(ErrorKind::InvalidArgument, "subspace is not closed under the product");
    std::size_t m = s.dim();
    std::vector<Scalar> t(m * m * m, Scalar::zero(a.field()));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Vec c = s.coordinates(a.multiply(s.basis()[i], s.basis()[j]));
            for (std::size_t k = 0; k < m; ++k) t[(i * m + j) * m + k] = c[k];
        }
    return Algebra(a.field(), m, std::move(t));
}

AnnSeriesReport ann_series(const Algebra& a) {
    AnnSeriesReport r;
    r.chain.push_back(Subspace::zero(a.field(), a.dim()));
    for (std::size_t step = 0; step <= a.dim() + 1; ++step) {
        Subspace next = preimage_annihilator(a, r.chain.back());
        if (next == r.chain.back()) {
            r.asi = r.chain.size() - 1;
            r.radical = r.chain.back();
            return r;
        }
        r.chain.push_back(next);
    }
    throw Error(ErrorKind::InternalInconsistency, "annihilator chain did not stabilize");
}

Subspace rho_power(const Algebra& a, const Vec& x, std::size_t k) {
    Subspace cur = Subspace::span(a.field(), a.dim(), {x});
    Subspace whole = Subspace::whole(a.field(), a.dim());
    for (std::size_t i = 0; i < k; ++i) cur = product_space(a, cur, whole);
    return cur;
}

NilpotencyReport nilpotency(const Algebra& a) {
    NilpotencyReport r;
    r.powers.push_back(Subspace::whole(a.field(), a.dim()));
    if (a.dim() == 0) {
        r.nilpotent = true;
        r.index = 1;
        return r;
    }
    // The chain A^k is descending; a nilpotent algebra of dim n dies by step 2^n.
    std::size_t bound = (std::size_t{1} << std::min<std::size_t>(a.dim(), 16)) + 1;
    for (std::size_t k = 2; k <= bound; ++k) {
        Subspace next = Subspace::zero(a.field(), a.dim());
        for (std::size_t i = 1; i < k; ++i) next = next + product_space(a, r.powers[i - 1], r.powers[k - i - 1]);
        r.powers.push_back(next);
        if (next.dim() == 0) {
            r.nilpotent = true;
            r.index = k;
            return r;
        }
    }
    return r;
}

namespace {

Vec reduce_mod(const Subspace& s, Vec v) {
    for (std::size_t b = 0; b < s.dim(); ++b) {
        const Scalar lead = v[s.pivots()[b]];
        if (!lead.is_zero()) v = v - lead * s.basis()[b];
    }
    return v;
}

}  // namespace

Quotient quotient(const Algebra& a, const Subspace& i) {
    if (!is_ideal(a, i)) throw Error(ErrorKind::NotAnIdeal, i.to_string());
    auto comp = i.complement_indices();
    std::size_t m = comp.size(), n = a.dim();
    FieldSpec f = a.field();
    Matrix proj(f, m, n), sec(f, n, m);
    for (std::size_t j = 0; j < n; ++j) {
        Vec r = reduce_mod(i, unit_vec(f, n, j));
        for (std::size_t c = 0; c < m; ++c) proj(c, j) = r[comp[c]];
    }
    for (std::size_t c = 0; c < m; ++c) sec(comp[c], c) = Scalar::one(f);
    std::vector<Scalar> t(m * m * m, Scalar::zero(f));
    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y) {
            Vec img = proj.apply(a.basis_product(comp[x], comp[y]));
            for (std::size_t k = 0; k < m; ++k) t[(x * m + y) * m + k] = img[k];
        }
    return {Algebra(f, m, std::move(t)), proj, sec};
}

Algebra direct_sum(const Algebra& a, const Algebra& b) {
    if (!(a.field() == b.field())) throw Error(ErrorKind::FieldMismatch, "direct sum over different fields");
    std::size_t n = a.dim() + b.dim();
    std::vector<Scalar> t(n * n * n, Scalar::zero(a.field()));
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            for (std::size_t k = 0; k < a.dim(); ++k) t[(i * n + j) * n + k] = a.c(i, j, k);
    std::size_t o = a.dim();
    for (std::size_t i = 0; i < b.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j)
            for (std::size_t k = 0; k < b.dim(); ++k) t[((o + i) * n + o + j) * n + o + k] = b.c(i, j, k);
    return Algebra(a.field(), n, std::move(t));
}

std::vector<Subspace> minimal_ideals_exhaustive(const Algebra& a) {
    if (!a.field().is_prime()) throw Error(ErrorKind::Unsupported, "exhaustive ideal search needs a finite field");
    std::size_t n = a.dim();
    double count = 1;
    for (std::size_t i = 0; i < n; ++i) count *= a.field().p;
    if (count > 5000) throw Error(ErrorKind::Unsupported, "exhaustive ideal search budget exceeded");
    Subspace whole = Subspace::whole(a.field(), n);
    std::vector<Subspace> ideals;
    for (std::size_t k = 1; k <= n; ++k)
        for (auto& s : all_subspaces(a.field(), n, k))
            if (is_ideal(a, s)) ideals.push_back(s);
    std::vector<Subspace> out;
    for (const auto& s : ideals) {
        bool minimal = std::none_of(ideals.begin(), ideals.end(),
                                    [&](const Subspace& t) { return t.dim() < s.dim() && s.contains(t); });
        if (minimal && product_space(a, whole, s).dim() > 0) out.push_back(s);
    }
    return out;
}

std::vector<Subspace> minimal_ideals(const Algebra& a) {
    if (!a.is_diagonal()) return minimal_ideals_exhaustive(a);
    // Every minimal ideal I with A I != 0 equals some J_i = <e_i^2>; a candidate is minimal
    // iff it meets ann(A) trivially and contains no other candidate properly.
    std::size_t n = a.dim();
    Subspace ann = annihilator(a);
    std::vector<Subspace> cands;
    for (std::size_t i = 0; i < n; ++i) {
        Vec sq = a.basis_product(i, i);
        if (evoclass::is_zero(sq)) continue;
        Subspace j = ideal_closure(a, {sq});
        if (std::find(cands.begin(), cands.end(), j) == cands.end()) cands.push_back(j);
    }
    std::vector<Subspace> out;
    for (const auto& s : cands) {
        if (intersect(s, ann).dim() > 0) continue;
        bool minimal = std::none_of(cands.begin(), cands.end(),
                                    [&](const Subspace& t) { return t.dim() < s.dim() && s.contains(t); });
        if (minimal) out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](const Subspace& x, const Subspace& y) {
        if (x.dim() != y.dim()) return x.dim() < y.dim();
        return x.basis() > y.basis();
    });
    return out;
}

SocleReport socle(const Algebra& a) {
    SocleReport r;
    r.minimal_ideals = minimal_ideals(a);
    r.socle = Subspace::zero(a.field(), a.dim());
    for (const auto& m : r.minimal_ideals) r.socle = r.socle + m;
    r.chain.push_back(r.socle);
    for (std::size_t step = 0; step <= a.dim() + 1; ++step) {
        const Subspace& cur = r.chain.back();
        Quotient q = quotient(a, cur);
        Subspace s = Subspace::zero(q.algebra.field(), q.algebra.dim());
        for (const auto& m : minimal_ideals(q.algebra)) s = s + m;
        std::vector<Vec> gens = cur.basis();
        for (const auto& v : s.basis()) gens.push_back(q.section.apply(v));
        Subspace next = Subspace::span(a.field(), a.dim(), gens);
        if (next == cur) {
            r.ssi = r.chain.size();
            return r;
        }
        r.chain.push_back(next);
    }
    throw Error(ErrorKind::InternalInconsistency, "socle chain did not stabilize");
}

}  // namespace evoclass
