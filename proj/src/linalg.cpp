#include "evoclass/linalg.hpp"

#include <algorithm>
#include <functional>

namespace evoclass {

Vec zero_vec(const FieldSpec& f, std::size_t n) { return Vec(n, Scalar::zero(f)); }

Vec unit_vec(const FieldSpec& f, std::size_t n, std::size_t i) {
    Vec v = zero_vec(f, n);
    v[i] = Scalar::one(f);
    return v;
}

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

Vec operator+(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "vector sizes differ");
    Vec out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
    return out;
}

Vec operator-(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "vector sizes differ");
    Vec out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
    return out;
}

Vec operator*(const Scalar& s, const Vec& v) {
    Vec out = v;
    for (auto& x : out) x *= s;
    return out;
}

std::string to_string(const Vec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
    return s + ")";
}

Matrix::Matrix(FieldSpec f, std::size_t rows, std::size_t cols)
    : f_(f), r_(rows), c_(cols), d_(rows * cols, Scalar::zero(f)) {}

Matrix Matrix::identity(FieldSpec f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(f);
    return m;
}

Matrix Matrix::from_rows(FieldSpec f, const std::vector<Vec>& rows, std::size_t cols) {
    Matrix m(f, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw Error(ErrorKind::DimensionMismatch, "row length");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Matrix Matrix::from_columns(FieldSpec f, const std::vector<Vec>& cols, std::size_t rows) {
    return from_rows(f, cols, rows).transpose();
}

Vec Matrix::row(std::size_t i) const { return Vec(d_.begin() + i * c_, d_.begin() + (i + 1) * c_); }

Vec Matrix::col(std::size_t j) const {
    Vec v;
    for (std::size_t i = 0; i < r_; ++i) v.push_back((*this)(i, j));
    return v;
}

Matrix Matrix::transpose() const {
    Matrix t(f_, c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Vec Matrix::apply(const Vec& v) const {
    if (v.size() != c_) throw Error(ErrorKind::DimensionMismatch, "matrix-vector size");
    Vec out = zero_vec(f_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j)
            if (!v[j].is_zero() && !(*this)(i, j).is_zero()) out[i] += (*this)(i, j) * v[j];
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw Error(ErrorKind::DimensionMismatch, "matrix product shapes");
    Matrix m(a.f_, a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
        for (std::size_t k = 0; k < a.c_; ++k) {
            if (a(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < b.c_; ++j)
                if (!b(k, j).is_zero()) m(i, j) += a(i, k) * b(k, j);
        }
    return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw Error(ErrorKind::DimensionMismatch, "matrix sum shapes");
    Matrix m = a;
    for (std::size_t i = 0; i < m.d_.size(); ++i) m.d_[i] += b.d_[i];
    return m;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + Scalar::from_int(b.f_, -1) * b; }

Matrix operator*(const Scalar& s, const Matrix& a) {
    Matrix m = a;
    for (auto& x : m.d_) x *= s;
    return m;
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.f_ == b.f_ && a.r_ == b.r_ && a.c_ == b.c_ && a.d_ == b.d_;
}

bool Matrix::is_zero() const {
    return std::all_of(d_.begin(), d_.end(), [](const Scalar& s) { return s.is_zero(); });
}

std::string Matrix::to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < r_; ++i) s += (i ? ", " : "") + evoclass::to_string(row(i));
    return s + "]";
}

Echelon rref(const Matrix& a) {
    Matrix m = a;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t sel = r;
        while (sel < m.rows() && m(sel, c).is_zero()) ++sel;
        if (sel == m.rows()) continue;
        if (sel != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(r, j));
        Scalar inv = m(r, c).inverse();
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c).is_zero()) continue;
            Scalar factor = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!m(r, j).is_zero()) m(i, j) -= factor * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    Matrix out(a.field(), r, a.cols());
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = m(i, j);
    return {out, pivots};
}

std::size_t rank(const Matrix& a) { return rref(a).pivots.size(); }

Scalar det(const Matrix& a) {
    if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "det of non-square matrix");
    Matrix m = a;
    std::size_t n = m.rows();
    Scalar d = Scalar::one(a.field());
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = c;
        while (sel < n && m(sel, c).is_zero()) ++sel;
        if (sel == n) return Scalar::zero(a.field());
        if (sel != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(sel, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        Scalar inv = m(c, c).inverse();
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c).is_zero()) continue;
            Scalar factor = m(i, c) * inv;
            for (std::size_t j = c; j < n; ++j) m(i, j) -= factor * m(c, j);
        }
    }
    return d;
}

std::optional<Matrix> inverse(const Matrix& a) {
    std::size_t n = a.rows();
    if (n != a.cols()) throw Error(ErrorKind::DimensionMismatch, "inverse of non-square matrix");
    Matrix aug(a.field(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = Scalar::one(a.field());
    }
    Echelon e = rref(aug);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
    Matrix inv(a.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.m(i, n + j);
    return inv;
}

std::vector<Vec> nullspace(const Matrix& a) {
    Echelon e = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<Vec> out;
    for (std::size_t free = 0; free < a.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vec v = unit_vec(a.field(), a.cols(), free);
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.m(i, free);
        out.push_back(v);
    }
    return out;
}

std::optional<AffineSolution> solve_affine(const Matrix& a, const Vec& b) {
    if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "rhs size");
    Matrix aug(a.field(), a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    Echelon e = rref(aug);
    if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
    Vec x = zero_vec(a.field(), a.cols());
    for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.m(i, a.cols());
    return AffineSolution{x, nullspace(a)};
}

std::optional<Vec> solve(const Matrix& a, const Vec& b) {
    auto s = solve_affine(a, b);
    if (!s) return std::nullopt;
    return s->particular;
}

Subspace Subspace::span(FieldSpec f, std::size_t n, const std::vector<Vec>& gens) {
    Subspace s;
    s.f_ = f;
    s.n_ = n;
    if (gens.empty()) return s;
    Echelon e = rref(Matrix::from_rows(f, gens, n));
    for (std::size_t i = 0; i < e.pivots.size(); ++i) s.basis_.push_back(e.m.row(i));
    s.pivots_ = e.pivots;
    return s;
}

Subspace Subspace::whole(FieldSpec f, std::size_t n) {
    std::vector<Vec> gens;
    for (std::size_t i = 0; i < n; ++i) gens.push_back(unit_vec(f, n, i));
    return span(f, n, gens);
}

void Subspace::check(const Subspace& o) const {
    if (!(f_ == o.f_)) throw Error(ErrorKind::FieldMismatch, "subspaces over different fields");
    if (n_ != o.n_) throw Error(ErrorKind::AmbientMismatch, "subspaces of different ambient spaces");
}

bool Subspace::contains(const Vec& v) const {
    if (v.size() != n_) throw Error(ErrorKind::AmbientMismatch, "vector of wrong length");
    Vec r = v;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (r[pivots_[i]].is_zero()) continue;
        r = r - r[pivots_[i]] * basis_[i];
    }
    return evoclass::is_zero(r);
}

bool Subspace::contains(const Subspace& s) const {
    check(s);
    for (const auto& b : s.basis_)
        if (!contains(b)) return false;
    return true;
}

Vec Subspace::coordinates(const Vec& v) const {
    if (!contains(v)) throw Error(ErrorKind::InvalidArgument, "vector not in subspace");
    Vec c;
    for (auto p : pivots_) c.push_back(v[p]);
    return c;
}

std::vector<std::size_t> Subspace::complement_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n_; ++j)
        if (std::find(pivots_.begin(), pivots_.end(), j) == pivots_.end()) out.push_back(j);
    return out;
}

Subspace operator+(const Subspace& a, const Subspace& b) {
    a.check(b);
    std::vector<Vec> g = a.basis_;
    g.insert(g.end(), b.basis_.begin(), b.basis_.end());
    return Subspace::span(a.f_, a.n_, g);
}

Subspace intersect(const Subspace& a, const Subspace& b) {
    a.check(b);
    if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.f_, a.n_);
    // x = sum s_i a_i = sum t_j b_j; solve for (s, -t).
    std::size_t ka = a.dim(), kb = b.dim();
    Matrix m(a.f_, a.n_, ka + kb);
    for (std::size_t i = 0; i < a.n_; ++i) {
        for (std::size_t j = 0; j < ka; ++j) m(i, j) = a.basis_[j][i];
        for (std::size_t j = 0; j < kb; ++j) m(i, ka + j) = b.basis_[j][i];
    }
    std::vector<Vec> gens;
    for (const auto& sol : nullspace(m)) {
        Vec x = zero_vec(a.f_, a.n_);
        for (std::size_t j = 0; j < ka; ++j)
            if (!sol[j].is_zero()) x = x + sol[j] * a.basis_[j];
        gens.push_back(x);
    }
    return Subspace::span(a.f_, a.n_, gens);
}

bool operator==(const Subspace& a, const Subspace& b) {
    return a.f_ == b.f_ && a.n_ == b.n_ && a.basis_ == b.basis_;
}

std::string Subspace::to_string() const {
    std::string s = "span{";
    for (std::size_t i = 0; i < basis_.size(); ++i) s += (i ? ", " : "") + evoclass::to_string(basis_[i]);
    return s + "}";
}

std::vector<Vec> all_vectors(const FieldSpec& f, std::size_t n) {
    auto els = elements(f);
    std::vector<Vec> out;
    Vec cur(n, els[0]);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (const auto& e : els) {
            cur[i] = e;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

std::vector<Subspace> all_subspaces(const FieldSpec& f, std::size_t n, std::size_t k) {
    if (!f.is_prime()) throw Error(ErrorKind::Unsupported, "subspace enumeration needs a finite field");
    std::vector<Subspace> out;
    if (k > n) return out;
    auto els = elements(f);
    // Choose pivot columns, then fill the free entries of the reduced echelon rows.
    std::vector<std::size_t> piv(k);
    std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t idx, std::size_t start) {
        if (idx == k) {
            std::vector<std::pair<std::size_t, std::size_t>> free;
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t c = piv[r] + 1; c < n; ++c)
                    if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.push_back({r, c});
            std::vector<Vec> rows(k, zero_vec(f, n));
            for (std::size_t r = 0; r < k; ++r) rows[r][piv[r]] = Scalar::one(f);
            std::function<void(std::size_t)> fill = [&](std::size_t i) {
                if (i == free.size()) {
                    out.push_back(Subspace::span(f, n, rows));
                    return;
                }
                for (const auto& e : els) {
                    rows[free[i].first][free[i].second] = e;
                    fill(i + 1);
                }
            };
            fill(0);
            return;
        }
        for (std::size_t c = start; c < n; ++c) {
            piv[idx] = c;
            choose(idx + 1, c + 1);
        }
    };
    choose(0, 0);
    return out;
}

}  // namespace evoclass
