#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "evoclass/field.hpp"

namespace evoclass {

using Vec = std::vector<Scalar>;

Vec zero_vec(const FieldSpec& f, std::size_t n);
Vec unit_vec(const FieldSpec& f, std::size_t n, std::size_t i);
bool is_zero(const Vec& v);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const Scalar& s, const Vec& v);
std::string to_string(const Vec& v);

class Matrix {
public:
    Matrix() = default;
    Matrix(FieldSpec f, std::size_t rows, std::size_t cols);

    static Matrix identity(FieldSpec f, std::size_t n);
    static Matrix from_rows(FieldSpec f, const std::vector<Vec>& rows, std::size_t cols);
    static Matrix from_columns(FieldSpec f, const std::vector<Vec>& cols, std::size_t rows);

    FieldSpec field() const { return f_; }
    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }

    Scalar& operator()(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }

    Vec row(std::size_t i) const;
    Vec col(std::size_t j) const;
    Matrix transpose() const;
    Vec apply(const Vec& v) const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend Matrix operator*(const Scalar& s, const Matrix& a);
    friend bool operator==(const Matrix& a, const Matrix& b);

    bool is_zero() const;
    std::string to_string() const;

private:
    FieldSpec f_;
    std::size_t r_ = 0, c_ = 0;
    std::vector<Scalar> d_;
};

struct Echelon {
    Matrix m;                        ///< reduced row echelon form, zero rows dropped
    std::vector<std::size_t> pivots;  ///< pivot column of each row
};

Echelon rref(const Matrix& a);
std::size_t rank(const Matrix& a);
Scalar det(const Matrix& a);
std::optional<Matrix> inverse(const Matrix& a);
/// Basis of {x : a x = 0}.
std::vector<Vec> nullspace(const Matrix& a);
/// One solution of a x = b, if any.
std::optional<Vec> solve(const Matrix& a, const Vec& b);

/// Solution set {x0 + span(directions)} of a linear system.
struct AffineSolution {
    Vec particular;
    std::vector<Vec> directions;
};
std::optional<AffineSolution> solve_affine(const Matrix& a, const Vec& b);

/// A subspace of K^n, stored as a reduced echelon basis.
class Subspace {
public:
    Subspace() = default;
    static Subspace span(FieldSpec f, std::size_t n, const std::vector<Vec>& gens);
    static Subspace zero(FieldSpec f, std::size_t n) { return span(f, n, {}); }
    static Subspace whole(FieldSpec f, std::size_t n);

    FieldSpec field() const { return f_; }
    std::size_t ambient() const { return n_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<Vec>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    bool contains(const Vec& v) const;
    bool contains(const Subspace& s) const;
    /// Coordinates of v with respect to basis(); throws if v is not in the subspace.
    Vec coordinates(const Vec& v) const;
    /// Standard basis indices that together with this subspace span K^n.
    std::vector<std::size_t> complement_indices() const;

    friend Subspace operator+(const Subspace& a, const Subspace& b);
    friend Subspace intersect(const Subspace& a, const Subspace& b);
    friend bool operator==(const Subspace& a, const Subspace& b);
    std::string to_string() const;

private:
    FieldSpec f_;
    std::size_t n_ = 0;
    std::vector<Vec> basis_;
    std::vector<std::size_t> pivots_;
    void check(const Subspace& o) const;
};

/// Every subspace of F_p^n of dimension k, each once.
std::vector<Subspace> all_subspaces(const FieldSpec& f, std::size_t n, std::size_t k);
/// Every vector of F_p^n in lexicographic residue order.
std::vector<Vec> all_vectors(const FieldSpec& f, std::size_t n);

}  // namespace evoclass
