#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "evoclass/linalg.hpp"

namespace evoclass {

/// Commutative algebra given by its structure tensor: e_i e_j = sum_k c(i,j,k) e_k.
class Algebra {
public:
    Algebra() = default;
    Algebra(FieldSpec f, std::size_t n, std::vector<Scalar> tensor);

    static Algebra zero(FieldSpec f, std::size_t n);
    /// Evolution algebra whose structure matrix has e_i^2 in column i.
    static Algebra evolution(const Matrix& structure);

    FieldSpec field() const { return f_; }
    std::size_t dim() const { return n_; }

    const Scalar& c(std::size_t i, std::size_t j, std::size_t k) const { return t_[(i * n_ + j) * n_ + k]; }
    Vec basis_product(std::size_t i, std::size_t j) const;
    Vec multiply(const Vec& x, const Vec& y) const;
    /// Matrix of y -> x y.
    Matrix left_multiplication(const Vec& x) const;

    /// True when e_i e_j = 0 for i != j, i.e. the coordinate basis is natural.
    bool is_diagonal() const;
    /// Column i holds e_i^2; throws NotEvolution when the tensor is not diagonal.
    Matrix structure_matrix() const;

    /// The same algebra in the basis formed by the columns of p.
    Algebra change_basis(const Matrix& p) const;
    /// True when the linear map with matrix f (columns are images of e_i) is multiplicative from *this to b.
    bool is_homomorphism(const Matrix& f, const Algebra& b) const;

    const std::vector<Scalar>& tensor() const { return t_; }
    friend bool operator==(const Algebra& a, const Algebra& b) { return a.f_ == b.f_ && a.n_ == b.n_ && a.t_ == b.t_; }
    std::string to_string() const;

private:
    FieldSpec f_;
    std::size_t n_ = 0;
    std::vector<Scalar> t_;
};

Subspace product_space(const Algebra& a, const Subspace& u, const Subspace& v);
Subspace square(const Algebra& a);
Subspace annihilator(const Algebra& a);
/// {x : x A contained in s}.
Subspace preimage_annihilator(const Algebra& a, const Subspace& s);
Subspace ideal_closure(const Algebra& a, const std::vector<Vec>& gens);
bool is_ideal(const Algebra& a, const Subspace& s);
bool is_subalgebra(const Algebra& a, const Subspace& s);
/// The product restricted to a subalgebra, in the echelon basis of s.
Algebra restrict_to(const Algebra& a, const Subspace& s);

struct AnnSeriesReport {
    std::vector<Subspace> chain;  ///< chain[0] = 0, chain[i+1] = {x : x A in chain[i]}
    std::size_t asi = 0;
    Subspace radical;
};
AnnSeriesReport ann_series(const Algebra& a);

/// Span of rho^k({x}) with rho(S) = S A, spans taken at every step.
Subspace rho_power(const Algebra& a, const Vec& x, std::size_t k);

struct NilpotencyReport {
    bool nilpotent = false;
    std::size_t index = 0;         ///< least k with A^k = 0 when nilpotent
    std::vector<Subspace> powers;  ///< powers[k-1] = A^k
};
NilpotencyReport nilpotency(const Algebra& a);

struct Quotient {
    Algebra algebra;
    Matrix projection;  ///< m x n
    Matrix section;     ///< n x m, columns are the chosen complement vectors
};
/// Quotient on the standard basis vectors outside the pivots of i, so diagonal tensors stay diagonal.
Quotient quotient(const Algebra& a, const Subspace& i);

Algebra direct_sum(const Algebra& a, const Algebra& b);

struct SocleReport {
    std::vector<Subspace> minimal_ideals;
    Subspace socle;
    std::vector<Subspace> chain;  ///< chain[0] = soc, chain[k] = soc^(k+1)
    std::size_t ssi = 1;
};
/// Minimal ideals I with A I != 0.
std::vector<Subspace> minimal_ideals(const Algebra& a);
SocleReport socle(const Algebra& a);
/// Exhaustive search over all subspaces of F_p^n; used as an oracle.
std::vector<Subspace> minimal_ideals_exhaustive(const Algebra& a);

}  // namespace evoclass
