#pragma once

#include <random>
#include <vector>

#include "evoclass/algebra.hpp"

namespace testing_helpers {

using namespace evoclass;

inline Matrix mat(FieldSpec f, const std::vector<std::vector<long long>>& rows) {
    Matrix m(f, rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = Scalar::from_int(f, rows[i][j]);
    return m;
}

inline Vec vec(FieldSpec f, const std::vector<long long>& xs) {
    Vec v;
    for (auto x : xs) v.push_back(Scalar::from_int(f, x));
    return v;
}

/// Evolution algebra from structure-matrix rows (column i = e_i^2).
inline Algebra evo(FieldSpec f, const std::vector<std::vector<long long>>& rows) {
    return Algebra::evolution(mat(f, rows));
}

inline Subspace span(FieldSpec f, std::size_t n, const std::vector<std::vector<long long>>& gens) {
    std::vector<Vec> g;
    for (const auto& x : gens) g.push_back(vec(f, x));
    return Subspace::span(f, n, g);
}

inline Matrix random_matrix(FieldSpec f, std::size_t r, std::size_t c, std::mt19937_64& rng) {
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = random_scalar(f, rng);
    return m;
}

inline Vec random_vec(FieldSpec f, std::size_t n, std::mt19937_64& rng) {
    Vec v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(random_scalar(f, rng));
    return v;
}

inline Matrix random_invertible(FieldSpec f, std::size_t n, std::mt19937_64& rng) {
    for (;;) {
        Matrix m = random_matrix(f, n, n, rng);
        if (!det(m).is_zero()) return m;
    }
}

/// All 512 structure matrices over F2 in dimension 3.
inline std::vector<Algebra> f2_catalog() {
    auto F2 = FieldSpec::prime(2);
    std::vector<Algebra> out;
    for (int code = 0; code < 512; ++code) {
        Matrix m(F2, 3, 3);
        for (int k = 0; k < 9; ++k) m(k / 3, k % 3) = Scalar::from_int(F2, (code >> k) & 1);
        out.push_back(Algebra::evolution(m));
    }
    return out;
}

}  // namespace testing_helpers
