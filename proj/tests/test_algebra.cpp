#include "doctest.h"

#include "evoclass/bruteforce.hpp"
#include "helpers.hpp"

using namespace evoclass;
using namespace testing_helpers;

namespace {

const FieldSpec Q = FieldSpec::rationals();

Algebra socle_chain_example() { return evo(Q, {{0, 1, -1}, {1, 1, -1}, {1, 1, -1}}); }
Algebra two_minimal_ideals_example() { return evo(Q, {{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, -1, 1}, {0, 0, -1, 1}}); }
Algebra decomposable_mat(FieldSpec f) { return evo(f, {{1, 0, 0}, {0, 1, -1}, {0, -1, 1}}); }

}  // namespace

TEST_CASE("products follow the column convention") {
    auto e1 = evo(Q, {{0, 0, 0}, {0, 1, 1}, {0, 0, 0}});
    CHECK(e1.multiply(vec(Q, {0, 1, 0}), vec(Q, {0, 1, 0})) == vec(Q, {0, 1, 0}));
    CHECK(is_zero(e1.basis_product(0, 1)));
    CHECK(socle_chain_example().basis_product(0, 0) == vec(Q, {0, 1, 1}));
    CHECK_THROWS_AS(e1.multiply(vec(Q, {1, 0}), vec(Q, {1, 0, 0})), Error);
}

TEST_CASE("ideal closure") {
    CHECK(ideal_closure(socle_chain_example(), {vec(Q, {1, 0, 0})}) == span(Q, 3, {{1, 0, 0}, {0, 1, 1}}));
    auto m = two_minimal_ideals_example();
    CHECK(ideal_closure(m, {m.basis_product(2, 2)}) == span(Q, 4, {{0, 0, 1, 1}}));
    CHECK(ideal_closure(m, {}).dim() == 0);
}

TEST_CASE("annihilator and its series") {
    auto e1 = evo(Q, {{0, 0, 0}, {0, 1, 1}, {0, 0, 0}});
    CHECK(annihilator(e1) == span(Q, 3, {{1, 0, 0}}));
    CHECK(annihilator(Algebra::zero(Q, 3)).dim() == 3);
    CHECK(annihilator(decomposable_mat(Q)).dim() == 0);
    CHECK(ann_series(e1).asi == 1);
    auto t = evo(Q, {{0, 1, 0}, {0, 0, 0}, {0, 0, 1}});
    auto s = ann_series(t);
    CHECK(s.asi == 2);
    REQUIRE(s.chain.size() == 3);
    CHECK(s.chain[1] == span(Q, 3, {{1, 0, 0}}));
    CHECK(s.chain[2] == span(Q, 3, {{1, 0, 0}, {0, 1, 0}}));
    CHECK(s.radical == s.chain[2]);
    auto d = ann_series(decomposable_mat(Q));
    CHECK(d.asi == 0);
    CHECK(d.radical.dim() == 0);
}

TEST_CASE("rho powers and nilpotency") {
    auto t = evo(Q, {{0, 1, 0}, {0, 0, 0}, {0, 0, 1}});
    CHECK(rho_power(t, vec(Q, {0, 1, 0}), 2).dim() == 0);
    CHECK(rho_power(t, vec(Q, {0, 1, 0}), 0) == span(Q, 3, {{0, 1, 0}}));
    CHECK(rho_power(t, vec(Q, {1, 0, 0}), 1).dim() == 0);
    CHECK(nilpotency(evo(Q, {{0, 0, 1}, {0, 0, 0}, {0, 0, 0}})).nilpotent);
    CHECK_FALSE(nilpotency(evo(Q, {{1}})).nilpotent);
}

TEST_CASE("quotients and direct sums") {
    auto e1 = evo(Q, {{0, 0, 0}, {0, 1, 1}, {0, 0, 0}});
    auto q = quotient(e1, annihilator(e1));
    CHECK(q.algebra == evo(Q, {{1, 1}, {0, 0}}));
    CHECK(quotient(e1, Subspace::zero(Q, 3)).algebra == e1);
    CHECK(quotient(e1, Subspace::whole(Q, 3)).algebra.dim() == 0);
    CHECK_THROWS_AS(quotient(e1, span(Q, 3, {{0, 0, 1}})), Error);
    auto k = evo(Q, {{1}});
    auto k3 = direct_sum(direct_sum(k, k), k);
    CHECK(k3 == evo(Q, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    CHECK(direct_sum(e1, Algebra::zero(Q, 0)) == e1);
    CHECK(annihilator(direct_sum(e1, e1)).dim() == 2);
}

TEST_CASE("socle reports") {
    auto m = socle(two_minimal_ideals_example());
    REQUIRE(m.minimal_ideals.size() == 2);
    CHECK(m.socle == span(Q, 4, {{1, 0, 0, 0}, {0, 0, 1, 1}}));
    auto s = socle(socle_chain_example());
    REQUIRE(s.minimal_ideals.size() == 1);
    CHECK(s.minimal_ideals[0] == span(Q, 3, {{1, 0, 0}, {0, 1, 1}}));
    auto d = socle(decomposable_mat(Q));
    CHECK(d.minimal_ideals.size() == 2);
    CHECK(d.socle == span(Q, 3, {{1, 0, 0}, {0, 1, -1}}));
}

TEST_CASE("candidate socle agrees with exhaustive search over F2 and sampled F3") {
    for (const auto& a : f2_catalog()) {
        auto cand = minimal_ideals(a);
        auto ex = minimal_ideals_exhaustive(a);
        CHECK(cand.size() == ex.size());
        for (const auto& i : cand) CHECK(std::find(ex.begin(), ex.end(), i) != ex.end());
    }
    auto F3 = FieldSpec::prime(3);
    std::mt19937_64 rng(5);
    for (int it = 0; it < 300; ++it) {
        Matrix m(F3, 3, 3);
        for (int k = 0; k < 9; ++k) m(k / 3, k % 3) = random_scalar(F3, rng);
        auto a = Algebra::evolution(m);
        auto cand = minimal_ideals(a);
        auto ex = minimal_ideals_exhaustive(a);
        CHECK(cand.size() == ex.size());
        for (const auto& i : cand) CHECK(std::find(ex.begin(), ex.end(), i) != ex.end());
    }
}

TEST_CASE("socle chain is compatible with quotients") {
    for (const auto& a : f2_catalog()) {
        auto r = socle(a);
        for (std::size_t n = 0; n + 1 < r.chain.size(); ++n) {
            auto q = quotient(a, r.chain[n]);
            Subspace s = Subspace::zero(q.algebra.field(), q.algebra.dim());
            for (const auto& mi : minimal_ideals(q.algebra)) s = s + mi;
            std::vector<Vec> images;
            for (const auto& v : r.chain[n + 1].basis()) images.push_back(q.projection.apply(v));
            CHECK(Subspace::span(a.field(), q.algebra.dim(), images) == s);
        }
        CHECK(r.chain.size() == r.ssi);
    }
}

TEST_CASE("annihilator series properties on the F2 catalog") {
    for (const auto& a : f2_catalog()) {
        auto s = ann_series(a);
        CHECK(preimage_annihilator(a, s.radical) == s.radical);
        for (std::size_t i = 1; i < s.chain.size(); ++i) {
            auto sub = restrict_to(a, s.chain[i]);
            auto nil = nilpotency(sub);
            CHECK(nil.nilpotent);
            CHECK(nil.index <= (std::size_t{1} << i));
        }
        for (const auto& x : all_vectors(a.field(), 3))
            for (std::size_t k = 0; k < s.chain.size(); ++k) {
                CHECK(s.chain[k].contains(x) == (rho_power(a, x, k).dim() == 0));
                if (s.chain[k].contains(x))
                    for (std::size_t j = 0; j <= k; ++j) CHECK(s.chain[k - j].contains(rho_power(a, x, j)));
            }
    }
}

TEST_CASE("brute force isomorphism") {
    auto F5 = FieldSpec::prime(5);
    auto e1 = evo(F5, {{0, 0, 0}, {0, 1, 1}, {0, 0, 0}});
    auto e2 = evo(F5, {{0, 1, 0}, {0, 1, 1}, {0, 0, 0}});
    CHECK_FALSE(brute_force_iso(e1, e2).witness);
    auto same = brute_force_iso(e1, e1);
    REQUIRE(same.witness);
    CHECK(e1.is_homomorphism(*same.witness, e1));
    auto F3 = FieldSpec::prime(3);
    CHECK_FALSE(brute_force_iso(evo(F3, {{0, 1, 0}, {0, 0, 0}, {0, 0, 1}}), evo(F3, {{0, 1, 0}, {0, 0, 1}, {0, 0, 1}})).witness);
    CHECK_THROWS_AS(brute_force_iso(evo(Q, {{1}}), evo(Q, {{1}})), Error);
}

TEST_CASE("brute force iso is an equivalence on a slice of the F2 catalog") {
    auto cat = f2_catalog();
    std::mt19937_64 rng(3);
    for (int it = 0; it < 300; ++it) {
        const auto& a = cat[rng() % 512];
        auto p = inverse(Matrix::identity(a.field(), 3));
        Matrix g(a.field(), 3, 3);
        do {
            for (int k = 0; k < 9; ++k) g(k / 3, k % 3) = random_scalar(a.field(), rng);
        } while (det(g).is_zero());
        auto b = a.change_basis(g);
        auto ab = brute_force_iso(a, b);
        REQUIRE(ab.witness);
        CHECK(a.is_homomorphism(*ab.witness, b));
        auto inv = inverse(*ab.witness);
        CHECK(b.is_homomorphism(*inv, a));
        const auto& c = cat[rng() % 512];
        auto bc = brute_force_iso(b, c);
        if (bc.witness) CHECK(a.is_homomorphism(*bc.witness * *ab.witness, c));
        CHECK(canonical_form(a).algebra == canonical_form(b).algebra);
        CHECK((canonical_form(b).algebra == canonical_form(c).algebra) == bc.witness.has_value());
    }
}

TEST_CASE("full GL sweep counts") {
    CHECK(for_each_invertible(FieldSpec::prime(2), 3, [](const Matrix&) { return true; }) == 168);
    CHECK(for_each_invertible(FieldSpec::prime(3), 3, [](const Matrix&) { return true; }) == 11232);
    auto F5 = FieldSpec::prime(5);
    BruteForceOptions full{false, false};
    auto r = brute_force_iso(evo(F5, {{0, 0, 0}, {0, 1, 1}, {0, 0, 0}}), evo(F5, {{0, 1, 0}, {0, 1, 1}, {0, 0, 0}}), full);
    CHECK_FALSE(r.witness);
    CHECK(r.candidates == 1488000);
}
