#include "doctest.h"

#include "evoclass/field.hpp"

using namespace evoclass;

TEST_CASE("rational and residue arithmetic") {
    auto Q = FieldSpec::rationals();
    auto F5 = FieldSpec::prime(5);
    CHECK(Scalar::parse(Q, "1/2") + Scalar::parse(Q, "1/3") == Scalar::parse(Q, "5/6"));
    CHECK(Scalar::from_int(F5, 3).inverse() == Scalar::from_int(F5, 2));
    CHECK((-Scalar::zero(Q)).is_zero());
    CHECK_THROWS_AS(Scalar::parse(Q, "4/-2"), Error);
    CHECK(Scalar::parse(Q, "6/4").to_string() == "3/2");
    CHECK(Scalar::parse(F5, "1/2") == Scalar::from_int(F5, 3));
    CHECK_THROWS_AS(Scalar::zero(Q).inverse(), Error);
    CHECK_THROWS_AS(Scalar::one(Q) + Scalar::one(F5), Error);
    CHECK_THROWS_AS(Scalar::parse(F5, "1/5"), Error);
    CHECK_THROWS_AS(Scalar::parse(Q, "x"), Error);
    CHECK_THROWS_AS(FieldSpec::prime(9), Error);
}

TEST_CASE("square witnesses") {
    auto Q = FieldSpec::rationals();
    auto w = sqrt(Scalar::parse(Q, "4/9"));
    REQUIRE(w);
    CHECK(w->to_string() == "2/3");
    CHECK_FALSE(is_square(Scalar::from_int(Q, 2)));
    CHECK_FALSE(is_square(Scalar::from_int(Q, -4)));
    auto F5 = FieldSpec::prime(5);
    CHECK_FALSE(is_square(Scalar::from_int(F5, 2)));
    CHECK(sqrt(Scalar::from_int(F5, 4))->residue() == 2);
    CHECK(nth_root(Scalar::parse(Q, "-8/27"), 3)->to_string() == "-2/3");
}

TEST_CASE("square counts over prime fields") {
    for (std::uint32_t p = 2; p <= 100; ++p) {
        if (!is_prime_number(p)) continue;
        auto f = FieldSpec::prime(p);
        std::size_t squares = 0;
        for (const auto& x : units(f)) squares += is_square(x);
        CHECK(squares == (p == 2 ? 1 : (p - 1) / 2));
    }
}

TEST_CASE("field axioms on random triples") {
    std::mt19937_64 rng(7);
    for (auto f : {FieldSpec::rationals(), FieldSpec::prime(2), FieldSpec::prime(7), FieldSpec::prime(101)}) {
        for (int it = 0; it < 300; ++it) {
            Scalar a = random_scalar(f, rng), b = random_scalar(f, rng), c = random_scalar(f, rng);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a - a == Scalar::zero(f));
            if (!a.is_zero()) CHECK(a * a.inverse() == Scalar::one(f));
            if (!a.is_zero()) CHECK(sqrt(a * a)->pow(2) == a * a);
        }
    }
}
