#include "doctest.h"

#include <map>
#include <random>

#include "evoclass/bruteforce.hpp"
#include "evoclass/moduli.hpp"
#include "helpers.hpp"

using namespace evoclass;
using namespace testing_helpers;

namespace {

const FieldSpec Q = FieldSpec::rationals();
const FieldSpec F2 = FieldSpec::prime(2);
const FieldSpec F3 = FieldSpec::prime(3);
const FieldSpec F5 = FieldSpec::prime(5);

/// Context point fixing the base data of the adjunction groups, nullptr otherwise.
std::optional<ModuliPoint> context_for(ActionId id, FieldSpec f) {
    Algebra swap = evo(f, {{0, 1}, {1, 0}});
    Matrix zero2(f, 2, 2);
    switch (id) {
        case ActionId::AdGroup:
            return ModuliPoint::ad(evo(f, {{1, 1}, {0, 0}}), zero2);
        case ActionId::AuGroupK0:
            return ModuliPoint::au(swap, zero2, zero_vec(f, 2), false);
        case ActionId::AuGroupK1:
            return ModuliPoint::au(swap, zero2, zero_vec(f, 2), true);
        case ActionId::AwGroup:
            return ModuliPoint::aw(evo(f, {{1, 0}, {1, 0}}), zero2, vec(f, {0, 1}));
        default:
            return std::nullopt;
    }
}

std::vector<Scalar> ints(FieldSpec f, const std::vector<long long>& xs) { return vec(f, xs); }

}  // namespace

TEST_CASE("moduli: action names round trip") {
    for (auto id : all_actions()) CHECK(parse_action(action_name(id)) == id);
    CHECK_THROWS_AS(parse_action("nope"), Error);
}

TEST_CASE("moduli: documented action formulas") {
    // (l = 1, i = 1) on [[a, b], [c, d]] gives [[d, c], [b, a]].
    auto x = ModuliPoint::of_matrix(ActionId::SocleMinimalPair, mat(Q, {{1, 2}, {3, 5}}));
    GroupElement g{ints(Q, {1}), true, {}, {}};
    CHECK(act(g, x).matrix() == mat(Q, {{5, 3}, {2, 1}}));

    auto p = ModuliPoint::of_values(ActionId::SocleSplitWeighted, ints(Q, {1, 3, 7}));
    CHECK(act(GroupElement{ints(Q, {2}), false, {}, {}}, p).values == ints(Q, {4, 12, 14}));
    CHECK(act(GroupElement{ints(Q, {2}), true, {}, {}}, p).values == ints(Q, {12, 4, 14}));

    CHECK(act(identity_element(x), x) == x);
    CHECK(act(identity_element(p), p) == p);

    // A non-square scale is rejected.
    CHECK_THROWS_AS(act(GroupElement{ints(Q, {2}), false, {}, {}}, x), Error);
    auto r = ModuliPoint::of_values(ActionId::SquareClass, ints(Q, {3}));
    CHECK_THROWS_AS(validate(GroupElement{ints(Q, {0}), false, {}, {}}, r), Error);
}

TEST_CASE("moduli: point validation") {
    CHECK_THROWS_AS(ModuliPoint::of_matrix(ActionId::SocleMinimalPair, mat(Q, {{1, 0}, {3, 5}})), Error);
    CHECK_THROWS_AS(ModuliPoint::of_matrix(ActionId::SocleMinimalPair, mat(Q, {{1, 2}, {2, 4}})), Error);
    CHECK_THROWS_AS(ModuliPoint::of_values(ActionId::SocleSplit, ints(Q, {0, 0})), Error);
    CHECK_THROWS_AS(ModuliPoint::of_matrix(ActionId::TypeISwap, mat(Q, {{1, 1}, {1, 1}})), Error);
    CHECK_THROWS_AS(ModuliPoint::of_matrix(ActionId::SocleMinimalSingleWeighted, mat(Q, {{1, 2, 1}, {3, 5, 1}, {0, 0, 1}})), Error);
    CHECK_NOTHROW(ModuliPoint::of_matrix(ActionId::SocleMinimalSingleWeighted, mat(Q, {{1, 2, 1}, {3, 5, 0}, {0, 0, 1}})));
}

TEST_CASE("moduli: same_orbit examples") {
    auto three = ModuliPoint::of_values(ActionId::SquareClass, ints(Q, {3}));
    auto r = same_orbit(three, ModuliPoint::of_values(ActionId::SquareClass, ints(Q, {12})));
    REQUIRE(r.verdict == Verdict::Yes);
    CHECK(r.witness->scalars[0] == Scalar::from_int(Q, 4));
    CHECK(same_orbit(three, ModuliPoint::of_values(ActionId::SquareClass, ints(Q, {6}))).verdict == Verdict::No);

    auto v10 = ModuliPoint::of_values(ActionId::SocleSplit, ints(F3, {1, 0}));
    auto c = same_orbit(v10, ModuliPoint::of_values(ActionId::SocleSplit, ints(F3, {0, 1})));
    REQUIRE(c.verdict == Verdict::Yes);
    CHECK(c.witness->flip);
    CHECK(c.witness->scalars[0].is_one());
    CHECK(same_orbit(v10, ModuliPoint::of_values(ActionId::SocleSplit, ints(F3, {1, 1}))).verdict == Verdict::No);

    auto t = ModuliPoint::of_matrix(ActionId::TypeISwap, mat(Q, {{1, 2}, {5, 1}}));
    CHECK(same_orbit(t, ModuliPoint::of_matrix(ActionId::TypeISwap, mat(Q, {{1, 5}, {2, 1}}))).verdict == Verdict::Yes);
    CHECK(same_orbit(t, ModuliPoint::of_matrix(ActionId::TypeISwap, mat(Q, {{1, 5}, {3, 1}}))).verdict == Verdict::No);

    CHECK_THROWS_AS(same_orbit(three, v10), Error);
}

TEST_CASE("moduli: orbit counts") {
    auto plane = orbit_count(ActionId::MonomialPlane, F3);
    CHECK(plane.count == 2);
    auto pts = all_points(ActionId::MonomialPlane, F3);
    std::map<std::vector<Scalar>, std::size_t> orbit;
    for (std::size_t i = 0; i < pts.size(); ++i) orbit[pts[i].values] = plane.orbit_of[i];
    CHECK(orbit[ints(F3, {1, 0})] != orbit[ints(F3, {1, 1})]);
    CHECK(plane.representatives[0].values == ints(F3, {0, 1}));
    CHECK(plane.representatives[1].values == ints(F3, {1, 1}));

    CHECK(orbit_count(ActionId::SquareClass, F5).count == 2);
    CHECK(orbit_count(ActionId::SquareClass, F2).count == 1);
    CHECK(orbit_count(ActionId::SocleSplit, F3).count == 5);
    // x y = 1 is forced over F2, so the Type I set is empty there.
    CHECK(orbit_count(ActionId::TypeISwap, F2).count == 0);
    CHECK_THROWS_AS(orbit_count(ActionId::SquareClass, Q), Error);
}

TEST_CASE("moduli: group action laws") {
    std::mt19937_64 rng(17);
    for (FieldSpec f : {F2, F3, F5, Q}) {
        for (auto id : all_actions()) {
            CAPTURE(std::string(action_name(id)));
            CAPTURE(f.name());
            auto ctx = context_for(id, f);
            const ModuliPoint* cp = ctx ? &*ctx : nullptr;
            if (f == F2 && id == ActionId::TypeISwap) continue;
            for (int trial = 0; trial < 40; ++trial) {
                auto x = random_point(id, f, rng, cp);
                auto g = random_element(id, f, rng, cp);
                auto h = random_element(id, f, rng, cp);
                CHECK(act(compose(g, h, x), x) == act(g, act(h, x)));
                CHECK(act(identity_element(x), x) == x);
                CHECK(act(inverse(g, x), act(g, x)) == x);
            }
        }
    }
}

TEST_CASE("moduli: same_orbit agrees with exhaustive partitions") {
    for (FieldSpec f : {F2, F3}) {
        for (auto id : all_actions()) {
            CAPTURE(std::string(action_name(id)));
            CAPTURE(f.name());
            auto ctx = context_for(id, f);
            const ModuliPoint* cp = ctx ? &*ctx : nullptr;
            auto pts = all_points(id, f, cp);
            auto oc = orbit_count(id, f, cp);
            std::vector<std::size_t> rep_index(oc.count);
            for (std::size_t i = 0; i < pts.size(); ++i)
                if (pts[i] == oc.representatives[oc.orbit_of[i]]) rep_index[oc.orbit_of[i]] = i;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                auto r = same_orbit(pts[i], oc.representatives[oc.orbit_of[i]]);
                REQUIRE(r.verdict == Verdict::Yes);
                CHECK(act(*r.witness, pts[i]) == oc.representatives[oc.orbit_of[i]]);
            }
            for (std::size_t a = 0; a < oc.count; ++a)
                for (std::size_t b = 0; b < oc.count; ++b)
                    CHECK((same_orbit(oc.representatives[a], oc.representatives[b]).verdict == Verdict::Yes) == (a == b));
        }
    }
}

TEST_CASE("moduli: socle orbits are isomorphism classes") {
    const ActionId ids[] = {ActionId::SocleMinimalPair, ActionId::SocleMinimalSingle, ActionId::SocleMinimalPairWeighted,
                            ActionId::SocleMinimalSingleWeighted, ActionId::SocleSplit, ActionId::SocleSplitWeighted,
                            ActionId::TypeISwap};
    for (FieldSpec f : {F2, F3}) {
        for (auto id : ids) {
            CAPTURE(std::string(action_name(id)));
            CAPTURE(f.name());
            auto pts = all_points(id, f);
            auto oc = orbit_count(id, f);
            std::map<std::vector<Scalar>, std::size_t> class_of;
            std::vector<std::size_t> cls;
            for (const auto& x : pts) {
                auto key = canonical_form(Algebra::evolution(structure_matrix(x))).algebra.tensor();
                cls.push_back(class_of.emplace(key, class_of.size()).first->second);
            }
            CHECK(class_of.size() == oc.count);
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j) CHECK((cls[i] == cls[j]) == (oc.orbit_of[i] == oc.orbit_of[j]));
        }
    }
}

TEST_CASE("moduli: adjunction orbit witnesses are isomorphisms") {
    std::mt19937_64 rng(5);
    for (auto id : {ActionId::AuGroupK0, ActionId::AuGroupK1, ActionId::AwGroup}) {
        auto ctx = context_for(id, F3);
        for (int trial = 0; trial < 20; ++trial) {
            auto x = random_point(id, F3, rng, &*ctx);
            auto y = act(random_element(id, F3, rng, &*ctx), x);
            auto r = same_orbit(x, y);
            REQUIRE(r.verdict == Verdict::Yes);
            CHECK(brute_force_iso(build(adjunction_spec(x)), build(adjunction_spec(y))).witness.has_value());
        }
    }
}
