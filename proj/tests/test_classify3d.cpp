#include "doctest.h"

#include <map>
#include <random>

#include "evoclass/bruteforce.hpp"
#include "evoclass/classify3d.hpp"
#include "helpers.hpp"

using namespace evoclass;
using namespace testing_helpers;

namespace {

const FieldSpec Q = FieldSpec::rationals();
const FieldSpec F2 = FieldSpec::prime(2);
const FieldSpec F3 = FieldSpec::prime(3);

ClassificationReport of(FieldSpec f, const std::vector<std::vector<long long>>& rows) { return classify(evo(f, rows)); }

/// Brute-force class index of every matrix, keyed by the least tensor in the orbit.
std::vector<std::size_t> oracle_partition(const std::vector<Matrix>& ms) {
    std::map<std::vector<Scalar>, std::size_t> ids;
    std::vector<std::size_t> out;
    for (const auto& m : ms) out.push_back(ids.emplace(canonical_form(Algebra::evolution(m)).algebra.tensor(), ids.size()).first->second);
    return out;
}

bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::map<std::size_t, std::size_t> ab, ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (ab.emplace(a[i], b[i]).first->second != b[i]) return false;
        if (ba.emplace(b[i], a[i]).first->second != a[i]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("classify3d: label names round trip") {
    for (auto c : all_case_labels()) CHECK(parse_case_label(case_label_name(c)) == c);
    CHECK_THROWS_AS(parse_case_label("nope"), Error);
}

TEST_CASE("classify3d: documented examples") {
    auto r = of(Q, {{0, 1, 0}, {0, 0, 0}, {0, 0, 1}});
    CHECK(r.label == CaseLabel::AnnLineDecomposable);
    CHECK(*r.canonical_matrix == mat(Q, {{0, 1, 0}, {0, 0, 0}, {0, 0, 1}}));
    CHECK(r.invariants.asi == 2);
    CHECK(r.invariants.dim_ann == 1);

    auto d = of(Q, {{1, 0, 0}, {0, 1, -1}, {0, -1, 1}});
    CHECK(d.label == CaseLabel::SocleDecomposable);
    CHECK(*d.canonical_matrix == mat(Q, {{1, 0, 0}, {0, 1, -1}, {0, -1, 1}}));
    CHECK(*d.invariants.dim_soc == 2);

    auto k = of(Q, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(k.label == CaseLabel::SocleThreeLines);
    CHECK(canonical_equal(k, k) == Verdict::Yes);
}

TEST_CASE("classify3d: degenerate leaves classify to themselves") {
    for (FieldSpec f : {F3, Q}) {
        const std::pair<CaseLabel, std::vector<std::vector<long long>>> leaves[] = {
            {CaseLabel::AnnLineDecomposable, {{0, 1, 0}, {0, 0, 0}, {0, 0, 1}}},
            {CaseLabel::AnnLineIndecomposable, {{0, 1, 0}, {0, 0, 1}, {0, 0, 1}}},
            {CaseLabel::AnnLineSquareClass, {{0, 1, 2}, {0, 0, 0}, {0, 0, 0}}},
            {CaseLabel::AnnPlaneNilpotent, {{0, 0, 1}, {0, 0, 0}, {0, 0, 0}}},
            {CaseLabel::AnnPlaneIdempotent, {{0, 0, 0}, {0, 0, 0}, {0, 0, 1}}},
            {CaseLabel::Zero, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}},
        };
        for (const auto& [label, rows] : leaves) {
            CAPTURE(std::string(case_label_name(label)));
            auto r = of(f, rows);
            CHECK(r.label == label);
            CHECK(*r.canonical_matrix == mat(f, rows));
        }
        auto nil = of(f, {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
        CHECK(nil.label == CaseLabel::NilpotentIndexThree);
        CHECK(!nil.witness);
        auto ad = of(f, {{0, 1, 1}, {0, 1, 1}, {0, 1, 2}});
        CHECK(ad.label == CaseLabel::AnnLineAdjoined);
        REQUIRE(ad.canonical_spec);
        CHECK(classify(build(*ad.canonical_spec)).label == CaseLabel::AnnLineAdjoined);
    }
}

TEST_CASE("classify3d: canonical_equal examples") {
    auto a = of(Q, {{0, 1, 0}, {0, 0, 0}, {0, 0, 1}});
    auto b = of(Q, {{0, 1, 0}, {0, 0, 1}, {0, 0, 1}});
    CHECK(canonical_equal(a, b) == Verdict::No);
    auto b3 = of(Q, {{0, 1, 3}, {0, 0, 0}, {0, 0, 0}});
    CHECK(canonical_equal(b3, of(Q, {{0, 1, 12}, {0, 0, 0}, {0, 0, 0}})) == Verdict::Yes);
    CHECK(canonical_equal(b3, of(Q, {{0, 1, 6}, {0, 0, 0}, {0, 0, 0}})) == Verdict::No);
    // Swapping the two live indices inverts the parameter, which stays in its square class.
    CHECK(canonical_equal(b3, of(Q, {{0, 3, 1}, {0, 0, 0}, {0, 0, 0}})) == Verdict::Yes);
    CHECK(canonical_equal(a, a) == Verdict::Yes);
}

TEST_CASE("classify3d: F2 catalog matches the isomorphism oracle") {
    auto c = catalog(F2, 4);
    REQUIRE(c.matrices.size() == 512);
    std::size_t total = 0, nondegenerate = 0;
    for (const auto& [label, count] : c.leaf_counts) total += count;
    CHECK(total == 512);
    for (const auto& r : c.reports) nondegenerate += r.invariants.nondegenerate;
    CHECK(nondegenerate == 343);
    CHECK(c.unknown_comparisons == 0);
    auto oracle = oracle_partition(c.matrices);
    CHECK(same_partition(c.class_of, oracle));
    std::size_t oracle_classes = *std::max_element(oracle.begin(), oracle.end()) + 1;
    CHECK(c.classes.size() == oracle_classes);
    // Soundness: every canonical algebra is isomorphic to its source.
    for (std::size_t i = 0; i < 512; ++i) {
        const auto& r = c.reports[i];
        if (!r.witness) continue;
        CHECK(r.source.change_basis(*r.witness) == r.canonical_algebra());
    }
}

TEST_CASE("classify3d: F3 samples agree with the isomorphism oracle") {
    std::mt19937_64 rng(3);
    auto ms = all_structure_matrices(F3);
    std::vector<ClassificationReport> rs;
    for (int t = 0; t < 400; ++t) rs.push_back(classify(Algebra::evolution(ms[rng() % ms.size()])));
    // Pairs within a leaf, plus isomorphic copies obtained by permuting and scaling.
    for (std::size_t i = 0; i + 1 < rs.size(); i += 2) {
        const auto& r1 = rs[i];
        auto copy = classify(r1.source.change_basis(mat(F3, {{0, 2, 0}, {0, 0, 1}, {1, 0, 0}})));
        CHECK(copy.label == r1.label);
        CHECK(canonical_equal(r1, copy) == Verdict::Yes);
        const auto& r2 = rs[i + 1];
        if (r1.label != r2.label) continue;
        bool iso = brute_force_iso(r1.source, r2.source).witness.has_value();
        CHECK((canonical_equal(r1, r2) == Verdict::Yes) == iso);
    }
}

TEST_CASE("classify3d: socle moduli points classify to their own leaf") {
    const std::pair<ActionId, CaseLabel> ids[] = {
        {ActionId::SocleMinimalPair, CaseLabel::SocleMinimalPair},
        {ActionId::SocleMinimalSingle, CaseLabel::SocleMinimalSingle},
        {ActionId::SocleMinimalPairWeighted, CaseLabel::SocleMinimalPairWeighted},
        {ActionId::SocleMinimalSingleWeighted, CaseLabel::SocleMinimalSingleWeighted},
        {ActionId::SocleSplit, CaseLabel::SocleSplit},
        {ActionId::SocleSplitWeighted, CaseLabel::SocleSplitWeighted},
    };
    for (const auto& [id, label] : ids) {
        CAPTURE(std::string(action_name(id)));
        for (const auto& x : all_points(id, F3)) {
            auto r = classify(Algebra::evolution(structure_matrix(x)));
            CHECK(r.label == label);
            bool weighted = id == ActionId::SocleMinimalPairWeighted || id == ActionId::SocleMinimalSingleWeighted ||
                            id == ActionId::SocleSplitWeighted;
            CHECK(r.invariants.ssi == (weighted ? 2u : 1u));
            REQUIRE(r.moduli_point);
            CHECK(same_orbit(*r.moduli_point, x).verdict == Verdict::Yes);
        }
    }
}

TEST_CASE("classify3d: single-support sub-positions") {
    // e3^2 supported on the second socle vector is normalized by swapping; both positions of
    // the same algebra must land in one orbit.
    std::size_t swapped = 0;
    for (const auto& m : all_structure_matrices(F3)) {
        auto a = Algebra::evolution(m);
        if (!is_nondegenerate(a)) continue;
        auto r = classify(a);
        if (r.label != CaseLabel::SocleMinimalSingle && r.label != CaseLabel::SocleMinimalSingleWeighted) continue;
        auto flipped = classify(a.change_basis(mat(F3, {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}})));
        swapped += r.socle_swapped != flipped.socle_swapped;
        CHECK(canonical_equal(r, flipped) == Verdict::Yes);
    }
    CHECK(swapped > 0);
}

TEST_CASE("classify3d: random rational matrices reach exactly one leaf") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> entry(-3, 3), zero(0, 3);
    std::map<CaseLabel, std::size_t> seen;
    for (int t = 0; t < 500; ++t) {
        Matrix m(Q, 3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = Scalar::from_int(Q, zero(rng) == 0 ? 0 : entry(rng));
        auto r = classify(Algebra::evolution(m));
        ++seen[r.label];
        CHECK(canonical_equal(r, r) == Verdict::Yes);
    }
    CHECK(seen.size() > 5);
}
