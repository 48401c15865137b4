/** Theorem B reports, the groupoid covering oracle, homotopy colimits and Puppe. */
#include <catch_amalgamated.hpp>

#include "hfib/harness.hpp"
#include "hfib/monoid.hpp"

using namespace hfib;

namespace {

std::vector<std::string> H(const TruncatedSSet& X, std::size_t top)
{
    return group_strings(homology_of(X, top));
}

/// One-object category [0] and the arrow category [1].
std::shared_ptr<FiniteCategory> arrow() { return std::make_shared<FiniteCategory>(ordinal_category(1)); }

}  // namespace

TEST_CASE("comma categories of small functors")
{
    auto C = poset_category(3, {{0, 1}, {1, 2}});
    Functor id{&C, &C, {0, 1, 2}, {}};
    for (Index f = 0; f < C.morphism_count(); ++f)
        id.on_morphisms.push_back(f);
    for (Index c = 0; c < 3; ++c)
        CHECK(reduced_homology_vanishes(share(nerve(comma_category(id, c).category, 3)), 2));

    // 1 -> BG: f / * is discrete on G.
    auto G = cyclic_group_category(3);
    auto one = terminal_category();
    Functor pt{&one, &G, {0}, {0}};
    auto K = comma_category(pt, 0);
    CHECK(K.category.object_count() == 3);
    CHECK(K.category.morphism_count() == 3);

    // [1] -> BG hitting g: |G| copies of [1].
    auto I = ordinal_category(1);
    Index nonid = 0;
    for (Index m = 0; m < I.morphism_count(); ++m)
        if (!I.is_identity(m))
            nonid = m;
    Functor edge{&I, &G, {0, 0}, std::vector<Index>(I.morphism_count(), 0)};
    edge.on_morphisms[nonid] = 1;
    auto E = comma_category(edge, 0);
    CHECK(E.category.object_count() == 6);
    CHECK(E.category.morphism_count() == 9);
    CHECK(H(nerve(E.category, 3), 2) == std::vector<std::string>{"Z^3", "0", "0"});
}

TEST_CASE("groupoid covering oracle")
{
    auto one = terminal_category();
    Functor id{&one, &one, {0}, {0}};
    auto trivial = groupoid_cover_oracle(id, 0, 3);
    CHECK(H(*trivial.object(), 2) == std::vector<std::string>{"Z", "0", "0"});

    auto Z2 = cyclic_group_category(2);
    Functor pt{&one, &Z2, {0}, {0}};
    auto two = groupoid_cover_oracle(pt, 0, 3);
    CHECK(two.object()->size(0) == 2);
    CHECK(H(*two.object(), 2) == std::vector<std::string>{"Z^2", "0", "0"});

    auto I = ordinal_category(1);
    Functor edge{&I, &Z2, {0, 0}, {}};
    for (Index m = 0; m < I.morphism_count(); ++m)
        edge.on_morphisms.push_back(I.is_identity(m) ? 0 : 1);
    CHECK(H(*groupoid_cover_oracle(edge, 0, 3).object(), 2) == std::vector<std::string>{"Z^2", "0", "0"});

    Functor into_poset{&one, &I, {0}, {I.identity(0)}};
    CHECK_THROWS_AS(groupoid_cover_oracle(into_poset, 0, 3), UnsupportedOracle);
}

TEST_CASE("theorem B on comma categories")
{
    LocalizationSpec spec{SpecKind::h_range, 2};
    auto one = terminal_category();
    auto Z2 = cyclic_group_category(2);
    Functor pt{&one, &Z2, {0}, {0}};
    auto r = theorem_b_verify(pt, 0, 4, spec, {OracleKind::groupoid_cover, {}});
    CHECK(r.outcome == Outcome::confirmed);
    CHECK(r.fiber_homology == std::vector<std::string>{"Z^2", "0", "0"});
    CHECK(r.comparison_map->verdict == Verdict::yes);
    CHECK(r.exit_code() == 0);

    auto I = ordinal_category(1);
    Functor edge{&I, &Z2, {0, 0}, {}};
    for (Index m = 0; m < I.morphism_count(); ++m)
        edge.on_morphisms.push_back(I.is_identity(m) ? 0 : 1);
    auto e = theorem_b_verify(edge, 0, 4, spec, {OracleKind::groupoid_cover, {}});
    CHECK(e.outcome == Outcome::confirmed);

    // The poset [1] is not a groupoid: no cover, but the known-answer route works and is labeled.
    Functor id{&I, &I, {0, 1}, {}};
    for (Index m = 0; m < I.morphism_count(); ++m)
        id.on_morphisms.push_back(m);
    CHECK(theorem_b_verify(id, 1, 3, {SpecKind::h_range, 1}, {OracleKind::groupoid_cover, {}}).outcome ==
          Outcome::not_checkable);
    KnownAnswer ka{"test", {{"*", 0, "Z"}, {"*", 1, "0"}}};
    auto k = theorem_b_verify(id, 1, 3, {SpecKind::h_range, 1}, {OracleKind::known_answer, ka});
    CHECK(k.outcome == Outcome::confirmed);
    CHECK(k.oracle == "known-answer:test");

    // Out of range.
    CHECK(theorem_b_verify(pt, 0, 2, {SpecKind::h_range, 2}, {OracleKind::groupoid_cover, {}}).outcome ==
          Outcome::not_checkable);
}

TEST_CASE("theorem B on actions")
{
    LocalizationSpec spec{SpecKind::h_range, 1};
    auto nat = naturals_monoid(3, 3);
    auto r = theorem_b_verify(nat.self_action(), 0, spec, {OracleKind::fibration_pullback, {}});
    CHECK(r.outcome == Outcome::hypotheses_not_met);
    CHECK(r.exit_code() == 2);
    REQUIRE(r.acts_by_witness);
    CHECK(*r.acts_by_witness == "1");
    CHECK(r.fiber_homology.empty());

    auto Z3 = cyclic_group_monoid(3, 3);
    auto g = theorem_b_verify(Z3.self_action(), 0, spec, {OracleKind::fibration_pullback, {}});
    CHECK(g.outcome == Outcome::confirmed);
    CHECK(g.fiber_homology == std::vector<std::string>{"Z^3", "0"});
    CHECK(g.comparison_map->verdict == Verdict::yes);

    auto u = theorem_b_verify(Z3.self_action(), 0, spec, {OracleKind::groupoid_cover, {}});
    CHECK(u.outcome == Outcome::not_checkable);

    // Byte-identical JSON on reruns.
    auto again = theorem_b_verify(Z3.self_action(), 0, spec, {OracleKind::fibration_pullback, {}});
    CHECK(g.to_json().dump() == again.to_json().dump());
}

TEST_CASE("homotopy colimits")
{
    const std::size_t N = 3;
    // Terminal shape: the hocolim is X itself up to equivalence.
    auto T = std::make_shared<FiniteCategory>(terminal_category());
    auto X = share(build_standard(StandardKind::boundary, 2, {}, N));
    Diagram D{T, {X}, {identity_map(X)}};
    auto h = hocolim(D);
    CHECK(is_equivalence(2, h.inclusion(0)).verdict == Verdict::yes);

    // All points: hocolim = BI.
    auto I = arrow();
    auto pt = share(point(N));
    Diagram P{I, {pt, pt}, {}};
    for (Index m = 0; m < I->morphism_count(); ++m)
        P.arrows.push_back(identity_map(pt));
    auto hp = hocolim(P);
    CHECK(is_isomorphism(hp.to_base));

    // pt <- 2 points -> pt: a circle.
    auto span = std::make_shared<FiniteCategory>(poset_category(3, {{1, 0}, {1, 2}}));
    auto two = share(discrete({"a", "b"}, N));
    Diagram S{span, {pt, two, pt}, {}};
    for (Index m = 0; m < span->morphism_count(); ++m)
    {
        Index s = span->source(m), t = span->target(m);
        S.arrows.push_back(s == t ? identity_map(S.objects[s]) : map_to_point(two, pt));
    }
    CHECK(H(*hocolim(S).object(), 2) == std::vector<std::string>{"Z", "Z", "0"});
}

TEST_CASE("Puppe squares")
{
    const std::size_t N = 3;
    LocalizationSpec spec{SpecKind::h_range, 1};
    auto pt = share(point(N));
    auto two = share(discrete({"a", "b"}, N));
    SMap swap{two, two, std::vector<std::vector<Index>>(N + 1, std::vector<Index>{1, 0})};

    // B(Z/2) acting on two points over a point.
    auto G = std::make_shared<FiniteCategory>(cyclic_group_category(2));
    Diagram Y{G, {two}, {identity_map(two), swap}};
    Diagram X{G, {pt}, {identity_map(pt), identity_map(pt)}};
    Transformation f{{map_to_point(two, pt)}};
    auto r = puppe_check(Y, X, f, 0, spec, {OracleKind::fibration_pullback, {}});
    CHECK(r.outcome == Outcome::confirmed);
    CHECK(r.fiber_homology == std::vector<std::string>{"Z^2", "0"});
    CHECK(r.oracle_homology == std::vector<std::string>{"Z^2", "0"});

    // Collapsing one fiber breaks the square over the arrow.
    auto I = arrow();
    Index up = 0;
    for (Index m = 0; m < I->morphism_count(); ++m)
        if (!I->is_identity(m))
            up = m;
    Diagram Yb{I, {two, pt}, {}};
    Diagram Xb{I, {pt, pt}, {}};
    for (Index m = 0; m < I->morphism_count(); ++m)
    {
        Index s = I->source(m);
        Yb.arrows.push_back(m == up ? map_to_point(two, pt) : identity_map(Yb.objects[s]));
        Xb.arrows.push_back(identity_map(pt));
    }
    Transformation fb{{map_to_point(two, pt), identity_map(pt)}};
    auto b = puppe_check(Yb, Xb, fb, 0, spec, {OracleKind::fibration_pullback, {}});
    CHECK(b.outcome == Outcome::hypotheses_not_met);
    REQUIRE(b.failing_square);
    CHECK(*b.failing_square == I->morphism(up).name);

    // A constant diagram with an isomorphism between Kan objects.
    Diagram Yc{I, {two, two}, {}};
    for (Index m = 0; m < I->morphism_count(); ++m)
        Yc.arrows.push_back(identity_map(two));
    Transformation fc{{swap, swap}};
    CHECK(puppe_check(Yc, Yc, fc, 1, spec, {OracleKind::fibration_pullback, {}}).outcome == Outcome::confirmed);
}
