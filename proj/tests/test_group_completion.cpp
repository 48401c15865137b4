/** Telescopes, localized homology and the group completion pipeline. */
#include <catch_amalgamated.hpp>

#include "hfib/group_completion.hpp"

using namespace hfib;

TEST_CASE("telescope of a finite group stabilizes at once")
{
    auto G = cyclic_group_monoid(3, 2);
    auto L = localized_homology(G, 1);
    CHECK(L.grouplike);
    CHECK(L.entries.size() == 6);
    for (const auto& e : L.entries)
    {
        CHECK(e.stabilized);
        CHECK(e.group == (e.degree == 0 ? "Z" : "0"));
    }
}

TEST_CASE("telescope of the truncated naturals")
{
    const int K = 6;
    auto nat = naturals_monoid(K, 2);
    auto T = telescope(nat, nat.sections(), 6, 1);
    REQUIRE(T.threads.size() == K + 1);
    // Oracle: the shift colimit of Z[N] truncated at K. Thread of grade g at stage s has label g - s,
    // and has a predecessor exactly when g >= 1.
    std::size_t stable = 0;
    for (const auto& th : T.threads)
    {
        int g = *th.shift + 6;
        CHECK(th.groups[0] == "Z");
        CHECK(th.stable[0] == (g >= 1));
        stable += th.stable[0];
    }
    CHECK(stable == K);

    auto L = localized_homology(nat, 1);
    REQUIRE(L.telescope);
    CHECK(L.stable_in(0).size() == K);
    for (const auto& e : L.entries)
        CHECK(e.telescope_agrees);
}

TEST_CASE("block sum telescope stabilizes H_1 at Z/2")
{
    auto M = block_sum_monoid(3, 3);
    auto L = localized_homology(M, 1, std::vector<Index>{M.sections()[0]}, 3);
    const LocalizedEntry* top = nullptr;
    for (const auto& e : L.entries)
        if (e.label == "0" && e.degree == 1)
            top = &e;
    REQUIRE(top);
    CHECK(top->stabilized);
    CHECK(top->group == "Z/2");
    CHECK(top->telescope_agrees);
    // BS_1 -> BS_2 is not an iso on H_1, so the thread of label -1 is unstable there.
    for (const auto& e : L.entries)
        if (e.label == "-1" && e.degree == 1)
            CHECK_FALSE(e.stabilized);
    REQUIRE(L.telescope);
    for (const auto& th : L.telescope->threads)
        if (th.label == "0")
            CHECK(th.stable_from[1] == 2);
}

TEST_CASE("group completion routes")
{
    LocalizationSpec spec{SpecKind::h_range, 1};
    auto Z2 = cyclic_group_monoid(2, 3);
    auto g = group_completion_verify(Z2, spec);
    CHECK(g.route == "grouplike");
    CHECK(g.outcome == Outcome::confirmed);
    CHECK(*g.contractible);

    auto nat = naturals_monoid(4, 2);
    KnownAnswer loops{"loops-of-circle", {{"*", 0, "Z"}, {"*", 1, "0"}}};
    auto n = group_completion_verify(nat, spec, loops);
    CHECK(n.route == "telescope");
    CHECK(n.outcome == Outcome::confirmed);
    CHECK_FALSE(n.acts_by_vacuous);
    CHECK(n.known.size() == 2 * 4);

    KnownAnswer wrong{"wrong", {{"*", 0, "Z^2"}}};
    CHECK(group_completion_verify(nat, spec, wrong).outcome == Outcome::refuted);

    auto M = block_sum_monoid(3, 3);
    KnownAnswer bgl{"BS_infinity", {{"0", 1, "Z/2"}}};
    auto b = group_completion_verify(M, spec, bgl, {std::vector<Index>{M.sections()[0]}, 3});
    CHECK(b.outcome == Outcome::confirmed);
    REQUIRE(b.known.size() == 1);
    CHECK(b.known[0].status == "match");

    // {1, z} with z z = z: right multiplication by z merges the components.
    auto idem = discrete_monoid({"1", "z"}, {0, 1, 1, 1}, 0, 2, {1});
    CHECK(group_completion_verify(idem, spec).outcome == Outcome::not_checkable);

    // Reports are byte-stable.
    CHECK(n.to_json().dump() == group_completion_verify(nat, spec, loops).to_json().dump());
}
