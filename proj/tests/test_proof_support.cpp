/** The bisimplicial objects X_sigma, X0_sigma, their horn variants, and Xtilde. */
#include <catch_amalgamated.hpp>

#include "hfib/monoid.hpp"
#include "hfib/proof_support.hpp"

using namespace hfib;

namespace {

/// The string with a single arrow: the degenerate edge on a vertex phi.
ActionString single_arrow(const MonoidObject& M, Index phi)
{
    return ActionString{1, kNone, {M.space()->degen(0, 0, phi)}};
}

}  // namespace

TEST_CASE("empty strings and trivial groups collapse the constructions")
{
    auto Z2 = cyclic_group_monoid(2, 2);
    auto A = Z2.self_action();
    auto objs = sigma_objects(A, ActionString{0, 0, {}});
    CHECK(objs.keys == objs.keys0);
    CHECK(is_isomorphism(diagonal_map(objs.sigma_bar, share(diagonal(*objs.x0_sigma)), share(diagonal(*objs.x_sigma)))));

    auto T = cyclic_group_monoid(1, 2);
    auto AT = T.self_action();
    auto t = sigma_objects(AT, single_arrow(T, 0));
    CHECK(t.keys == t.keys0);
    for (std::size_t p = 0; p <= 2; ++p)
        for (std::size_t q = 0; q <= 2; ++q)
            for (Index x = 0; x < t.x0_sigma->size(p, q); ++x)
                CHECK(t.sigma_bar(p, q, x) == x);
}

TEST_CASE("Z/2 acting on itself along a nonidentity arrow")
{
    auto Z2 = cyclic_group_monoid(2, 2);
    auto A = Z2.self_action();
    auto s = single_arrow(Z2, 1);
    auto full = sigma_objects(A, s);
    CHECK(sigma_is_pullback(A, full));

    auto rows = check_row_decomposition(A, full);
    CHECK(rows.matches);
    CHECK(rows.pieces > 0);
    for (std::size_t p = 0; p < 2; ++p)
    {
        auto c0 = share(column(*full.x0_sigma, p));
        auto c1 = share(column(*full.x_sigma, p));
        CHECK(is_equivalence(1, column_map(full.sigma_bar, p, c0, c1)).verdict == Verdict::yes);
    }
    auto d0 = share(diagonal(*full.x0_sigma));
    auto d1 = share(diagonal(*full.x_sigma));
    CHECK(is_equivalence(1, diagonal_map(full.sigma_bar, d0, d1)).verdict == Verdict::yes);

    for (std::size_t k : {0u, 1u})
    {
        auto horn = sigma_objects(A, s, k);
        auto inc = horn_inclusion(horn, full);
        CHECK(inc.square_commutes);
        auto h0 = share(diagonal(*horn.x0_sigma));
        CHECK(is_equivalence(1, diagonal_map(inc.x0_sigma, h0, d0)).verdict == Verdict::yes);
        auto h1 = share(diagonal(*horn.x_sigma));
        CHECK(is_equivalence(1, diagonal_map(inc.x_sigma, h1, d1)).verdict == Verdict::yes);
    }
}

TEST_CASE("Xtilde reduces a stable check to action maps")
{
    auto Z2 = cyclic_group_monoid(2, 2);
    auto A = Z2.self_action();
    auto edge = yoneda_map(share(standard_simplex(1, 2)), Z2.space(), 1, Z2.space()->degen(0, 0, 1));
    auto rep = check_xtilde(A, edge, 1);
    CHECK(rep.square_commutes);
    CHECK(rep.rows_are_action_maps);
    CHECK(rep.source_unit.verdict == Verdict::yes);
    CHECK(rep.target_unit.verdict == Verdict::yes);
    CHECK(rep.diagonal.verdict == Verdict::yes);
    CHECK(rep.pulled_back.verdict == Verdict::yes);

    // {1, z} with z z = z: z acts by a non-injective map.
    auto idem = discrete_monoid({"1", "z"}, {0, 1, 1, 1}, 0, 2);
    auto AI = idem.self_action();
    auto zmap = yoneda_map(share(point(2)), idem.space(), 0, 1);
    auto bad = check_xtilde(AI, zmap, 1);
    CHECK(bad.square_commutes);
    CHECK(bad.rows_are_action_maps);
    CHECK(bad.source_unit.verdict == Verdict::yes);
    CHECK(bad.diagonal.verdict == Verdict::no);
    CHECK(bad.pulled_back.verdict == Verdict::no);
}
