/** Category objects, actions, fibers, action maps and the acts-by checks. */
#include <catch_amalgamated.hpp>

#include "hfib/internal_category.hpp"
#include "hfib/monoid.hpp"

using namespace hfib;

namespace {

std::vector<std::string> homology_strings(const TruncatedSSet& X, std::size_t top)
{
    std::vector<std::string> out;
    for (const auto& h : homology_of(X, top))
        out.push_back(h.str());
    return out;
}

}  // namespace

TEST_CASE("classifying spaces of small category objects")
{
    auto trivial = constant_category(terminal_category(), 3);
    auto Bt = classifying_space(trivial);
    CHECK(Bt.object->face_tables() == point(3).face_tables());
    CHECK(Bt.object->degen_tables() == point(3).degen_tables());

    auto z2 = constant_category(cyclic_group_category(2), 3);
    CHECK(homology_strings(*classifying_space(z2).object, 2) == std::vector<std::string>{"Z", "Z/2", "0"});

    auto nat = naturals_monoid(4, 3);
    auto Bn = classifying_space(*nat.category());
    auto h = homology_of(*Bn.object, 1);
    CHECK(h[0].str() == "Z");
    CHECK(h[1].str() == "Z");
}

TEST_CASE("bisimplicial nerve agrees with the classical nerve and the diagonal")
{
    auto C = poset_category(3, {{0, 1}, {1, 2}});
    auto IC = constant_category(C, 3);
    auto W = nerve(IC);
    for (std::size_t p = 0; p <= 3; ++p)
    {
        auto R = column(W, p);
        CHECK(R.face_tables() == nerve(C, 3).face_tables());
    }
    CHECK(diagonal(W) == *classifying_space(IC).object);

    // Row q = 2 of the codiscrete groupoid on two objects: 2^3 composable pairs.
    auto G2 = constant_category(codiscrete_category(2), 2);
    CHECK(nerve(G2).size(0, 2) == 8);
}

TEST_CASE("action categories and fibers")
{
    for (int n : {2, 3})
    {
        auto G = cyclic_group_monoid(n, 4);
        auto AC = action_category(G.self_action());
        auto B = classifying_space(*AC.category);
        CHECK(B.object->size(0) == static_cast<std::size_t>(n));
        CHECK(reduced_homology_vanishes(B.object, 2));
    }
    auto S3 = symmetric_group_monoid(3, 3);
    CHECK(reduced_homology_vanishes(classifying_space(*action_category(S3.self_action()).category).object, 2));

    auto nat = naturals_monoid(3, 2);
    auto A = nat.self_action();
    auto F = fiber(A, 0, 0);
    CHECK(F.object()->size(0) == 4);

    auto sq = fiber_square(cyclic_group_monoid(2, 2).self_action(), 0);
    CHECK(sq.coherent);
}

TEST_CASE("action maps of the truncated natural numbers")
{
    auto nat = naturals_monoid(3, 2);
    auto A = nat.self_action();
    auto phi = action_map(A, 0, 1);
    CHECK_FALSE(phi.total);
    REQUIRE(phi.domain.object->size(0) == 3);
    for (Index k = 0; k < 3; ++k)
    {
        auto [a, m] = fiber(A, 0, 0).pullback.pairs[0][phi.domain.inclusion(0, k)];
        auto [b, image] = fiber(A, 0, 0).pullback.pairs[0][phi.map(0, k)];
        CHECK(nat.space()->name(0, image) == std::to_string(1 + std::stoi(nat.space()->name(0, m))));
        (void)a, (void)b;
    }
    auto unit = action_map(A, 0, 0);
    CHECK(unit.total);
    CHECK(is_isomorphism(unit.map));
}

TEST_CASE("acts-by checks and the vertex shortcut")
{
    LocalizationSpec spec{SpecKind::h_range, 1};
    auto nat = naturals_monoid(3, 3);
    auto A = nat.self_action();
    auto plain = acts_by_check(A, spec);
    REQUIRE(plain.verdict == Verdict::no);
    CHECK(plain.witness->level == 0);
    CHECK(plain.witness->name == "1");
    auto shortcut = acts_by_check(A, spec, {true, {}});
    CHECK(shortcut.verdict == Verdict::no);
    CHECK(shortcut.witness->name == "1");

    for (auto M : {cyclic_group_monoid(3, 3), symmetric_group_monoid(3, 3)})
    {
        auto GA = M.self_action();
        CHECK(acts_by_check(GA, spec).verdict == Verdict::yes);
        CHECK(acts_by_check(GA, spec, {true, {}}).verdict == Verdict::yes);
    }

    CHECK(acts_by_check(A, LocalizationSpec{SpecKind::h_range, 3}).verdict == Verdict::incomplete_at_truncation);
}

TEST_CASE("stable equivalence certificates")
{
    LocalizationSpec spec{SpecKind::h_range, 1};
    auto nat = naturals_monoid(3, 3);
    auto A = nat.self_action();
    auto empty = stable_equiv_check(A, spec, {});
    CHECK(empty.verdict == Verdict::yes);
    CHECK(empty.vacuous);

    // Delta[1] hitting the (degenerate) edge on 1.
    auto d1 = share(standard_simplex(1, 3));
    Index edge = nat.space()->degen(0, 0, 1);
    auto r = stable_equiv_check(A, spec, {yoneda_map(d1, nat.space(), 1, edge)});
    REQUIRE(r.verdict == Verdict::no);
    CHECK(*r.failing_test == 0);
    auto plain = acts_by_check(A, spec);
    CHECK(r.detail.failing_degree == plain.witness->result.failing_degree);

    // All vertices reproduce the acts-by verdict.
    std::vector<SMap> verts;
    auto d0 = share(point(3));
    for (Index v = 0; v < nat.space()->size(0); ++v)
        verts.push_back(yoneda_map(d0, nat.space(), 0, v));
    auto all = stable_equiv_check(A, spec, verts);
    CHECK(all.verdict == Verdict::no);
    CHECK(*all.failing_test == 1);
}

TEST_CASE("monoid validation")
{
    // 0 is the unit; a*a = b, a*b = a, b*a = b, b*b = a is not associative.
    std::vector<Index> bad{0, 1, 2, 1, 2, 1, 2, 2, 1};
    try
    {
        discrete_monoid({"e", "a", "b"}, bad, 0, 1);
        FAIL("accepted a non-associative table");
    }
    catch (const CorruptInput& err)
    {
        CHECK(std::string(err.what()).find("not associative") != std::string::npos);
        CHECK(std::string(err.what()).find("(") != std::string::npos);
    }
    CHECK(pi0_monoid(cyclic_group_monoid(3, 1)).is_group());
    CHECK_FALSE(pi0_monoid(naturals_monoid(3, 1)).is_group());
}

TEST_CASE("block sum monoid and its Pontryagin ring")
{
    auto M = block_sum_monoid(3, 3);
    auto R = pontryagin_ring(M, 2);
    REQUIRE(R.pi.size() == 4);
    std::vector<std::string> h1;
    for (std::size_t c = 0; c < 4; ++c)
        h1.push_back(R.homology[c].groups[1].str());
    CHECK(h1 == std::vector<std::string>{"0", "0", "Z/2", "Z/2"});
    auto axioms = check_ring_axioms(R);
    CHECK(axioms.ok);
    CHECK(axioms.checked > 0);
    auto central = check_centrality(R);
    CHECK(central.ok);
}
