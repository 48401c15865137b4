#include <catch_amalgamated.hpp>

#include <hfib/bisimplicial.hpp>
#include <hfib/category.hpp>
#include <hfib/equivalence.hpp>

using namespace hfib;

TEST_CASE("nerve of Z/2 has one nondegenerate simplex per level", "[category]")
{
    auto C = cyclic_group_category(2);
    auto B = nerve(C, 3);
    for (std::size_t n = 0; n <= 3; ++n)
        CHECK(nondegenerate(B, n).size() == 1);
    auto H = homology_of(B, 2);
    CHECK(H[1].str() == "Z/2");
    CHECK(H[2].str() == "0");
}

TEST_CASE("comma categories over BG", "[category]")
{
    auto G = cyclic_group_category(3);
    auto one = terminal_category();
    Functor f{&one, &G, {0}, {0}};
    f.validate();
    auto K = comma_category(f, 0);
    CHECK(K.category.object_count() == 3);
    CHECK(K.category.morphism_count() == 3);  // discrete

    auto I = ordinal_category(1);
    Functor g{&I, &G, {0, 0}, {}};
    for (Index m = 0; m < I.morphism_count(); ++m)
        g.on_morphisms.push_back(I.is_identity(m) ? 0 : 1);
    g.validate();
    auto L = comma_category(g, 0);
    CHECK(L.category.object_count() == 6);
    CHECK(L.category.morphism_count() == 9);  // 6 identities + 3 arrows
    auto H = homology_of(nerve(L.category, 3), 2);
    CHECK(H[0].str() == "Z^3");
    CHECK(H[1].str() == "0");
}

TEST_CASE("identity comma category has a terminal object", "[category]")
{
    auto P = poset_category(3, {{0, 1}, {0, 2}});
    Functor id{&P, &P, {0, 1, 2}, {}};
    for (Index m = 0; m < P.morphism_count(); ++m)
        id.on_morphisms.push_back(m);
    id.validate();
    for (Index c = 0; c < 3; ++c)
        CHECK(reduced_homology_vanishes(share(nerve(comma_category(id, c).category, 3)), 2));
}

TEST_CASE("diagonal of simplex box product is the product", "[bisimplicial]")
{
    for (std::size_t n = 0; n <= 2; ++n)
    {
        auto D = share(standard_simplex(n, 3));
        auto W = external_product(*D, *D);
        auto diag = share(diagonal(W));
        auto P = product(D, D);
        SMap iso{diag, P.object, std::vector<std::vector<Index>>(4)};
        for (std::size_t m = 0; m <= 3; ++m)
            for (Index x = 0; x < diag->size(m); ++x)
                iso.component[m].push_back(x);
        iso.validate();
        CHECK(is_isomorphism(iso));
    }
}
