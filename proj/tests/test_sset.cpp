#include <catch_amalgamated.hpp>

#include <hfib/sset.hpp>
#include <hfib/sset_io.hpp>

using namespace hfib;

TEST_CASE("standard simplex counts", "[sset]")
{
    auto D2 = standard_simplex(2, 3);
    // monotone maps [n] -> [2] number C(n+3, 2)
    CHECK(D2.size(0) == 3);
    CHECK(D2.size(1) == 6);
    CHECK(D2.size(2) == 10);
    CHECK(nondegenerate(D2, 2).size() == 1);
    CHECK(nondegenerate(D2, 3).empty());
}

TEST_CASE("round trip through json", "[sset]")
{
    auto X = build_standard(StandardKind::horn, 2, 1, 3);
    auto text = serialize(X);
    CHECK(parse_sset(text) == X);
    CHECK(serialize(parse_sset(text)) == text);
}

TEST_CASE("ez decomposition reconstructs simplex", "[sset]")
{
    auto X = standard_simplex(2, 4);
    for (std::size_t n = 0; n <= 4; ++n)
        for (Index x = 0; x < X.size(n); ++x)
        {
            auto e = ez_decompose(X, n, x);
            CHECK(apply_degeneracies(X, e.base_level, e.base, e.word) == x);
            CHECK(!is_degenerate(X, e.base_level, e.base));
        }
}
