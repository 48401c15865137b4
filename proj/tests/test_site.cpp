#include <catch_amalgamated.hpp>

#include <hfib/site.hpp>

using namespace hfib;

namespace {

// U -> X poset; restriction along u: P(X) -> P(U)
SPresheaf sierpinski_presheaf(const FiniteSite& s, std::vector<std::string> at_u, std::vector<std::string> at_x,
                              std::vector<Index> restrict_u)
{
    const auto& C = s.category;
    std::vector<std::vector<Index>> r(C.morphism_count());
    for (Index f = 0; f < C.morphism_count(); ++f)
    {
        if (C.is_identity(f))
        {
            std::size_t n = C.source(f) == 0 ? at_u.size() : at_x.size();
            for (Index i = 0; i < n; ++i)
                r[f].push_back(i);
        }
        else
            r[f] = restrict_u;
    }
    return set_presheaf(s, {at_u, at_x}, r);
}

}  // namespace

TEST_CASE("site axioms", "[site]")
{
    CHECK(validate_site(sierpinski_site(true)).valid);
    CHECK(validate_site(sierpinski_site(false)).valid);
    CHECK(validate_site(trivial_site(cyclic_group_category(2))).valid);
    auto broken = sierpinski_site(true);
    broken.covers[1] = {{broken.category.find_morphism("U<X")}};
    auto r = validate_site(broken);
    REQUIRE_FALSE(r.valid);
    CHECK(r.failures.front().axiom == "maximal");
}

TEST_CASE("sheafification on the Sierpinski site", "[site]")
{
    auto s = sierpinski_site(true);
    // P(X) has 3 elements, P(U) has 2, restriction 0,1,1: not a sheaf.
    auto P = sierpinski_presheaf(s, {"a", "b"}, {"x", "y", "z"}, {0, 1, 1});
    CHECK_FALSE(check_sheaf_condition(P).sheaf);
    auto S = sheafify_set(P);
    CHECK(check_sheaf_condition(S.sheaf).sheaf);
    CHECK_FALSE(unit_bijective(S));
    CHECK(S.sheaf.value[1]->size(0) == 2);  // forced to P(U)
    auto SS = sheafify_set(S.sheaf);
    CHECK(unit_bijective(SS));

    auto Q = sierpinski_presheaf(s, {"a", "b"}, {"x", "y"}, {1, 0});
    CHECK(check_sheaf_condition(Q).sheaf);
    CHECK(unit_bijective(sheafify_set(Q)));
}

TEST_CASE("stalk at U of a constant presheaf", "[site]")
{
    auto s = sierpinski_site(true);
    auto K = share(build_standard(StandardKind::boundary, 2, {}, 2));
    auto P = constant_presheaf(s, K);
    auto st = stalk(P, point_at(s.category, 0));
    CHECK(st.object->face_tables() == K->face_tables());
    CHECK(st.object->degen_tables() == K->degen_tables());
}
