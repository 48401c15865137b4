#include <catch_amalgamated.hpp>

#include <random>

#include <hfib/chains.hpp>

using namespace hfib;

namespace {

// gcd of all i x i minors, computed by cofactor expansion (small matrices only)
Integer det(const IntMatrix& A)
{
    std::size_t n = A.rows();
    if (n == 0)
        return 1;
    if (n == 1)
        return A(0, 0);
    Integer s = 0;
    for (std::size_t j = 0; j < n; ++j)
    {
        if (A(0, j) == 0)
            continue;
        IntMatrix M(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t c = 0, cc = 0; c < n; ++c)
                if (c != j)
                    M(r - 1, cc++) = A(r, c);
        Integer t = A(0, j) * det(M);
        s += (j % 2 == 0) ? t : Integer(-t);
    }
    return s;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out)
{
    if (cur.size() == k)
    {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i)
    {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<Integer> determinantal_factors(const IntMatrix& A)
{
    std::vector<Integer> out;
    Integer prev = 1;
    for (std::size_t k = 1; k <= std::min(A.rows(), A.cols()); ++k)
    {
        std::vector<std::vector<std::size_t>> rs, cs;
        std::vector<std::size_t> cur;
        subsets(A.rows(), k, 0, cur, rs);
        subsets(A.cols(), k, 0, cur, cs);
        Integer g = 0;
        for (auto& r : rs)
            for (auto& c : cs)
            {
                IntMatrix M(k, k);
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j)
                        M(i, j) = A(r[i], c[j]);
                g = gcd(g, abs(det(M)));
            }
        if (g == 0)
            break;
        out.push_back(g / prev);
        prev = g;
    }
    return out;
}

}  // namespace

TEST_CASE("smith form agrees with determinantal divisors", "[smith]")
{
    set_smith_self_check(true);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> val(-4, 4), dim(1, 4);
    for (int trial = 0; trial < 200; ++trial)
    {
        IntMatrix A(dim(rng), dim(rng));
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t j = 0; j < A.cols(); ++j)
                A(i, j) = val(rng);
        CHECK(invariant_factors(A) == determinantal_factors(A));
    }
    set_smith_self_check(false);
}

TEST_CASE("homology of spheres and horns", "[homology]")
{
    auto S2 = build_standard(StandardKind::boundary, 3, 0, 4);
    auto H = homology_of(S2, 3);
    CHECK(H[0].str() == "Z");
    CHECK(H[1].str() == "0");
    CHECK(H[2].str() == "Z");
    CHECK(H[3].str() == "0");
    auto L = build_standard(StandardKind::horn, 2, 0, 3);
    auto HL = homology_of(L, 2);
    CHECK(HL[0].str() == "Z");
    CHECK(HL[1].str() == "0");
    CHECK_THROWS_AS(homology_of(L, 3), UnreliableAtTruncation);
}

TEST_CASE("group parsing normalizes torsion", "[homology]")
{
    CHECK(parse_group("Z/2 + Z/3") == GroupShape{0, {Integer(6)}});
    CHECK(parse_group("Z^2 + Z/2").rank == 2);
    CHECK(parse_group("0") == GroupShape{});
}

TEST_CASE("induced map of identity is an isomorphism", "[homology]")
{
    auto P = share(build_standard(StandardKind::boundary, 2, 0, 3));
    auto d = HomologyData::of(*P, 2);
    auto id = identity_map(P);
    for (std::size_t k = 0; k <= 2; ++k)
        CHECK(induced_map(id, d, d, k).is_isomorphism());
}

TEST_CASE("column lattice basis spans the same lattice", "[smith]")
{
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> val(-3, 3), dim(1, 5);
    auto join = [](const IntMatrix& A, const IntMatrix& B) {
        IntMatrix J(A.rows(), A.cols() + B.cols());
        for (std::size_t i = 0; i < A.rows(); ++i)
        {
            for (std::size_t j = 0; j < A.cols(); ++j)
                J(i, j) = A(i, j);
            for (std::size_t j = 0; j < B.cols(); ++j)
                J(i, A.cols() + j) = B(i, j);
        }
        return J;
    };
    for (int trial = 0; trial < 200; ++trial)
    {
        IntMatrix A(dim(rng), dim(rng) + 3);
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t j = 0; j < A.cols(); ++j)
                A(i, j) = val(rng);
        IntMatrix B = column_lattice_basis(A);
        auto fa = determinantal_factors(A);
        CHECK(B.cols() == fa.size());
        // Equal invariants of A, B and [A | B] force L(A) = L(A) + L(B) = L(B).
        CHECK(determinantal_factors(B) == fa);
        CHECK(determinantal_factors(join(A, B)) == fa);
    }
}
