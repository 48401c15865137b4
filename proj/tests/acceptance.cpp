/**
 * Acceptance run: one PASS/FAIL line per criterion 1-12. Oracles here are
 * written independently of the library code they judge (determinantal
 * divisors, brute-force inverses, union-find component counts, shift
 * colimits, hand-computed stalks). Exit status is the number of failures.
 */
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hfib/bisimplicial.hpp"
#include "hfib/cli.hpp"
#include "hfib/group_completion.hpp"
#include "hfib/harness.hpp"
#include "hfib/parallel.hpp"
#include "hfib/site.hpp"

using namespace hfib;

namespace {

// Pinned limits. Homology comparisons are exact; these are the only tolerances.
constexpr double kC1Seconds = 1.0;
constexpr double kC2Seconds = 30.0;
constexpr double kC3Seconds = 120.0;
constexpr double kC5SecondsPerCase = 60.0;
constexpr double kC9Seconds = 300.0;
constexpr int kC2Complexes = 200;
constexpr std::size_t kC2MaxGenerators = 6;
constexpr std::size_t kC4MinFixtures = 50;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fixture(const std::string& name) { return std::string(HFIB_FIXTURES) + "/" + name; }

struct Outcome_
{
    bool pass = true;
    std::ostringstream note;
    void require(bool ok, const std::string& what)
    {
        if (!ok && pass)
            note << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

int failures = 0;

void report(int id, const std::string& title, Outcome_& o, double secs)
{
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << "  " << title << "  [" << o.note.str() << std::fixed
              << std::setprecision(2) << secs << " s]\n";
    std::cout.flush();
    if (!o.pass)
        ++failures;
}

// ---------------------------------------------------------------------------
// 1. diagonal of a box product of simplices
// ---------------------------------------------------------------------------

void criterion1()
{
    auto t0 = Clock::now();
    Outcome_ o;
    const std::size_t N = 3;
    for (std::size_t n = 0; n <= 3; ++n)
    {
        auto D = share(standard_simplex(n, N));
        auto diag = share(diagonal(external_product(*D, *D)));
        auto P = product(D, D);
        // Oracle: an m-simplex of the product is a pair of monotone maps [m] -> [n]; count them.
        for (std::size_t m = 0; m <= N; ++m)
        {
            std::size_t monos = monotone_maps(static_cast<int>(m), static_cast<int>(n)).size();
            o.require(diag->size(m) == monos * monos, "diagonal size at n=" + std::to_string(n));
        }
        // The bisimplex (a, b) on the diagonal goes to the pair (a, b); check it is a simplicial bijection.
        SMap iso{diag, P.object, std::vector<std::vector<Index>>(N + 1)};
        for (std::size_t m = 0; m <= N; ++m)
            for (Index x = 0; x < diag->size(m); ++x)
                iso.component[m].push_back(x);
        bool valid = true;
        try
        {
            iso.validate();
        }
        catch (const std::exception&)
        {
            valid = false;
        }
        o.require(valid && is_isomorphism(iso), "isomorphism at n=" + std::to_string(n));
    }
    double s = seconds_since(t0);
    o.require(s < kC1Seconds, "runtime");
    o.note << "n <= 3; ";
    report(1, "diagonal of Delta[n] box Delta[n] is Delta[n] x Delta[n]", o, s);
}

// ---------------------------------------------------------------------------
// 2. homology engine vs determinantal divisors
// ---------------------------------------------------------------------------

Integer det(const IntMatrix& A)
{
    const std::size_t n = A.rows();
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

void choose(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
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
        choose(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

/// Invariant factors d_k = D_k / D_{k-1} from gcds of k x k minors.
std::vector<Integer> determinantal_factors(const IntMatrix& A)
{
    std::vector<Integer> out;
    Integer prev = 1;
    for (std::size_t k = 1; k <= std::min(A.rows(), A.cols()); ++k)
    {
        std::vector<std::vector<std::size_t>> rs, cs;
        std::vector<std::size_t> cur;
        choose(A.rows(), k, 0, cur, rs);
        choose(A.cols(), k, 0, cur, cs);
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

/// A random unimodular n x n matrix and its inverse, as products of elementary operations.
std::pair<IntMatrix, IntMatrix> random_unimodular(std::size_t n, std::mt19937& rng)
{
    IntMatrix U(n, n), V(n, n);
    for (std::size_t i = 0; i < n; ++i)
        U(i, i) = V(i, i) = 1;
    std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1), c(-2, 2);
    for (int step = 0; step < 3 * static_cast<int>(n); ++step)
    {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j)
            continue;
        int a = c(rng);
        // U <- U E, E = I + a e_ij ; V <- E^-1 V
        for (std::size_t r = 0; r < n; ++r)
            U(r, j) += a * U(r, i);
        for (std::size_t col = 0; col < n; ++col)
            V(i, col) -= a * V(j, col);
    }
    return {U, V};
}

void criterion2()
{
    auto t0 = Clock::now();
    Outcome_ o;
    std::mt19937 rng(20261015);
    std::uniform_int_distribution<int> size(1, static_cast<int>(kC2MaxGenerators)), val(-3, 3);
    int agree = 0;
    for (int trial = 0; trial < kC2Complexes; ++trial)
    {
        // Degrees 0..3; each d_k d_{k+1} = 0 by construction: im d_{k+1} lies in the first a_k
        // coordinates of a random basis of C_k, which d_k kills.
        std::vector<std::size_t> n(4);
        for (auto& x : n)
            x = size(rng);
        ChainComplex C;
        C.top_degree = 3;
        C.boundary.resize(4);
        C.boundary[0] = IntMatrix(0, n[0]);
        std::vector<std::size_t> split(4);
        std::vector<std::pair<IntMatrix, IntMatrix>> basis(4);
        for (std::size_t k = 0; k < 4; ++k)
        {
            split[k] = std::uniform_int_distribution<std::size_t>(0, n[k])(rng);
            basis[k] = random_unimodular(n[k], rng);
        }
        for (std::size_t k = 1; k < 4; ++k)
        {
            // d_k: C_k -> C_{k-1}. Kills the first split[k] basis vectors of C_k, lands in the first
            // split[k-1] basis vectors of C_{k-1}.
            IntMatrix core(n[k - 1], n[k]);
            for (std::size_t i = 0; i < split[k - 1]; ++i)
                for (std::size_t j = split[k]; j < n[k]; ++j)
                    core(i, j) = val(rng);
            C.boundary[k] = basis[k - 1].first * core * basis[k].second;
        }
        C.basis.resize(4);
        bool dd = true;
        try
        {
            C.check_dd();
        }
        catch (const CorruptInput&)
        {
            dd = false;
        }
        o.require(dd, "generator produced d^2 != 0");
        for (std::size_t k = 0; k <= 2; ++k)
        {
            auto H = homology(C, k);
            auto fk = k == 0 ? std::vector<Integer>{} : determinantal_factors(C.boundary[k]);
            auto fk1 = determinantal_factors(C.boundary[k + 1]);
            std::size_t rank = n[k] - fk.size() - fk1.size();
            std::vector<Integer> torsion;
            for (const auto& t : fk1)
                if (t > 1)
                    torsion.push_back(t);
            bool ok = H.rank == rank && H.torsion == torsion;
            o.require(ok, "complex " + std::to_string(trial) + " degree " + std::to_string(k));
            agree += ok;
        }
    }
    double s = seconds_since(t0);
    o.require(s < kC2Seconds, "runtime");
    o.note << kC2Complexes << " complexes, " << agree << " degree checks agree; ";
    report(2, "Smith normal form homology vs determinantal divisors", o, s);
}

// ---------------------------------------------------------------------------
// 3. Kan iff groupoid
// ---------------------------------------------------------------------------

bool brute_force_groupoid(const FiniteCategory& C)
{
    for (Index f = 0; f < C.morphism_count(); ++f)
    {
        bool inv = false;
        for (Index g = 0; g < C.morphism_count() && !inv; ++g)
            inv = C.source(g) == C.target(f) && C.target(g) == C.source(f) &&
                  C.then(f, g) == C.identity(C.source(f)) && C.then(g, f) == C.identity(C.target(f));
        if (!inv)
            return false;
    }
    return true;
}

std::vector<std::pair<std::string, FiniteCategory>> small_categories()
{
    std::vector<std::pair<std::string, FiniteCategory>> out;
    // Posets on up to 3 labeled objects (every relation set, deduplicated by morphism sets).
    std::set<std::vector<std::pair<Index, Index>>> seen;
    for (std::size_t n = 1; n <= 3; ++n)
    {
        std::vector<std::pair<Index, Index>> pairs;
        for (Index a = 0; a < n; ++a)
            for (Index b = 0; b < n; ++b)
                if (a != b)
                    pairs.emplace_back(a, b);
        for (std::size_t mask = 0; mask < (std::size_t{1} << pairs.size()); ++mask)
        {
            std::vector<std::pair<Index, Index>> rel;
            for (std::size_t i = 0; i < pairs.size(); ++i)
                if (mask >> i & 1)
                    rel.push_back(pairs[i]);
            try
            {
                auto P = poset_category(n, rel);
                std::vector<std::pair<Index, Index>> key;
                for (const auto& m : P.morphisms())
                    key.emplace_back(m.source, m.target + 10 * n);
                if (seen.insert(key).second)
                    out.emplace_back("poset" + std::to_string(n) + "#" + std::to_string(mask), P);
            }
            catch (const InvalidArgument&)
            {
            }
        }
    }
    // One-object categories: every unital associative table on up to 3 elements.
    for (std::size_t n = 1; n <= 3; ++n)
    {
        std::vector<std::string> names{"e", "a", "b"};
        names.resize(n);
        std::size_t free = (n - 1) * (n - 1);
        std::size_t total = 1;
        for (std::size_t i = 0; i < free; ++i)
            total *= n;
        for (std::size_t code = 0; code < total; ++code)
        {
            std::vector<Index> mult(n * n);
            for (Index a = 0; a < n; ++a)
                mult[a] = a, mult[a * n] = a;
            std::size_t c = code;
            for (Index a = 1; a < n; ++a)
                for (Index b = 1; b < n; ++b)
                    mult[a * n + b] = static_cast<Index>(c % n), c /= n;
            bool assoc = true;
            for (Index a = 0; a < n && assoc; ++a)
                for (Index b = 0; b < n && assoc; ++b)
                    for (Index d = 0; d < n && assoc; ++d)
                        assoc = mult[mult[a * n + b] * n + d] == mult[a * n + mult[b * n + d]];
            if (assoc)
                out.emplace_back("monoid" + std::to_string(n) + "#" + std::to_string(code), monoid_category(names, mult));
        }
    }
    for (std::size_t k = 4; k <= 8; ++k)
        out.emplace_back("Z/" + std::to_string(k), cyclic_group_category(k));
    out.emplace_back("S3", symmetric_group_category(3));
    auto pt = terminal_category();
    auto Z2 = cyclic_group_category(2);
    auto Z3 = cyclic_group_category(3);
    auto K2 = codiscrete_category(2);
    auto I = ordinal_category(1);
    out.emplace_back("K2", K2);
    out.emplace_back("K2+pt", disjoint_union(K2, pt));
    out.emplace_back("Z2+pt", disjoint_union(Z2, pt));
    out.emplace_back("Z2+Z2", disjoint_union(Z2, Z2));
    out.emplace_back("Z3+pt", disjoint_union(Z3, pt));
    out.emplace_back("K2+Z2", disjoint_union(K2, Z2));
    out.emplace_back("Z2+Z2+pt", disjoint_union(disjoint_union(Z2, Z2), pt));
    out.emplace_back("Z2xZ2", product_category(Z2, Z2));
    out.emplace_back("K2xZ2", product_category(K2, Z2));
    out.emplace_back("[1]xZ2", product_category(I, Z2));
    out.emplace_back("[1]+Z2", disjoint_union(I, Z2));
    out.emplace_back("[1]+Z3", disjoint_union(I, Z3));
    out.emplace_back("K2+[0]x[1]", disjoint_union(pt, I));
    return out;
}

void criterion3()
{
    auto t0 = Clock::now();
    Outcome_ o;
    std::size_t groupoids = 0, others = 0, replayed = 0, considered = 0;
    for (const auto& [name, C] : small_categories())
    {
        if (C.object_count() > 3 || C.morphism_count() > 8)
            continue;
        ++considered;
        auto X = share(nerve(C, 4));
        auto f = map_to_point(X, share(point(4)));
        auto v = check_fibration(f, FibrationKind::kan, 3);
        bool groupoid = brute_force_groupoid(C);
        (groupoid ? groupoids : others) += 1;
        o.require((v.result == Verdict::yes) == groupoid, name);
        if (v.result == Verdict::no)
        {
            bool ok = v.witness && replay(f, *v.witness);
            replayed += ok;
            o.require(ok, "witness replay for " + name);
        }
    }
    double s = seconds_since(t0);
    o.require(s < kC3Seconds, "runtime");
    o.note << considered << " categories (" << groupoids << " groupoids), " << replayed << " witnesses replayed; ";
    report(3, "nerve is Kan through n_max = 3 iff the category is a groupoid", o, s);
}

// ---------------------------------------------------------------------------
// 4. diagonal of a rowwise equivalence
// ---------------------------------------------------------------------------

/// Map between simplices-as-vertex-strings, relabeling vertex i to v[i].
SMap relabel(const SSetPtr& X, const SSetPtr& Y, const std::vector<int>& v)
{
    SMap f{X, Y, std::vector<std::vector<Index>>(X->trunc() + 1)};
    for (std::size_t n = 0; n <= X->trunc(); ++n)
    {
        std::map<std::string, Index> where;
        for (Index y = 0; y < Y->size(n); ++y)
            where[Y->name(n, y)] = y;
        for (Index x = 0; x < X->size(n); ++x)
        {
            std::string t;
            for (char ch : X->name(n, x))
                t += std::to_string(v[ch - '0']);
            f.component[n].push_back(where.at(t));
        }
    }
    f.validate();
    return f;
}

void criterion4()
{
    auto t0 = Clock::now();
    Outcome_ o;
    const std::size_t N = 4, range = 2;
    auto pt = share(point(N));
    auto d1 = share(standard_simplex(1, N));
    auto d2 = share(standard_simplex(2, N));
    auto bd = share(build_standard(StandardKind::boundary, 2, {}, N));
    std::vector<std::pair<std::string, SMap>> equivalences{
        {"D1->pt", relabel(d1, pt, {0, 0})},
        {"D2->pt", relabel(d2, pt, {0, 0, 0})},
        {"pt->D1", relabel(pt, d1, {1})},
        {"pt->D2", relabel(pt, d2, {2})},
        {"d0:D1->D2", relabel(d1, d2, {1, 2})},
        {"d2:D1->D2", relabel(d1, d2, {0, 1})},
        {"s0:D2->D1", relabel(d2, d1, {0, 0, 1})},
        {"d1:D1->D2", relabel(d1, d2, {0, 2})},
        {"id:S1", identity_map(bd)},
        {"const:D1", relabel(d1, d1, {0, 0})},
    };
    for (std::size_t k = 0; k <= 2; ++k)
    {
        auto h = share(build_standard(StandardKind::horn, 2, k, N));
        equivalences.push_back({"horn" + std::to_string(k) + "->D2", relabel(h, d2, {0, 1, 2})});
    }
    // Oracle for the inputs: each factor map is an equivalence by contractibility or bijectivity,
    // which the Kunneth formula carries to products; we check the factors with the engine too.
    for (const auto& [name, f] : equivalences)
        o.require(is_equivalence(range, f).verdict == Verdict::yes, "factor " + name);
    // A box product is rowwise an equivalence when one factor is a levelwise bijection, so pair
    // every equivalence with identities on assorted spaces, in both orders.
    std::vector<std::pair<std::string, SMap>> identities;
    identities.push_back({"pt", identity_map(pt)});
    identities.push_back({"D1", identity_map(d1)});
    identities.push_back({"S1", identity_map(bd)});
    identities.push_back({"2pts", identity_map(share(discrete({"a", "b"}, N)))});
    identities.push_back({"horn1", identity_map(share(build_standard(StandardKind::horn, 2, 1, N)))});
    std::vector<std::tuple<std::string, const SMap*, const SMap*>> pairs;
    for (const auto& [fname, f] : equivalences)
        for (const auto& [yname, y] : identities)
        {
            pairs.emplace_back(fname + " box " + yname, &f, &y);
            pairs.emplace_back(yname + " box " + fname, &y, &f);
        }
    std::size_t fixtures = 0, violations = 0;
    for (const auto& [name, fp, gp] : pairs)
    {
        const SMap& f = *fp;
        const SMap& g = *gp;
        auto src = share(external_product(*f.source, *g.source));
        auto tgt = share(external_product(*f.target, *g.target));
        auto F = external_product_map(f, g, src, tgt);
        bool rowwise = true;
        for (std::size_t q = 0; q <= N && rowwise; ++q)
        {
            auto rs = share(row(*src, q)), rt = share(row(*tgt, q));
            rowwise = is_equivalence(range, row_map(F, q, rs, rt)).verdict == Verdict::yes;
        }
        if (!rowwise)
            continue;
        ++fixtures;
        auto ds = share(diagonal(*src)), dt = share(diagonal(*tgt));
        if (is_equivalence(range, diagonal_map(F, ds, dt)).verdict != Verdict::yes)
        {
            ++violations;
            o.require(false, name);
        }
    }
    o.require(fixtures >= kC4MinFixtures, "only " + std::to_string(fixtures) + " rowwise-equivalence fixtures");
    double s = seconds_since(t0);
    o.note << fixtures << " fixtures, " << violations << " violations, range 2, trunc 4; ";
    report(4, "rowwise equivalences give diagonal equivalences", o, s);
}

// ---------------------------------------------------------------------------
// 5. Theorem B against the groupoid covering oracle
// ---------------------------------------------------------------------------

/// Components of the covering: pairs (d, g) glued along (d, g) ~ (d', g f(a)) for a: d -> d'.
std::size_t cover_components(const Functor& f)
{
    const FiniteCategory& D = *f.source;
    const FiniteCategory& G = *f.target;
    const std::size_t n = G.morphism_count();
    std::vector<std::size_t> parent(D.object_count() * n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
        return parent[v] == v ? v : parent[v] = root(parent[v]);
    };
    for (Index a = 0; a < D.morphism_count(); ++a)
        for (Index g = 0; g < n; ++g)
        {
            std::size_t u = root(D.source(a) * n + g), v = root(D.target(a) * n + G.then(g, f.on_morphisms[a]));
            parent[u] = v;
        }
    std::set<std::size_t> roots;
    for (std::size_t v = 0; v < parent.size(); ++v)
        roots.insert(root(v));
    return roots.size();
}

void criterion5()
{
    auto t0 = Clock::now();
    Outcome_ o;
    std::vector<std::pair<std::string, FiniteCategory>> groups{
        {"Z/2", cyclic_group_category(2)}, {"Z/3", cyclic_group_category(3)}, {"S3", symmetric_group_category(3)}};
    std::vector<std::pair<std::string, FiniteCategory>> posets{
        {"pt", poset_category(1, {})},
        {"2pts", poset_category(2, {})},
        {"[1]", poset_category(2, {{0, 1}})},
        {"3pts", poset_category(3, {})},
        {"[2]", poset_category(3, {{0, 1}, {1, 2}})},
        {"V", poset_category(3, {{0, 1}, {0, 2}})},
        {"Lambda", poset_category(3, {{1, 0}, {2, 0}})},
        {"[1]+pt", poset_category(3, {{0, 1}})},
    };
    std::size_t cases = 0, discrepancies = 0;
    double slowest = 0;
    for (const auto& [gname, G] : groups)
        for (const auto& [dname, D] : posets)
        {
            std::vector<Index> nonid;
            for (Index a = 0; a < D.morphism_count(); ++a)
                if (!D.is_identity(a))
                    nonid.push_back(a);
            std::size_t total = 1;
            for (std::size_t i = 0; i < nonid.size(); ++i)
                total *= G.morphism_count();
            for (std::size_t code = 0; code < total; ++code)
            {
                Functor f{&D, &G, std::vector<Index>(D.object_count(), 0), std::vector<Index>(D.morphism_count())};
                for (Index c = 0; c < D.object_count(); ++c)
                    f.on_morphisms[D.identity(c)] = G.identity(0);
                std::size_t c = code;
                for (Index a : nonid)
                    f.on_morphisms[a] = static_cast<Index>(c % G.morphism_count()), c /= G.morphism_count();
                try
                {
                    f.validate();
                }
                catch (const CorruptInput&)
                {
                    continue;
                }
                ++cases;
                auto tc = Clock::now();
                auto r = theorem_b_verify(f, 0, 4, {SpecKind::h_range, 2}, {OracleKind::groupoid_cover, {}});
                slowest = std::max(slowest, seconds_since(tc));
                bool ok = r.outcome == Outcome::confirmed && r.comparison.size() == 3;
                for (const auto& cmp : r.comparison)
                    ok = ok && cmp.isomorphic;
                ok = ok && !r.fiber_homology.empty() &&
                     parse_group(r.fiber_homology[0]).rank == cover_components(f);
                if (!ok)
                {
                    ++discrepancies;
                    o.require(false, gname + " over " + dname + " #" + std::to_string(code) + ": " + r.detail);
                }
            }
        }
    o.require(slowest < kC5SecondsPerCase, "slowest case");
    double s = seconds_since(t0);
    o.note << cases << " functors, " << discrepancies << " discrepancies, slowest " << std::setprecision(2)
           << slowest << " s; ";
    report(5, "B(f/c) vs groupoid cover, H_0..H_2 at trunc 4", o, s);
}

// ---------------------------------------------------------------------------
// 6. N acting on itself
// ---------------------------------------------------------------------------

void criterion6()
{
    auto t0 = Clock::now();
    Outcome_ o;
    auto r = run_command("verify theorem-b", parse_input(fixture("naturals_self_action.json")));
    o.require(r.exit == 2, "exit code " + std::to_string(r.exit));
    o.require(r.report["result"]["outcome"] == "hypotheses-not-met", "outcome");
    o.require(r.report["result"]["hypotheses"]["acts_by_witness"] == "1", "witness");
    auto direct = theorem_b_verify(naturals_monoid(3, 3).self_action(), 0, {SpecKind::h_range, 1},
                                   {OracleKind::fibration_pullback, {}});
    o.require(direct.outcome == Outcome::hypotheses_not_met && direct.acts_by_witness == std::string("1"),
              "library verdict");
    o.note << "witness phi = 1, exit 2; ";
    report(6, "N self-action is hypotheses-not-met, never refuted", o, seconds_since(t0));
}

// ---------------------------------------------------------------------------
// 7. grouplike route
// ---------------------------------------------------------------------------

void criterion7()
{
    auto t0 = Clock::now();
    Outcome_ o;
    for (auto M : {cyclic_group_monoid(2, 4), cyclic_group_monoid(3, 4), symmetric_group_monoid(3, 4)})
    {
        auto A = M.self_action();
        auto cat = action_category(A);
        auto B = classifying_space(*cat.category).object;
        o.require(reduced_homology_vanishes(B, 2), M.name() + " B(M_M) not acyclic");
        // Oracle: the translation category of a group has exactly one arrow between any two objects.
        std::size_t k = M.space()->size(0);
        o.require(cat.category->mor()->size(0) == k * k, M.name() + " arrow count");
        o.require(acts_by_check(A, {SpecKind::h_range, 2}).verdict == Verdict::yes, M.name() + " acts-by");
    }
    o.note << "Z/2, Z/3, S3 at trunc 4; ";
    report(7, "groups: B(M_M) acyclic through degree 2 and acts-by passes", o, seconds_since(t0));
}

// ---------------------------------------------------------------------------
// 8. group completion of N
// ---------------------------------------------------------------------------

void criterion8()
{
    auto t0 = Clock::now();
    Outcome_ o;
    const int K = 6;
    auto M = naturals_monoid(K, 3);
    auto L = localized_homology(M, 1, std::vector<Index>{1}, K);
    // Shift-colimit oracle: colim(Z[N] -t-> Z[N] -t-> ...) = Z[t, 1/t]. After K stages of +1 the
    // window sees grades g = 0..K; label g - K is stable iff g - 1 was present, i.e. g = 1..K.
    std::set<std::string> expected;
    for (int g = 1; g <= K; ++g)
        expected.insert(std::to_string(g - K));
    std::set<std::string> stable0;
    for (const auto* e : L.stable_in(0))
    {
        stable0.insert(e->label);
        o.require(e->group == "Z", "H_0 at " + e->label);
        o.require(e->telescope_agrees, "telescope agreement at " + e->label);
    }
    o.require(stable0 == expected, "stable H_0 labels");
    for (const auto* e : L.stable_in(1))
        o.require(e->group == "0" && e->telescope_agrees, "H_1 at " + e->label);
    auto r = group_completion_verify(M, {SpecKind::h_range, 1}, std::nullopt, {std::vector<Index>{1}, K});
    o.require(r.outcome == Outcome::confirmed, "group completion outcome " + to_string(r.outcome));
    o.note << "rank of localized H_0 over the window = " << stable0.size() << "; ";
    report(8, "N: localized H_0 is Z[Z] on the stabilized window", o, seconds_since(t0));
}

// ---------------------------------------------------------------------------
// 9. block sum of symmetric groups
// ---------------------------------------------------------------------------

void criterion9()
{
    auto t0 = Clock::now();
    Outcome_ o;
    auto M = block_sum_monoid(3, 3);
    // Known answer: H_1(S_n) = Z/2 for n >= 2 (sign homomorphism), so the stable H_1 is Z/2.
    KnownAnswer table{"H_1(S_infinity) = Z/2", {{"0", 1, "Z/2"}}};
    auto r = group_completion_verify(M, {SpecKind::h_range, 1}, table, {M.sections(), 3});
    o.require(r.outcome == Outcome::confirmed, "outcome " + to_string(r.outcome) + ": " + r.detail);
    bool found = false;
    if (r.localized)
        for (const auto& e : r.localized->entries)
            if (e.label == "0" && e.degree == 1)
                found = e.stabilized && e.group == "Z/2";
    o.require(found, "label 0 H_1 stabilized to Z/2");
    double s = seconds_since(t0);
    o.require(s < kC9Seconds, "runtime");
    o.note << "3 stages, trunc 3; ";
    report(9, "block sum of BS_n: localized H_1 stabilizes to Z/2", o, s);
}

// ---------------------------------------------------------------------------
// 10. Puppe
// ---------------------------------------------------------------------------

void criterion10()
{
    auto t0 = Clock::now();
    Outcome_ o;
    auto good = run_command("verify puppe", parse_input(fixture("puppe_double_cover.json")));
    o.require(good.exit == 0, "double cover exit " + std::to_string(good.exit));
    // Oracle: the fiber over the base point of a double cover is two points.
    o.require(good.report["result"]["fiber_homology"][0] == "Z^2", "fiber H_0");
    auto bad = run_command("verify puppe", parse_input(fixture("puppe_broken.json")));
    o.require(bad.exit == 2, "broken exit " + std::to_string(bad.exit));
    o.require(bad.report["result"]["failing_square"] == "0<1", "failing square");
    o.note << "failing square 0<1; ";
    report(10, "Puppe: double cover confirms, broken variant names its square", o, seconds_since(t0));
}

// ---------------------------------------------------------------------------
// 11. sites
// ---------------------------------------------------------------------------

void criterion11()
{
    auto t0 = Clock::now();
    Outcome_ o;
    auto sierp = sierpinski_site(true);
    auto coarse = sierpinski_site(false);
    o.require(validate_site(sierp).valid, "Sierpinski topology");
    o.require(validate_site(coarse).valid, "trivial Sierpinski topology");
    o.require(!validate_site(*parse_input(fixture("bad_site.json")).site).valid, "missing maximal sieve");

    // Every presheaf of sets with |F(U)|, |F(X)| <= 2. Oracle: with U covering X, F is a sheaf
    // iff the restriction F(X) -> F(U) is bijective; under the trivial topology every F is one.
    std::size_t presheaves = 0;
    for (std::size_t u = 0; u <= 2; ++u)
        for (std::size_t x = 0; x <= 2; ++x)
        {
            std::size_t maps = 1;
            for (std::size_t i = 0; i < x; ++i)
                maps *= u;
            for (std::size_t code = 0; code < maps; ++code)
            {
                std::vector<Index> r(x);
                std::size_t c = code;
                for (auto& v : r)
                    v = static_cast<Index>(c % u), c /= u;
                std::vector<std::string> su, sx;
                for (std::size_t i = 0; i < u; ++i)
                    su.push_back("u" + std::to_string(i));
                for (std::size_t i = 0; i < x; ++i)
                    sx.push_back("x" + std::to_string(i));
                bool bijective = u == x && std::set<Index>(r.begin(), r.end()).size() == x;
                for (const FiniteSite* site : {&sierp, &coarse})
                {
                    const FiniteCategory& C = site->category;
                    std::vector<std::vector<Index>> restrict(C.morphism_count());
                    restrict[C.identity(0)] = std::vector<Index>(u);
                    std::iota(restrict[C.identity(0)].begin(), restrict[C.identity(0)].end(), 0);
                    restrict[C.identity(1)] = std::vector<Index>(x);
                    std::iota(restrict[C.identity(1)].begin(), restrict[C.identity(1)].end(), 0);
                    restrict[C.find_morphism("U<X")] = r;
                    auto P = set_presheaf(*site, {su, sx}, restrict);
                    bool sheaf = site == &sierp ? bijective : true;
                    ++presheaves;
                    o.require(check_sheaf_condition(P).sheaf == sheaf, "sheaf condition");
                    auto S = sheafify(P);
                    o.require(check_sheaf_condition(S.sheaf).sheaf, "result is a sheaf");
                    o.require(unit_bijective(S) == sheaf, "unit bijective exactly on sheaves");
                    o.require(unit_bijective(sheafify(S.sheaf)), "idempotent");
                }
            }
        }

    // Five stalkwise verdicts, computed by hand.
    auto doc = parse_input(fixture("sierpinski_presheaves.json"));
    const auto& i = doc.maps.at(0).map;
    const auto& pU = doc.points.at(0);
    const auto& pX = doc.points.at(1);
    o.require(is_local_equivalence(i, {pU}, 0).verdict == Verdict::yes, "F -> G at U: both are {u1, u2}");
    o.require(is_local_equivalence(i, {pX}, 0).verdict == Verdict::no, "F -> G at X: one point vs two");
    const SPresheaf& G = *doc.presheaves.at(1).presheaf;
    PresheafMap idG{&G, &G, {identity_map(G.value[0]), identity_map(G.value[1])}};
    o.require(is_local_equivalence(idG, {pU, pX}, 0).verdict == Verdict::yes, "identity");
    auto ptK = share(point(2));
    auto seg = share(standard_simplex(1, 2));
    auto circ = share(build_standard(StandardKind::boundary, 2, {}, 2));
    auto cpt = constant_presheaf(sierp, ptK);
    auto cseg = constant_presheaf(sierp, seg);
    auto ccirc = constant_presheaf(sierp, circ);
    PresheafMap segpt{&cseg, &cpt, {map_to_point(seg, ptK), map_to_point(seg, ptK)}};
    PresheafMap circpt{&ccirc, &cpt, {map_to_point(circ, ptK), map_to_point(circ, ptK)}};
    PointDiagram atU = point_at(sierp.category, 0);
    o.require(is_local_equivalence(segpt, {atU}, 1).verdict == Verdict::yes, "Delta[1] -> pt: contractible");
    o.require(is_local_equivalence(circpt, {atU}, 1).verdict == Verdict::no, "circle -> pt: H_1 = Z");
    o.note << presheaves << " presheaves, 5 stalkwise fixtures; ";
    report(11, "Sierpinski site: axioms, sheafification, stalkwise verdicts", o, seconds_since(t0));
}

// ---------------------------------------------------------------------------
// 12. determinism
// ---------------------------------------------------------------------------

void criterion12()
{
    auto t0 = Clock::now();
    Outcome_ o;
    std::vector<std::tuple<std::string, std::string, RunOptions>> runs{
        {"homology", "boundary2.json", {}},
        {"fibration", "nerve_arrow.json", {}},
        {"verify theorem-b", "comma_poset_to_BS3.json", {}},
        {"verify theorem-b", "naturals_self_action.json", {}},
        {"verify theorem-b", "z2_swap_action.json", {}},
        {"verify puppe", "puppe_double_cover.json", {}},
        {"verify puppe", "puppe_broken.json", {}},
        {"hocolim", "hocolim_circle.json", {}},
        {"verify group-completion", "naturals_group_completion.json", {}},
        {"verify group-completion", "block_sum_group_completion.json",
         RunOptions{"known-answer:" + fixture("symmetric_known.json"), {}, {}, {}, {}}},
        {"sheafify", "sierpinski_presheaves.json", {}},
        {"stalk", "sierpinski_presheaves.json", {}},
        {"validate-site", "bad_site.json", {}},
    };
    std::size_t compared = 0;
    for (const auto& [cmd, file, opt] : runs)
    {
        std::string first;
        for (unsigned threads : {1u, 4u})
        {
            set_thread_count(threads);
            for (int rep = 0; rep < 3; ++rep)
            {
                auto text = run_command(cmd, parse_input(fixture(file)), opt).report.dump(2);
                if (first.empty())
                    first = text;
                o.require(text == first, cmd + " " + file + " threads " + std::to_string(threads));
                ++compared;
            }
        }
    }
    set_thread_count(std::max(1u, std::thread::hardware_concurrency()));
    o.note << runs.size() << " reports x 3 runs x threads {1, 4}; ";
    report(12, "machine-readable reports are byte-identical", o, seconds_since(t0));
}

}  // namespace

int main()
{
    std::cout << "acceptance criteria\n";
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    criterion12();
    std::cout << (12 - failures) << "/12 criteria passed\n";
    return failures;
}
