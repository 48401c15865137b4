/**
 * Simplicial monoids as one-object category objects.
 *
 * Infinite monoids are modelled by windows: multiplication is partial and a
 * product is stored only while its grade stays inside the window. The grade
 * of a simplex is the grade of its component.
 *
 * Also: the Pontryagin product on homology, computed per component through
 * the Eilenberg-Zilber shuffle map.
 */
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "category.hpp"
#include "chains.hpp"
#include "internal_category.hpp"
#include "sset.hpp"

namespace hfib {

class MonoidObject
{
public:
    MonoidObject() = default;

    /// mul(n, a, b) = a * b at level n, or kNone outside the window.
    template <class MulFn>
    MonoidObject(SSetPtr M, MulFn&& mul, Index unit_vertex, std::vector<Index> sections,
                 std::vector<int> vertex_grades = {}, std::optional<int> window = {}, std::string name = "M")
        : M_(std::move(M)), unit_(unit_vertex), sections_(std::move(sections)), grades_(std::move(vertex_grades)),
          window_(window), name_(std::move(name))
    {
        const std::size_t N = M_->trunc();
        table_.resize(N + 1);
        for (std::size_t n = 0; n <= N; ++n)
            for (Index a = 0; a < M_->size(n); ++a)
                for (Index b = 0; b < M_->size(n); ++b)
                {
                    Index c = mul(n, a, b);
                    if (c != kNone)
                        table_[n].emplace(detail::pack(a, b), c);
                }
        validate();
    }

    const SSetPtr& space() const { return M_; }
    std::size_t trunc() const { return M_->trunc(); }
    const std::string& name() const { return name_; }
    const std::vector<Index>& sections() const { return sections_; }
    std::optional<int> window() const { return window_; }
    bool graded() const { return !grades_.empty(); }

    Index mul(std::size_t n, Index a, Index b) const
    {
        auto it = table_[n].find(detail::pack(a, b));
        return it == table_[n].end() ? kNone : it->second;
    }

    Index unit(std::size_t n) const
    {
        Index u = unit_;
        for (std::size_t k = 0; k < n; ++k)
            u = M_->degen(k, 0, u);
        return u;
    }

    /// Degenerate copy at level n of a vertex.
    Index constant(std::size_t n, Index v) const
    {
        for (std::size_t k = 0; k < n; ++k)
            v = M_->degen(k, 0, v);
        return v;
    }

    int grade(std::size_t n, Index x) const
    {
        if (grades_.empty())
            return 0;
        return grades_[vertex_of(*M_, n, x, 0)];
    }

    bool is_total() const
    {
        for (std::size_t n = 0; n <= trunc(); ++n)
            if (table_[n].size() != M_->size(n) * M_->size(n))
                return false;
        return true;
    }

    /// Right multiplication by a vertex v as a map from the sub-object where it is defined.
    SubObject right_domain(Index v) const
    {
        return sub_object(M_, [&](std::size_t n, Index x) { return mul(n, x, constant(n, v)) != kNone; });
    }

    /// One-object category: f then g is g * f.
    std::shared_ptr<const InternalCategory> category() const
    {
        if (!category_)
        {
            const std::size_t N = trunc();
            auto pt = share(point(N));
            SMap to_pt = map_to_point(M_, pt);
            SMap e{pt, M_, std::vector<std::vector<Index>>(N + 1)};
            for (std::size_t n = 0; n <= N; ++n)
                e.component[n].push_back(unit(n));
            category_ = std::make_shared<const InternalCategory>(
                pt, M_, to_pt, to_pt, e, [&](std::size_t n, Index f, Index g) { return mul(n, g, f); });
        }
        return category_;
    }

    /// M acting on itself by left multiplication.
    InternalAction self_action() const
    {
        auto C = category();
        return InternalAction(C, M_, C->s(), [&](std::size_t n, Index phi, Index x) { return mul(n, phi, x); });
    }

private:
    void validate() const
    {
        const std::size_t N = trunc();
        auto fail = [](const std::string& m) { throw CorruptInput("monoid: " + m); };
        if (unit_ >= M_->size(0))
            fail("unit is not a vertex");
        for (Index s : sections_)
            if (s >= M_->size(0))
                fail("section is not a vertex");
        if (!grades_.empty() && grades_.size() != M_->size(0))
            fail("one grade per vertex is required");
        if (!grades_.empty())
            for (std::size_t n = 1; n <= N; ++n)
                for (Index x = 0; x < M_->size(n); ++x)
                    for (int i = 0; i <= static_cast<int>(n); ++i)
                        if (grades_[vertex_of(*M_, n, x, i)] != grades_[vertex_of(*M_, n, x, 0)])
                            fail("grade is not constant on " + M_->name(n, x));
        for (std::size_t n = 0; n <= N; ++n)
        {
            Index u = unit(n);
            for (Index x = 0; x < M_->size(n); ++x)
                if (mul(n, u, x) != x || mul(n, x, u) != x)
                    fail("unit law fails for " + M_->name(n, x));
            for (const auto& [key, c] : table_[n])
            {
                Index a = static_cast<Index>(key >> 32), b = static_cast<Index>(key & 0xffffffffu);
                if (window_ && !grades_.empty() && grade(n, c) != grade(n, a) + grade(n, b))
                    fail("multiplication does not add grades");
                for (std::size_t i = 0; n > 0 && i <= n; ++i)
                    if (mul(n - 1, M_->face(n, i, a), M_->face(n, i, b)) != M_->face(n, i, c))
                        fail("multiplication does not commute with faces");
                for (std::size_t i = 0; n < N && i <= n; ++i)
                    if (mul(n + 1, M_->degen(n, i, a), M_->degen(n, i, b)) != M_->degen(n, i, c))
                        fail("multiplication does not commute with degeneracies");
            }
            auto triple = [&](Index a, Index b, Index c) {
                return "(" + M_->name(n, a) + ", " + M_->name(n, b) + ", " + M_->name(n, c) + ")";
            };
            for (const auto& [key, ab] : table_[n])
            {
                Index a = static_cast<Index>(key >> 32), b = static_cast<Index>(key & 0xffffffffu);
                for (Index c = 0; c < M_->size(n); ++c)
                {
                    Index left = mul(n, ab, c);
                    Index bc = mul(n, b, c);
                    Index right = bc == kNone ? kNone : mul(n, a, bc);
                    if (left != right)
                        fail("not associative at level " + std::to_string(n) + " on " + triple(a, b, c));
                }
            }
            for (const auto& [key, bc] : table_[n])
            {
                Index b = static_cast<Index>(key >> 32), c = static_cast<Index>(key & 0xffffffffu);
                for (Index a = 0; a < M_->size(n); ++a)
                    if (mul(n, a, b) == kNone && mul(n, a, bc) != kNone)
                        fail("not associative at level " + std::to_string(n) + " on " + triple(a, b, c));
            }
        }
    }

    SSetPtr M_;
    Index unit_ = 0;
    std::vector<Index> sections_;
    std::vector<int> grades_;
    std::optional<int> window_;
    std::string name_;
    std::vector<std::unordered_map<std::uint64_t, Index>> table_;
    mutable std::shared_ptr<const InternalCategory> category_;
};

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// A discrete monoid from a table with mult[a * n + b] = a * b (kNone = undefined).
inline MonoidObject discrete_monoid(const std::vector<std::string>& elements, const std::vector<Index>& mult,
                                    Index unit, std::size_t N, std::vector<Index> sections = {},
                                    std::vector<int> grades = {}, std::optional<int> window = {},
                                    std::string name = "M")
{
    const std::size_t k = elements.size();
    if (mult.size() != k * k)
        throw CorruptInput("monoid: table must be " + std::to_string(k) + " x " + std::to_string(k));
    for (Index v : mult)
        if (v != kNone && v >= k)
            throw CorruptInput("monoid: table entry out of range");
    auto M = share(discrete(elements, N));
    return MonoidObject(
        M, [&](std::size_t, Index a, Index b) { return mult[a * k + b]; }, unit, std::move(sections),
        std::move(grades), window, std::move(name));
}

inline MonoidObject cyclic_group_monoid(std::size_t n, std::size_t N)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back(std::to_string(i));
    return discrete_monoid(names, cyclic_table(n), 0, N, {}, {}, {}, "Z/" + std::to_string(n));
}

inline MonoidObject symmetric_group_monoid(int n, std::size_t N)
{
    std::vector<std::string> names;
    for (const auto& p : permutations(n))
        names.push_back(permutation_name(p));
    return discrete_monoid(names, symmetric_table(n), 0, N, {}, {}, {}, "S" + std::to_string(n));
}

/// {0, ..., K} under addition, defined while the sum stays <= K; section 1.
inline MonoidObject naturals_monoid(int K, std::size_t N)
{
    std::vector<std::string> names;
    std::vector<int> grades;
    for (int i = 0; i <= K; ++i)
        names.push_back(std::to_string(i)), grades.push_back(i);
    std::vector<Index> mult((K + 1) * (K + 1), kNone);
    for (int a = 0; a <= K; ++a)
        for (int b = 0; a + b <= K; ++b)
            mult[a * (K + 1) + b] = static_cast<Index>(a + b);
    std::vector<Index> sections;
    if (K >= 1)
        sections.push_back(1);
    return discrete_monoid(names, mult, 0, N, sections, grades, K, "N<=" + std::to_string(K));
}

/// {-K, ..., K} under addition, defined while the sum stays in the window.
inline MonoidObject integers_monoid(int K, std::size_t N)
{
    std::vector<std::string> names;
    for (int i = -K; i <= K; ++i)
        names.push_back(std::to_string(i));
    const int size = 2 * K + 1;
    std::vector<Index> mult(size * size, kNone);
    for (int a = -K; a <= K; ++a)
        for (int b = -K; b <= K; ++b)
            if (a + b >= -K && a + b <= K)
                mult[(a + K) * size + (b + K)] = static_cast<Index>(a + b + K);
    return discrete_monoid(names, mult, static_cast<Index>(K), N, {static_cast<Index>(K + 1)}, {}, {},
                           "Z[" + std::to_string(-K) + "," + std::to_string(K) + "]");
}

/**
 * The disjoint union of the nerves B S_g for g <= G, under block sum of
 * permutations (defined while the total size stays <= G). Section: the
 * vertex of size 1.
 */
inline MonoidObject block_sum_monoid(int G, std::size_t N)
{
    struct Perms
    {
        std::vector<std::vector<int>> list;
        std::map<std::vector<int>, Index> index;
        std::vector<Index> table;
    };
    std::vector<Perms> P(G + 1);
    for (int g = 0; g <= G; ++g)
    {
        P[g].list = g == 0 ? std::vector<std::vector<int>>{{}} : permutations(g);
        for (Index k = 0; k < P[g].list.size(); ++k)
            P[g].index[P[g].list[k]] = k;
        P[g].table = g == 0 ? std::vector<Index>{0} : symmetric_table(g);
    }
    using Key = std::vector<Index>;  // (g, p_1, ..., p_n): a string of n permutations of size g
    std::vector<std::vector<Key>> levels(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
        for (int g = 0; g <= G; ++g)
        {
            std::size_t k = P[g].list.size();
            Key cur(n + 1, 0);
            cur[0] = static_cast<Index>(g);
            std::function<void(std::size_t)> go = [&](std::size_t i) {
                if (i > n)
                {
                    levels[n].push_back(cur);
                    return;
                }
                for (Index p = 0; p < k; ++p)
                {
                    cur[i] = p;
                    go(i + 1);
                }
            };
            go(1);
        }
    auto face = [&](std::size_t n, std::size_t i, const Key& s) {
        Key t{s[0]};
        const auto& tab = P[s[0]].table;
        const std::size_t k = P[s[0]].list.size();
        for (std::size_t j = 1; j <= n; ++j)
        {
            if ((i == 0 && j == 1) || (i == n && j == n))
                continue;
            if (i > 0 && i < n && j == i)
            {
                // "s[i] then s[i+1]" is s[i+1] * s[i]
                t.push_back(tab[s[i + 1] * k + s[i]]);
                ++j;
                continue;
            }
            t.push_back(s[j]);
        }
        return t;
    };
    auto degen = [&](std::size_t, std::size_t i, const Key& s) {
        Key t = s;
        t.insert(t.begin() + static_cast<std::ptrdiff_t>(i + 1), 0);
        return t;
    };
    auto name = [&](std::size_t, const Key& s) {
        std::string out = std::to_string(s[0]) + ":[";
        for (std::size_t j = 1; j < s.size(); ++j)
            out += (j > 1 ? "," : "") + permutation_name(P[s[0]].list[s[j]]);
        return out + "]";
    };
    auto M = share(build_from_keys(N, levels, face, degen, name));
    std::vector<std::map<Key, Index>> index(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
        for (Index x = 0; x < levels[n].size(); ++x)
            index[n][levels[n][x]] = x;
    auto block = [&](int a, Index p, int b, Index q) {
        std::vector<int> r;
        for (int v : P[a].list[p])
            r.push_back(v);
        for (int v : P[b].list[q])
            r.push_back(v + a);
        return P[a + b].index.at(r);
    };
    auto mul = [&](std::size_t n, Index x, Index y) -> Index {
        const Key& s = levels[n][x];
        const Key& t = levels[n][y];
        int a = static_cast<int>(s[0]), b = static_cast<int>(t[0]);
        if (a + b > G)
            return kNone;
        Key r{static_cast<Index>(a + b)};
        for (std::size_t j = 1; j <= n; ++j)
            r.push_back(block(a, s[j], b, t[j]));
        return index[n].at(r);
    };
    std::vector<int> grades;
    for (const auto& v : levels[0])
        grades.push_back(static_cast<int>(v[0]));
    std::vector<Index> sections;
    if (G >= 1)
        sections.push_back(index[0].at(Key{1}));
    return MonoidObject(M, mul, index[0].at(Key{0}), sections, grades, G, "BS<=" + std::to_string(G));
}

// ---------------------------------------------------------------------------
// pi_0 and the grouplike test
// ---------------------------------------------------------------------------

struct Pi0Monoid
{
    Components components;
    std::vector<Index> representative;  ///< a vertex per component
    std::vector<Index> table;           ///< component product, kNone where undefined
    Index unit = kNone;

    std::size_t size() const { return representative.size(); }

    /// Every product defined and every element invertible.
    bool is_group() const
    {
        const std::size_t k = size();
        for (Index a = 0; a < k; ++a)
        {
            bool inv = false;
            for (Index b = 0; b < k; ++b)
            {
                if (table[a * k + b] == kNone)
                    return false;
                inv = inv || (table[a * k + b] == unit && table[b * k + a] == unit);
            }
            if (!inv)
                return false;
        }
        return true;
    }
};

inline Pi0Monoid pi0_monoid(const MonoidObject& M)
{
    Pi0Monoid P;
    P.components = pi0(*M.space());
    const std::size_t k = P.components.count;
    P.representative.assign(k, kNone);
    for (Index v = 0; v < M.space()->size(0); ++v)
        if (P.representative[P.components.of_vertex[v]] == kNone)
            P.representative[P.components.of_vertex[v]] = v;
    P.table.assign(k * k, kNone);
    for (Index a = 0; a < k; ++a)
        for (Index b = 0; b < k; ++b)
        {
            Index c = M.mul(0, P.representative[a], P.representative[b]);
            if (c != kNone)
                P.table[a * k + b] = P.components.of_vertex[c];
        }
    P.unit = P.components.of_vertex[M.unit(0)];
    return P;
}

// ---------------------------------------------------------------------------
// Pontryagin product
// ---------------------------------------------------------------------------

namespace detail {

/// (p,q)-shuffles as the sorted positions mu (size p) and nu (size q), with signs.
struct Shuffle
{
    std::vector<int> mu, nu;
    int sign = 1;
};

inline std::vector<Shuffle> shuffles(int p, int q)
{
    std::vector<Shuffle> out;
    std::vector<int> mu;
    std::function<void(int)> go = [&](int start) {
        if (static_cast<int>(mu.size()) == p)
        {
            Shuffle s;
            s.mu = mu;
            for (int i = 0; i < p + q; ++i)
                if (!std::binary_search(mu.begin(), mu.end(), i))
                    s.nu.push_back(i);
            // sign of the permutation (mu, nu): count inversions
            int inv = 0;
            for (int a : s.mu)
                for (int b : s.nu)
                    inv += b < a;
            s.sign = inv % 2 ? -1 : 1;
            out.push_back(std::move(s));
            return;
        }
        for (int i = start; i < p + q; ++i)
        {
            mu.push_back(i);
            go(i + 1);
            mu.pop_back();
        }
    };
    go(0);
    return out;
}

}  // namespace detail

/// Homology of each component of M through a range, for products of classes.
struct PontryaginRing
{
    const MonoidObject* monoid = nullptr;
    Pi0Monoid pi;
    std::size_t range = 0;
    std::vector<SubObject> parts;       ///< per component
    std::vector<HomologyData> homology;  ///< per component

    /// Generator g of H_k of component c as a chain on M: simplex -> coefficient.
    std::map<Index, Integer> lift(std::size_t c, std::size_t k, std::size_t g) const
    {
        std::map<Index, Integer> out;
        const auto& H = homology[c];
        const auto& gen = H.groups.at(k).generators.at(g);
        for (std::size_t b = 0; b < gen.size(); ++b)
            if (gen[b] != 0)
                out[parts[c].inclusion(k, H.chains.complex.basis[k][b])] += gen[b];
        return out;
    }

    /// Express a chain on M, supported in component c, in generators of H_k(c).
    std::vector<Integer> express(std::size_t c, std::size_t k, const std::map<Index, Integer>& chain) const
    {
        const auto& H = homology[c];
        std::vector<Integer> v(H.chains.complex.basis[k].size(), 0);
        for (const auto& [x, a] : chain)
        {
            Index local = parts[c].position[k][x];
            if (local == kNone)
                throw ContractViolation("pontryagin: chain leaves its component");
            Index b = H.chains.position[k][local];
            if (b != kNone)
                v[b] += a;
        }
        return H.groups.at(k).express(v);
    }

    /// Shuffle product of two chains of degrees p and q (terms leaving the window must not occur).
    std::map<Index, Integer> product(std::size_t p, const std::map<Index, Integer>& a, std::size_t q,
                                     const std::map<Index, Integer>& b) const
    {
        const TruncatedSSet& X = *monoid->space();
        std::map<Index, Integer> out;
        for (const auto& sh : detail::shuffles(static_cast<int>(p), static_cast<int>(q)))
            for (const auto& [x, cx] : a)
                for (const auto& [y, cy] : b)
                {
                    Index xs = x, ys = y;
                    std::size_t lx = p, ly = q;
                    for (int i : sh.nu)
                        xs = X.degen(lx++, static_cast<std::size_t>(i), xs);
                    for (int i : sh.mu)
                        ys = X.degen(ly++, static_cast<std::size_t>(i), ys);
                    Index z = monoid->mul(p + q, xs, ys);
                    if (z == kNone)
                        throw ContractViolation("pontryagin: product leaves the window");
                    if (is_degenerate(X, p + q, z))
                        continue;
                    out[z] += Integer(sh.sign) * cx * cy;
                }
        for (auto it = out.begin(); it != out.end();)
            it = it->second == 0 ? out.erase(it) : std::next(it);
        return out;
    }

    /// Component of a product of components, or kNone outside the window.
    Index product_component(std::size_t c, std::size_t d) const { return pi.table[c * pi.size() + d]; }
};

inline PontryaginRing pontryagin_ring(const MonoidObject& M, std::size_t range)
{
    PontryaginRing R;
    R.monoid = &M;
    R.pi = pi0_monoid(M);
    R.range = range;
    for (std::size_t c = 0; c < R.pi.size(); ++c)
        R.parts.push_back(component(M.space(), R.pi.components, static_cast<Index>(c)));
    R.homology.resize(R.pi.size());
    parallel_for(R.pi.size(), [&](std::size_t c) { R.homology[c] = HomologyData::of(*R.parts[c].object, range); });
    return R;
}

struct RingCheck
{
    bool ok = true;
    std::size_t checked = 0;
    std::string witness;
};

/// Unit and associativity of the product on generator classes (degrees summing to <= range).
inline RingCheck check_ring_axioms(const PontryaginRing& R)
{
    RingCheck out;
    const std::size_t k = R.pi.size();
    struct Gen
    {
        std::size_t c, deg, g;
    };
    std::vector<Gen> gens;
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t d = 0; d <= R.range; ++d)
            for (std::size_t g = 0; g < R.homology[c].groups[d].generator_count(); ++g)
                gens.push_back({c, d, g});
    std::map<Index, Integer> one{{R.monoid->unit(0), 1}};
    for (const auto& a : gens)
    {
        auto la = R.lift(a.c, a.deg, a.g);
        auto base = R.express(a.c, a.deg, la);
        ++out.checked;
        if (R.express(a.c, a.deg, R.product(0, one, a.deg, la)) != base ||
            R.express(a.c, a.deg, R.product(a.deg, la, 0, one)) != base)
        {
            out.ok = false;
            out.witness = "unit fails on a generator of H_" + std::to_string(a.deg);
            return out;
        }
    }
    for (const auto& a : gens)
        for (const auto& b : gens)
        {
            Index ab = R.product_component(a.c, b.c);
            if (ab == kNone || a.deg + b.deg > R.range)
                continue;
            for (const auto& c : gens)
            {
                Index abc = R.product_component(ab, c.c);
                Index bc = R.product_component(b.c, c.c);
                std::size_t deg = a.deg + b.deg + c.deg;
                if (abc == kNone || bc == kNone || deg > R.range)
                    continue;
                auto la = R.lift(a.c, a.deg, a.g), lb = R.lift(b.c, b.deg, b.g), lc = R.lift(c.c, c.deg, c.g);
                auto left = R.product(a.deg + b.deg, R.product(a.deg, la, b.deg, lb), c.deg, lc);
                auto right = R.product(a.deg, la, b.deg + c.deg, R.product(b.deg, lb, c.deg, lc));
                ++out.checked;
                if (R.express(abc, deg, left) != R.express(abc, deg, right))
                {
                    out.ok = false;
                    out.witness = "associativity fails in degree " + std::to_string(deg);
                    return out;
                }
            }
        }
    return out;
}

/// [m] * y == y * [m] in homology for every section m and every generator y where both are defined.
inline RingCheck check_centrality(const PontryaginRing& R)
{
    RingCheck out;
    for (Index m : R.monoid->sections())
    {
        std::size_t cm = R.pi.components.of_vertex[m];
        std::map<Index, Integer> lm{{m, 1}};
        for (std::size_t c = 0; c < R.pi.size(); ++c)
        {
            Index left_c = R.product_component(cm, c), right_c = R.product_component(c, cm);
            if (left_c == kNone || right_c == kNone)
                continue;
            for (std::size_t d = 0; d <= R.range; ++d)
                for (std::size_t g = 0; g < R.homology[c].groups[d].generator_count(); ++g)
                {
                    auto ly = R.lift(c, d, g);
                    ++out.checked;
                    if (left_c != right_c ||
                        R.express(left_c, d, R.product(0, lm, d, ly)) != R.express(right_c, d, R.product(d, ly, 0, lm)))
                    {
                        out.ok = false;
                        out.witness = "section " + R.monoid->space()->name(0, m) +
                                      " does not commute with a generator of H_" + std::to_string(d) + " of " +
                                      R.monoid->space()->name(0, R.pi.representative[c]);
                        return out;
                    }
                }
        }
    }
    return out;
}

}  // namespace hfib
