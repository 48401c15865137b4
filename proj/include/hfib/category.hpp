/**
 * Finite categories given by composition tables, functors between them,
 * nerves, comma categories f/c and under categories c/C.
 *
 * Composition is written in diagrammatic order: then(f, g) is "f, then g",
 * i.e. g o f, defined when target(f) == source(g).
 */
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "sset.hpp"

namespace hfib {

struct Morphism
{
    std::string name;
    Index source = 0;
    Index target = 0;
    bool operator==(const Morphism&) const = default;
};

class FiniteCategory
{
public:
    FiniteCategory() = default;

    /// then_table[f * |mor| + g] = g o f, or kNone when not composable.
    FiniteCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms, std::vector<Index> identities,
                   std::vector<Index> then_table)
        : objects_(std::move(objects)), morphisms_(std::move(morphisms)), identities_(std::move(identities)),
          then_(std::move(then_table))
    {
        validate();
    }

    std::size_t object_count() const { return objects_.size(); }
    std::size_t morphism_count() const { return morphisms_.size(); }
    const std::string& object_name(Index c) const { return objects_[c]; }
    const Morphism& morphism(Index f) const { return morphisms_[f]; }
    const std::vector<Morphism>& morphisms() const { return morphisms_; }
    const std::vector<std::string>& objects() const { return objects_; }
    Index source(Index f) const { return morphisms_[f].source; }
    Index target(Index f) const { return morphisms_[f].target; }
    Index identity(Index c) const { return identities_[c]; }
    bool is_identity(Index f) const { return identities_[source(f)] == f; }

    /// g o f; throws when not composable.
    Index then(Index f, Index g) const
    {
        Index h = then_[f * morphisms_.size() + g];
        if (h == kNone)
            throw InvalidArgument("category: morphisms '" + morphisms_[f].name + "' and '" + morphisms_[g].name +
                                  "' are not composable");
        return h;
    }

    std::vector<Index> hom(Index a, Index b) const
    {
        std::vector<Index> out;
        for (Index f = 0; f < morphisms_.size(); ++f)
            if (source(f) == a && target(f) == b)
                out.push_back(f);
        return out;
    }

    /// Inverse of f, or kNone.
    Index inverse(Index f) const
    {
        for (Index g : hom(target(f), source(f)))
            if (then(f, g) == identity(source(f)) && then(g, f) == identity(target(f)))
                return g;
        return kNone;
    }

    bool is_groupoid() const
    {
        for (Index f = 0; f < morphisms_.size(); ++f)
            if (inverse(f) == kNone)
                return false;
        return true;
    }

    Index find_morphism(const std::string& name) const
    {
        for (Index f = 0; f < morphisms_.size(); ++f)
            if (morphisms_[f].name == name)
                return f;
        throw InvalidArgument("category: no morphism named '" + name + "'");
    }

    Index find_object(const std::string& name) const
    {
        for (Index c = 0; c < objects_.size(); ++c)
            if (objects_[c] == name)
                return c;
        throw InvalidArgument("category: no object named '" + name + "'");
    }

    bool operator==(const FiniteCategory&) const = default;

private:
    void validate() const
    {
        const std::size_t M = morphisms_.size();
        auto fail = [](const std::string& m) { throw CorruptInput("category: " + m); };
        if (identities_.size() != objects_.size())
            fail("need one identity per object");
        if (then_.size() != M * M)
            fail("composition table has the wrong size");
        for (const auto& m : morphisms_)
            if (m.source >= objects_.size() || m.target >= objects_.size())
                fail("morphism '" + m.name + "' has an endpoint out of range");
        for (Index c = 0; c < objects_.size(); ++c)
        {
            Index e = identities_[c];
            if (e >= M || source(e) != c || target(e) != c)
                fail("identity of '" + objects_[c] + "' is not an endomorphism of it");
        }
        for (Index f = 0; f < M; ++f)
            for (Index g = 0; g < M; ++g)
            {
                Index h = then_[f * M + g];
                bool composable = target(f) == source(g);
                if (composable != (h != kNone))
                    fail("composition defined exactly on composable pairs fails at (" + morphisms_[f].name + ", " +
                         morphisms_[g].name + ")");
                if (composable && (h >= M || source(h) != source(f) || target(h) != target(g)))
                    fail("composite of (" + morphisms_[f].name + ", " + morphisms_[g].name + ") has wrong endpoints");
            }
        for (Index f = 0; f < M; ++f)
            if (then_[identities_[source(f)] * M + f] != f || then_[f * M + identities_[target(f)]] != f)
                fail("unit law fails at '" + morphisms_[f].name + "'");
        for (Index f = 0; f < M; ++f)
            for (Index g = 0; g < M; ++g)
            {
                if (target(f) != source(g))
                    continue;
                for (Index h = 0; h < M; ++h)
                    if (target(g) == source(h) &&
                        then_[then_[f * M + g] * M + h] != then_[f * M + then_[g * M + h]])
                        fail("associativity fails at (" + morphisms_[f].name + ", " + morphisms_[g].name + ", " +
                             morphisms_[h].name + ")");
            }
    }

    std::vector<std::string> objects_;
    std::vector<Morphism> morphisms_;
    std::vector<Index> identities_;
    std::vector<Index> then_;
};

/// Build a category from morphisms and a composition callback (g o f or kNone).
template <class Then>
FiniteCategory make_category(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                             std::vector<Index> identities, Then&& then)
{
    const std::size_t M = morphisms.size();
    std::vector<Index> table(M * M, kNone);
    for (Index f = 0; f < M; ++f)
        for (Index g = 0; g < M; ++g)
            if (morphisms[f].target == morphisms[g].source)
                table[f * M + g] = then(f, g);
    return FiniteCategory(std::move(objects), std::move(morphisms), std::move(identities), std::move(table));
}

struct Functor
{
    const FiniteCategory* source = nullptr;
    const FiniteCategory* target = nullptr;
    std::vector<Index> on_objects;
    std::vector<Index> on_morphisms;

    void validate() const
    {
        if (on_objects.size() != source->object_count() || on_morphisms.size() != source->morphism_count())
            throw CorruptInput("functor: table sizes do not match the source category");
        for (Index f = 0; f < source->morphism_count(); ++f)
        {
            Index F = on_morphisms[f];
            if (F >= target->morphism_count() || target->source(F) != on_objects[source->source(f)] ||
                target->target(F) != on_objects[source->target(f)])
                throw CorruptInput("functor: image of '" + source->morphism(f).name + "' has wrong endpoints");
        }
        for (Index c = 0; c < source->object_count(); ++c)
            if (on_morphisms[source->identity(c)] != target->identity(on_objects[c]))
                throw CorruptInput("functor: identity of '" + source->object_name(c) + "' is not preserved");
        for (Index f = 0; f < source->morphism_count(); ++f)
            for (Index g = 0; g < source->morphism_count(); ++g)
                if (source->target(f) == source->source(g) &&
                    on_morphisms[source->then(f, g)] != target->then(on_morphisms[f], on_morphisms[g]))
                    throw CorruptInput("functor: composition not preserved at (" + source->morphism(f).name + ", " +
                                       source->morphism(g).name + ")");
    }
};

// ---------------------------------------------------------------------------
// Nerves
// ---------------------------------------------------------------------------

namespace detail {

/// Composable strings of length n (objects for n = 0, encoded as one-element keys).
inline std::vector<std::vector<Index>> composable_strings(const FiniteCategory& C, std::size_t n)
{
    std::vector<std::vector<Index>> out;
    if (n == 0)
    {
        for (Index c = 0; c < C.object_count(); ++c)
            out.push_back({c});
        return out;
    }
    std::vector<Index> cur;
    std::function<void()> extend = [&]() {
        if (cur.size() == n)
        {
            out.push_back(cur);
            return;
        }
        for (Index f = 0; f < C.morphism_count(); ++f)
            if (cur.empty() || C.target(cur.back()) == C.source(f))
            {
                cur.push_back(f);
                extend();
                cur.pop_back();
            }
    };
    extend();
    return out;
}

inline std::vector<Index> nerve_face(const FiniteCategory& C, std::size_t n, std::size_t i, const std::vector<Index>& s)
{
    if (n == 1)
        return {i == 0 ? C.target(s[0]) : C.source(s[0])};
    std::vector<Index> t;
    for (std::size_t j = 0; j < n; ++j)
    {
        if (i == 0 && j == 0)
            continue;
        if (i == n && j == n - 1)
            continue;
        if (i > 0 && i < n && j == i - 1)
        {
            t.push_back(C.then(s[i - 1], s[i]));
            ++j;
            continue;
        }
        t.push_back(s[j]);
    }
    return t;
}

inline std::vector<Index> nerve_degen(const FiniteCategory& C, std::size_t n, std::size_t i, const std::vector<Index>& s)
{
    if (n == 0)
        return {C.identity(s[0])};
    Index obj = i == 0 ? C.source(s[0]) : C.target(s[i - 1]);
    std::vector<Index> t = s;
    t.insert(t.begin() + static_cast<std::ptrdiff_t>(i), C.identity(obj));
    return t;
}

inline std::string string_name(const FiniteCategory& C, std::size_t n, const std::vector<Index>& s)
{
    if (n == 0)
        return C.object_name(s[0]);
    std::string out;
    for (std::size_t j = 0; j < s.size(); ++j)
        out += (j ? "," : "") + C.morphism(s[j]).name;
    return "[" + out + "]";
}

}  // namespace detail

/// Nerve truncated at N: level n = composable strings of n morphisms.
inline TruncatedSSet nerve(const FiniteCategory& C, std::size_t N)
{
    std::vector<std::vector<std::vector<Index>>> levels(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
        levels[n] = detail::composable_strings(C, n);
    return build_from_keys(
        N, levels, [&](std::size_t n, std::size_t i, const std::vector<Index>& s) { return detail::nerve_face(C, n, i, s); },
        [&](std::size_t n, std::size_t i, const std::vector<Index>& s) { return detail::nerve_degen(C, n, i, s); },
        [&](std::size_t n, const std::vector<Index>& s) { return detail::string_name(C, n, s); });
}

/// Index of a composable string in nerve(C, N) at level n.
class NerveIndex
{
public:
    NerveIndex(const FiniteCategory& C, std::size_t N) : lookup_(N + 1)
    {
        for (std::size_t n = 0; n <= N; ++n)
        {
            auto strings = detail::composable_strings(C, n);
            for (Index k = 0; k < strings.size(); ++k)
                lookup_[n].emplace(strings[k], k);
        }
    }
    Index operator()(std::size_t n, const std::vector<Index>& s) const { return lookup_[n].at(s); }

private:
    std::vector<std::map<std::vector<Index>, Index>> lookup_;
};

/// N(F): N(D) -> N(C).
inline SMap nerve_map(const Functor& F, const SSetPtr& ND, const SSetPtr& NC)
{
    const std::size_t N = ND->trunc();
    NerveIndex idx(*F.target, N);
    SMap m{ND, NC, std::vector<std::vector<Index>>(N + 1)};
    for (std::size_t n = 0; n <= N; ++n)
        for (const auto& s : detail::composable_strings(*F.source, n))
        {
            std::vector<Index> t;
            if (n == 0)
                t = {F.on_objects[s[0]]};
            else
                for (Index f : s)
                    t.push_back(F.on_morphisms[f]);
            m.component[n].push_back(idx(n, t));
        }
    m.validate();
    return m;
}

// ---------------------------------------------------------------------------
// Comma and under categories
// ---------------------------------------------------------------------------

/// f/c with its projection to D. Objects are pairs (d, u: f(d) -> c).
struct CommaCategory
{
    FiniteCategory category;
    std::vector<std::pair<Index, Index>> objects;  ///< (d, u)
    std::vector<Index> underlying;                 ///< morphism -> D-morphism
};

inline CommaCategory comma_category(const Functor& f, Index c)
{
    const FiniteCategory& D = *f.source;
    const FiniteCategory& C = *f.target;
    CommaCategory K;
    std::vector<std::string> names;
    for (Index d = 0; d < D.object_count(); ++d)
        for (Index u : C.hom(f.on_objects[d], c))
        {
            K.objects.emplace_back(d, u);
            names.push_back("(" + D.object_name(d) + "," + C.morphism(u).name + ")");
        }
    std::vector<Morphism> mors;
    std::vector<Index> ids(K.objects.size());
    for (Index x = 0; x < K.objects.size(); ++x)
        for (Index y = 0; y < K.objects.size(); ++y)
            for (Index a : D.hom(K.objects[x].first, K.objects[y].first))
                if (C.then(f.on_morphisms[a], K.objects[y].second) == K.objects[x].second)
                {
                    if (x == y && a == D.identity(K.objects[x].first))
                        ids[x] = static_cast<Index>(mors.size());
                    mors.push_back({D.morphism(a).name + "@" + names[x], x, y});
                    K.underlying.push_back(a);
                }
    auto lookup = [&](Index x, Index y, Index a) {
        for (Index m = 0; m < mors.size(); ++m)
            if (mors[m].source == x && mors[m].target == y && K.underlying[m] == a)
                return m;
        throw std::logic_error("comma_category: composite missing");
    };
    auto under = K.underlying;
    K.category = make_category(names, mors, ids, [&](Index m1, Index m2) {
        return lookup(mors[m1].source, mors[m2].target, D.then(under[m1], under[m2]));
    });
    return K;
}

/// The transition functor f/c -> f/c' given by postcomposition with alpha: c -> c'.
inline Functor transition_functor(const Functor& f, const CommaCategory& from, const CommaCategory& to, Index alpha)
{
    const FiniteCategory& C = *f.target;
    Functor F{&from.category, &to.category, {}, {}};
    for (const auto& [d, u] : from.objects)
    {
        auto it = std::find(to.objects.begin(), to.objects.end(), std::pair<Index, Index>{d, C.then(u, alpha)});
        F.on_objects.push_back(static_cast<Index>(it - to.objects.begin()));
    }
    for (Index m = 0; m < from.category.morphism_count(); ++m)
    {
        Index x = F.on_objects[from.category.source(m)], y = F.on_objects[from.category.target(m)];
        Index found = kNone;
        for (Index n : to.category.hom(x, y))
            if (to.underlying[n] == from.underlying[m])
                found = n;
        F.on_morphisms.push_back(found);
    }
    F.validate();
    return F;
}

/// c/C with its projection functor to C. Objects are (c', u: c -> c').
struct UnderCategory
{
    FiniteCategory category;
    std::vector<std::pair<Index, Index>> objects;
    std::vector<Index> underlying;  ///< morphism -> C-morphism

    /// The projection c/C -> C (refers to this object; keep it alive).
    Functor projection(const FiniteCategory& C) const
    {
        Functor F{&category, &C, {}, underlying};
        for (const auto& [d, u] : objects)
            F.on_objects.push_back(d);
        return F;
    }
};

inline UnderCategory under_category(const FiniteCategory& C, Index c)
{
    UnderCategory K;
    std::vector<std::string> names;
    for (Index d = 0; d < C.object_count(); ++d)
        for (Index u : C.hom(c, d))
        {
            K.objects.emplace_back(d, u);
            names.push_back("(" + C.morphism(u).name + ")");
        }
    std::vector<Morphism> mors;
    std::vector<Index> under, ids(K.objects.size());
    for (Index x = 0; x < K.objects.size(); ++x)
        for (Index y = 0; y < K.objects.size(); ++y)
            for (Index v : C.hom(K.objects[x].first, K.objects[y].first))
                if (C.then(K.objects[x].second, v) == K.objects[y].second)
                {
                    if (x == y && v == C.identity(K.objects[x].first))
                        ids[x] = static_cast<Index>(mors.size());
                    mors.push_back({C.morphism(v).name + "@" + names[x], x, y});
                    under.push_back(v);
                }
    K.category = make_category(names, mors, ids, [&](Index m1, Index m2) {
        Index v = C.then(under[m1], under[m2]);
        for (Index m = 0; m < mors.size(); ++m)
            if (mors[m].source == mors[m1].source && mors[m].target == mors[m2].target && under[m] == v)
                return m;
        throw std::logic_error("under_category: composite missing");
    });
    K.underlying = under;
    return K;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// One-object category of a finite monoid given by its multiplication table
/// mult[a * n + b] = a * b with unit 0. Composition "a then b" is b * a.
inline FiniteCategory monoid_category(const std::vector<std::string>& elements, const std::vector<Index>& mult)
{
    const std::size_t n = elements.size();
    if (mult.size() != n * n)
        throw InvalidArgument("monoid_category: table must be n x n");
    std::vector<Morphism> mors;
    for (const auto& e : elements)
        mors.push_back({e, 0, 0});
    return make_category({"*"}, mors, {0}, [&](Index f, Index g) { return mult[g * n + f]; });
}

inline std::vector<Index> cyclic_table(std::size_t n)
{
    std::vector<Index> t(n * n);
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b)
            t[a * n + b] = static_cast<Index>((a + b) % n);
    return t;
}

inline FiniteCategory cyclic_group_category(std::size_t n)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back(std::to_string(i));
    return monoid_category(names, cyclic_table(n));
}

/// Permutations of {0..n-1} in lexicographic order (identity first).
inline std::vector<std::vector<int>> permutations(int n)
{
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do
        out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

inline std::string permutation_name(const std::vector<int>& p)
{
    std::string s;
    for (int v : p)
        s += std::to_string(v);
    return s.empty() ? "()" : s;
}

/// Multiplication table of S_n: (a * b)(i) = a(b(i)).
inline std::vector<Index> symmetric_table(int n)
{
    auto perms = permutations(n);
    std::map<std::vector<int>, Index> idx;
    for (Index k = 0; k < perms.size(); ++k)
        idx[perms[k]] = k;
    std::vector<Index> t(perms.size() * perms.size());
    for (Index a = 0; a < perms.size(); ++a)
        for (Index b = 0; b < perms.size(); ++b)
        {
            std::vector<int> c(n);
            for (int i = 0; i < n; ++i)
                c[i] = perms[a][perms[b][i]];
            t[a * perms.size() + b] = idx.at(c);
        }
    return t;
}

inline FiniteCategory symmetric_group_category(int n)
{
    std::vector<std::string> names;
    for (const auto& p : permutations(n))
        names.push_back(permutation_name(p));
    return monoid_category(names, symmetric_table(n));
}

/// The poset on {0..n-1} generated by the given relations a <= b.
inline FiniteCategory poset_category(std::size_t n, const std::vector<std::pair<Index, Index>>& relations,
                                     const std::vector<std::string>& names = {})
{
    std::vector<std::vector<char>> le(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        le[i][i] = 1;
    for (auto [a, b] : relations)
        le[a][b] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (le[i][k] && le[k][j])
                    le[i][j] = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && le[i][j] && le[j][i])
                throw InvalidArgument("poset_category: relations contain a cycle");
    std::vector<std::string> obj;
    for (std::size_t i = 0; i < n; ++i)
        obj.push_back(i < names.size() ? names[i] : std::to_string(i));
    std::vector<Morphism> mors;
    std::vector<Index> ids(n);
    std::map<std::pair<Index, Index>, Index> at;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (le[i][j])
            {
                if (i == j)
                    ids[i] = static_cast<Index>(mors.size());
                at[{i, j}] = static_cast<Index>(mors.size());
                mors.push_back({i == j ? "id" + obj[i] : obj[i] + "<" + obj[j], i, j});
            }
    return make_category(obj, mors, ids, [&](Index f, Index g) { return at.at({mors[f].source, mors[g].target}); });
}

/// [n] = 0 < 1 < ... < n.
inline FiniteCategory ordinal_category(std::size_t n)
{
    std::vector<std::pair<Index, Index>> rel;
    for (Index i = 0; i < n; ++i)
        rel.emplace_back(i, i + 1);
    return poset_category(n + 1, rel);
}

/// The groupoid with objects 0..n-1 and exactly one morphism between any two.
inline FiniteCategory codiscrete_category(std::size_t n)
{
    std::vector<std::string> obj;
    for (std::size_t i = 0; i < n; ++i)
        obj.push_back(std::to_string(i));
    std::vector<Morphism> mors;
    std::vector<Index> ids(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
        {
            if (i == j)
                ids[i] = static_cast<Index>(mors.size());
            mors.push_back({obj[i] + ">" + obj[j], i, j});
        }
    return make_category(obj, mors, ids, [&](Index f, Index g) { return mors[f].source * n + mors[g].target; });
}

/// Disjoint union of two categories.
inline FiniteCategory disjoint_union(const FiniteCategory& A, const FiniteCategory& B)
{
    std::vector<std::string> obj;
    for (const auto& o : A.objects())
        obj.push_back("a." + o);
    for (const auto& o : B.objects())
        obj.push_back("b." + o);
    const Index oa = static_cast<Index>(A.object_count()), ma = static_cast<Index>(A.morphism_count());
    std::vector<Morphism> mors;
    for (const auto& m : A.morphisms())
        mors.push_back({"a." + m.name, m.source, m.target});
    for (const auto& m : B.morphisms())
        mors.push_back({"b." + m.name, m.source + oa, m.target + oa});
    std::vector<Index> ids;
    for (Index c = 0; c < A.object_count(); ++c)
        ids.push_back(A.identity(c));
    for (Index c = 0; c < B.object_count(); ++c)
        ids.push_back(B.identity(c) + ma);
    return make_category(obj, mors, ids, [&](Index f, Index g) {
        return f < ma ? A.then(f, g) : B.then(f - ma, g - ma) + ma;
    });
}

/// Product of two categories.
inline FiniteCategory product_category(const FiniteCategory& A, const FiniteCategory& B)
{
    std::vector<std::string> obj;
    for (const auto& a : A.objects())
        for (const auto& b : B.objects())
            obj.push_back("(" + a + "," + b + ")");
    const std::size_t nb = B.object_count(), mb = B.morphism_count();
    std::vector<Morphism> mors;
    for (Index f = 0; f < A.morphism_count(); ++f)
        for (Index g = 0; g < mb; ++g)
            mors.push_back({"(" + A.morphism(f).name + "," + B.morphism(g).name + ")",
                            static_cast<Index>(A.source(f) * nb + B.source(g)),
                            static_cast<Index>(A.target(f) * nb + B.target(g))});
    std::vector<Index> ids;
    for (Index a = 0; a < A.object_count(); ++a)
        for (Index b = 0; b < nb; ++b)
            ids.push_back(static_cast<Index>(A.identity(a) * mb + B.identity(b)));
    return make_category(obj, mors, ids, [&](Index x, Index y) {
        return static_cast<Index>(A.then(x / mb, y / mb) * mb + B.then(x % mb, y % mb));
    });
}

/// The functor from a one-object category 1 picking out object c.
inline FiniteCategory terminal_category() { return poset_category(1, {}); }

}  // namespace hfib
