/**
 * Finite sites, presheaves of truncated simplicial sets, sheafification and
 * stalks.
 *
 * A sieve on c is a sorted list of morphisms with target c, closed under
 * precomposition. A presheaf X assigns X(c) to each object and, to each
 * morphism f: d -> c, a restriction map X(f): X(c) -> X(d). A presheaf of
 * sets is a presheaf of simplicial sets truncated at 0.
 */
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "category.hpp"
#include "equivalence.hpp"
#include "fibration.hpp"
#include "parallel.hpp"

namespace hfib {

using Sieve = std::vector<Index>;

struct FiniteSite
{
    FiniteCategory category;
    std::vector<std::vector<Sieve>> covers;  ///< per object

    const FiniteCategory& cat() const { return category; }
};

inline Sieve maximal_sieve(const FiniteCategory& C, Index c)
{
    Sieve S;
    for (Index f = 0; f < C.morphism_count(); ++f)
        if (C.target(f) == c)
            S.push_back(f);
    return S;
}

inline bool contains(const Sieve& S, Index f) { return std::binary_search(S.begin(), S.end(), f); }

inline bool is_sieve(const FiniteCategory& C, Index c, const Sieve& S)
{
    if (!std::is_sorted(S.begin(), S.end()) || std::adjacent_find(S.begin(), S.end()) != S.end())
        return false;
    for (Index f : S)
    {
        if (C.target(f) != c)
            return false;
        for (Index g = 0; g < C.morphism_count(); ++g)
            if (C.target(g) == C.source(f) && !contains(S, C.then(g, f)))
                return false;
    }
    return true;
}

/// h^*S = { g : g then h lies in S } for h: d -> c.
inline Sieve pullback_sieve(const FiniteCategory& C, const Sieve& S, Index h)
{
    Sieve R;
    for (Index g = 0; g < C.morphism_count(); ++g)
        if (C.target(g) == C.source(h) && contains(S, C.then(g, h)))
            R.push_back(g);
    return R;
}

/// Every sieve on c (subsets of the maximal sieve closed under precomposition).
inline std::vector<Sieve> all_sieves(const FiniteCategory& C, Index c)
{
    Sieve M = maximal_sieve(C, c);
    if (M.size() > 20)
        throw InvalidArgument("all_sieves: too many morphisms into one object");
    std::vector<Sieve> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << M.size()); ++mask)
    {
        Sieve S;
        for (std::size_t i = 0; i < M.size(); ++i)
            if (mask >> i & 1)
                S.push_back(M[i]);
        if (is_sieve(C, c, S))
            out.push_back(std::move(S));
    }
    return out;
}

inline std::string sieve_name(const FiniteCategory& C, const Sieve& S)
{
    std::string s = "{";
    for (std::size_t i = 0; i < S.size(); ++i)
        s += (i ? "," : "") + C.morphism(S[i]).name;
    return s + "}";
}

struct SiteFailure
{
    std::string axiom;
    std::string object;
    std::string witness;
};

struct SiteReport
{
    bool valid = true;
    std::vector<SiteFailure> failures;
};

/// Checks: covers are sieves, maximal sieves cover, stability, transitivity.
inline SiteReport validate_site(const FiniteSite& site)
{
    const FiniteCategory& C = site.category;
    SiteReport r;
    auto fail = [&](std::string axiom, Index c, std::string witness) {
        r.valid = false;
        r.failures.push_back({std::move(axiom), C.object_name(c), std::move(witness)});
    };
    if (site.covers.size() != C.object_count())
    {
        r.valid = false;
        r.failures.push_back({"shape", "", "need one list of covering sieves per object"});
        return r;
    }
    auto covers = [&](Index c, const Sieve& S) {
        return std::find(site.covers[c].begin(), site.covers[c].end(), S) != site.covers[c].end();
    };
    for (Index c = 0; c < C.object_count(); ++c)
    {
        for (const auto& S : site.covers[c])
            if (!is_sieve(C, c, S))
                fail("sieve", c, sieve_name(C, S) + " is not a sieve on " + C.object_name(c));
        if (!covers(c, maximal_sieve(C, c)))
            fail("maximal", c, "maximal sieve " + sieve_name(C, maximal_sieve(C, c)) + " does not cover");
    }
    if (!r.valid)
        return r;
    for (Index c = 0; c < C.object_count(); ++c)
        for (const auto& S : site.covers[c])
            for (Index h = 0; h < C.morphism_count(); ++h)
                if (C.target(h) == c && !covers(C.source(h), pullback_sieve(C, S, h)))
                    fail("stability", c,
                         "pullback of " + sieve_name(C, S) + " along " + C.morphism(h).name + " does not cover");
    for (Index c = 0; c < C.object_count(); ++c)
        for (const auto& R : all_sieves(C, c))
        {
            if (covers(c, R))
                continue;
            for (const auto& S : site.covers[c])
            {
                bool local = true;
                for (Index f : S)
                    local = local && covers(C.source(f), pullback_sieve(C, R, f));
                if (local)
                {
                    fail("transitivity", c,
                         sieve_name(C, R) + " is locally covering along " + sieve_name(C, S) + " but does not cover");
                    break;
                }
            }
        }
    return r;
}

/// The trivial topology: only maximal sieves cover.
inline FiniteSite trivial_site(FiniteCategory C)
{
    FiniteSite s{std::move(C), {}};
    for (Index c = 0; c < s.category.object_count(); ++c)
        s.covers.push_back({maximal_sieve(s.category, c)});
    return s;
}

/// Objects U, X with one arrow u: U -> X. With covering, {u} covers X.
inline FiniteSite sierpinski_site(bool u_covers = true)
{
    FiniteCategory C = poset_category(2, {{0, 1}}, {"U", "X"});
    FiniteSite s{C, {}};
    s.covers.push_back({maximal_sieve(C, 0)});
    s.covers.push_back({maximal_sieve(C, 1)});
    if (u_covers)
    {
        s.covers[1].push_back({C.find_morphism("U<X")});
        std::sort(s.covers[1].begin(), s.covers[1].end());
    }
    return s;
}

// ---------------------------------------------------------------------------
// Presheaves
// ---------------------------------------------------------------------------

struct SPresheaf
{
    const FiniteSite* site = nullptr;
    std::vector<SSetPtr> value;       ///< per object
    std::vector<SMap> restriction;    ///< per morphism f: d -> c, X(c) -> X(d)

    std::size_t trunc() const { return value.front()->trunc(); }

    void validate() const
    {
        const FiniteCategory& C = site->category;
        if (value.size() != C.object_count() || restriction.size() != C.morphism_count())
            throw CorruptInput("presheaf: wrong number of values or restriction maps");
        for (const auto& v : value)
            if (v->trunc() != trunc())
                throw InvalidArgument("presheaf: mixed truncation levels");
        for (Index f = 0; f < C.morphism_count(); ++f)
        {
            const SMap& r = restriction[f];
            if (!(*r.source == *value[C.target(f)]) || !(*r.target == *value[C.source(f)]))
                throw CorruptInput("presheaf: restriction along '" + C.morphism(f).name + "' has wrong endpoints");
            r.validate();
        }
        for (Index c = 0; c < C.object_count(); ++c)
            if (!(restriction[C.identity(c)].component == identity_map(value[c]).component))
                throw CorruptInput("presheaf: identity of '" + C.object_name(c) + "' does not act as identity");
        for (Index f = 0; f < C.morphism_count(); ++f)
            for (Index g = 0; g < C.morphism_count(); ++g)
                if (C.target(f) == C.source(g) &&
                    compose(restriction[f], restriction[g]).component != restriction[C.then(f, g)].component)
                    throw CorruptInput("presheaf: restriction is not functorial at (" + C.morphism(f).name + ", " +
                                       C.morphism(g).name + ")");
    }
};

/// Presheaf of sets: sets[c] element names, restrict[f][x] = X(f)(x).
inline SPresheaf set_presheaf(const FiniteSite& site, const std::vector<std::vector<std::string>>& sets,
                              const std::vector<std::vector<Index>>& restrict)
{
    SPresheaf P{&site, {}, {}};
    for (const auto& s : sets)
        P.value.push_back(share(discrete(s, 0)));
    const FiniteCategory& C = site.category;
    for (Index f = 0; f < C.morphism_count(); ++f)
        P.restriction.push_back(SMap{P.value[C.target(f)], P.value[C.source(f)], {restrict.at(f)}});
    P.validate();
    return P;
}

/// Constant presheaf with value K.
inline SPresheaf constant_presheaf(const FiniteSite& site, const SSetPtr& K)
{
    SPresheaf P{&site, std::vector<SSetPtr>(site.category.object_count(), K), {}};
    for (Index f = 0; f < site.category.morphism_count(); ++f)
        P.restriction.push_back(identity_map(K));
    P.validate();
    return P;
}

struct PresheafMap
{
    const SPresheaf* source = nullptr;
    const SPresheaf* target = nullptr;
    std::vector<SMap> component;  ///< per object

    void validate() const
    {
        const FiniteCategory& C = source->site->category;
        for (Index c = 0; c < C.object_count(); ++c)
            component[c].validate();
        for (Index f = 0; f < C.morphism_count(); ++f)
            if (compose(target->restriction[f], component[C.target(f)]).component !=
                compose(component[C.source(f)], source->restriction[f]).component)
                throw CorruptInput("presheaf map: not natural along '" + C.morphism(f).name + "'");
    }
};

// ---------------------------------------------------------------------------
// Matching families and sheafification
// ---------------------------------------------------------------------------

/// All matching families for S at level n: x_f in X(dom f)_n with X(g)(x_f) = x_{g then f}.
inline std::vector<std::vector<Index>> matching_families(const SPresheaf& X, const Sieve& S, std::size_t n)
{
    const FiniteCategory& C = X.site->category;
    std::vector<std::vector<Index>> out;
    std::vector<Index> fam(S.size(), kNone);
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == S.size())
        {
            out.push_back(fam);
            return;
        }
        Index f = S[i];
        Index d = C.source(f);
        for (Index x = 0; x < X.value[d]->size(n); ++x)
        {
            bool ok = true;
            // Compatibility with every already-chosen member related to f.
            for (std::size_t j = 0; ok && j < i; ++j)
            {
                Index h = S[j];
                for (Index g = 0; ok && g < C.morphism_count(); ++g)
                {
                    if (C.target(g) == C.source(f) && C.then(g, f) == h)
                        ok = X.restriction[g](n, x) == fam[j];
                    if (ok && C.target(g) == C.source(h) && C.then(g, h) == f)
                        ok = X.restriction[g](n, fam[j]) == x;
                }
            }
            if (!ok)
                continue;
            fam[i] = x;
            go(i + 1);
            fam[i] = kNone;
        }
    };
    go(0);
    return out;
}

/// Smallest covering sieve of c (intersection of all covers; must itself cover).
inline Sieve minimal_cover(const FiniteSite& site, Index c)
{
    Sieve m = maximal_sieve(site.category, c);
    for (const auto& S : site.covers[c])
    {
        Sieve t;
        std::set_intersection(m.begin(), m.end(), S.begin(), S.end(), std::back_inserter(t));
        m = std::move(t);
    }
    if (std::find(site.covers[c].begin(), site.covers[c].end(), m) == site.covers[c].end())
        throw InvalidArgument("minimal_cover: intersection of covers of '" + site.category.object_name(c) +
                              "' does not cover; the site is not a Grothendieck topology");
    return m;
}

/**
 * One plus construction: P+(c) = matching families on the minimal cover of c.
 * The unit sends x to (X(f)x)_f.
 */
inline SPresheaf plus_construction(const SPresheaf& X, std::vector<SMap>* unit = nullptr)
{
    const FiniteSite& site = *X.site;
    const FiniteCategory& C = site.category;
    const std::size_t N = X.trunc();
    std::vector<Sieve> cover(C.object_count());
    for (Index c = 0; c < C.object_count(); ++c)
        cover[c] = minimal_cover(site, c);
    using Fam = std::vector<Index>;
    SPresheaf P{&site, std::vector<SSetPtr>(C.object_count()), {}};
    std::vector<std::vector<std::map<Fam, Index>>> lookup(C.object_count());
    for (Index c = 0; c < C.object_count(); ++c)
    {
        const Sieve& S = cover[c];
        std::vector<std::vector<Fam>> levels(N + 1);
        for (std::size_t n = 0; n <= N; ++n)
            levels[n] = matching_families(X, S, n);
        auto apply_each = [&](const Fam& fam, auto&& op) {
            Fam out(fam.size());
            for (std::size_t i = 0; i < fam.size(); ++i)
                out[i] = op(C.source(S[i]), fam[i]);
            return out;
        };
        P.value[c] = share(build_from_keys(
            N, levels,
            [&](std::size_t n, std::size_t i, const Fam& fam) {
                return apply_each(fam, [&](Index d, Index x) { return X.value[d]->face(n, i, x); });
            },
            [&](std::size_t n, std::size_t i, const Fam& fam) {
                return apply_each(fam, [&](Index d, Index x) { return X.value[d]->degen(n, i, x); });
            },
            [&](std::size_t n, const Fam& fam) {
                std::string s = "<";
                for (std::size_t i = 0; i < fam.size(); ++i)
                    s += (i ? "," : "") + X.value[C.source(S[i])]->name(n, fam[i]);
                return s + ">";
            }));
        lookup[c].resize(N + 1);
        for (std::size_t n = 0; n <= N; ++n)
            for (Index k = 0; k < levels[n].size(); ++k)
                lookup[c][n].emplace(levels[n][k], k);
    }
    for (Index h = 0; h < C.morphism_count(); ++h)
    {
        Index c = C.target(h), d = C.source(h);
        SMap r{P.value[c], P.value[d], std::vector<std::vector<Index>>(N + 1)};
        for (std::size_t n = 0; n <= N; ++n)
        {
            // Re-enumerate the families of c in the same order they were indexed.
            auto fams = matching_families(X, cover[c], n);
            for (const auto& fam : fams)
            {
                Fam g_fam;
                for (Index g : cover[d])
                {
                    Index gh = C.then(g, h);
                    auto at = std::lower_bound(cover[c].begin(), cover[c].end(), gh);
                    if (at == cover[c].end() || *at != gh)
                        throw std::logic_error("plus_construction: restricted cover escapes the minimal cover");
                    g_fam.push_back(fam[static_cast<std::size_t>(at - cover[c].begin())]);
                }
                r.component[n].push_back(lookup[d][n].at(g_fam));
            }
        }
        P.restriction.push_back(std::move(r));
    }
    P.validate();
    if (unit)
    {
        unit->clear();
        for (Index c = 0; c < C.object_count(); ++c)
        {
            SMap u{X.value[c], P.value[c], std::vector<std::vector<Index>>(N + 1)};
            for (std::size_t n = 0; n <= N; ++n)
                for (Index x = 0; x < X.value[c]->size(n); ++x)
                {
                    Fam fam;
                    for (Index f : cover[c])
                        fam.push_back(X.restriction[f](n, x));
                    u.component[n].push_back(lookup[c][n].at(fam));
                }
            unit->push_back(std::move(u));
        }
    }
    return P;
}

struct Sheafification
{
    SPresheaf sheaf;
    std::vector<SMap> unit;  ///< per object X(c) -> X++(c)
};

/// Plus construction applied twice, with the composite unit.
inline Sheafification sheafify(const SPresheaf& X)
{
    std::vector<SMap> u1, u2;
    SPresheaf P1 = plus_construction(X, &u1);
    Sheafification S{plus_construction(P1, &u2), {}};
    for (Index c = 0; c < u1.size(); ++c)
    {
        SMap u = compose(u2[c], u1[c]);
        u.target = S.sheaf.value[c];
        S.unit.push_back(std::move(u));
    }
    return S;
}

/// Sheafification of a presheaf of sets (a presheaf truncated at 0).
inline Sheafification sheafify_set(const SPresheaf& P)
{
    if (P.trunc() != 0)
        throw InvalidArgument("sheafify_set: expects a presheaf of sets");
    return sheafify(P);
}

/// Whether every cover S of c gives a bijection X(c) -> Match(S, X), levelwise.
struct SheafCheck
{
    bool sheaf = true;
    std::string witness;
};

inline SheafCheck check_sheaf_condition(const SPresheaf& X)
{
    const FiniteCategory& C = X.site->category;
    for (Index c = 0; c < C.object_count(); ++c)
        for (const auto& S : X.site->covers[c])
            for (std::size_t n = 0; n <= X.trunc(); ++n)
            {
                auto fams = matching_families(X, S, n);
                std::map<std::vector<Index>, std::size_t> hits;
                for (Index x = 0; x < X.value[c]->size(n); ++x)
                {
                    std::vector<Index> fam;
                    for (Index f : S)
                        fam.push_back(X.restriction[f](n, x));
                    ++hits[fam];
                }
                bool bij = hits.size() == fams.size() && X.value[c]->size(n) == fams.size();
                if (!bij)
                    return {false, "object " + C.object_name(c) + ", cover " + sieve_name(C, S) + ", level " +
                                       std::to_string(n) + ": " + std::to_string(X.value[c]->size(n)) +
                                       " elements vs " + std::to_string(fams.size()) + " matching families"};
            }
    return {};
}

inline bool unit_bijective(const Sheafification& s)
{
    for (const auto& u : s.unit)
        if (!is_isomorphism(u))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Points and stalks
// ---------------------------------------------------------------------------

/// A finite cofiltered diagram in the site: a subcategory given by objects and morphisms.
struct PointDiagram
{
    std::string name;
    std::vector<Index> objects;
    std::vector<Index> morphisms;
};

/// Point through a single object c (its identity only).
inline PointDiagram point_at(const FiniteCategory& C, Index c)
{
    return PointDiagram{"at " + C.object_name(c), {c}, {C.identity(c)}};
}

struct CofilteredCheck
{
    bool ok = true;
    std::string witness;
};

inline CofilteredCheck check_cofiltered(const FiniteCategory& C, const PointDiagram& p)
{
    auto has_obj = [&](Index c) { return std::find(p.objects.begin(), p.objects.end(), c) != p.objects.end(); };
    auto has_mor = [&](Index f) { return std::find(p.morphisms.begin(), p.morphisms.end(), f) != p.morphisms.end(); };
    if (p.objects.empty())
        return {false, "diagram is empty"};
    for (Index f : p.morphisms)
        if (!has_obj(C.source(f)) || !has_obj(C.target(f)))
            return {false, "morphism " + C.morphism(f).name + " leaves the diagram"};
    for (Index c : p.objects)
        if (!has_mor(C.identity(c)))
            return {false, "identity of " + C.object_name(c) + " missing"};
    for (Index f : p.morphisms)
        for (Index g : p.morphisms)
            if (C.target(f) == C.source(g) && !has_mor(C.then(f, g)))
                return {false, "composite of " + C.morphism(f).name + " and " + C.morphism(g).name + " missing"};
    auto arrows = [&](Index a, Index b) {
        std::vector<Index> out;
        for (Index f : p.morphisms)
            if (C.source(f) == a && C.target(f) == b)
                out.push_back(f);
        return out;
    };
    for (Index i : p.objects)
        for (Index j : p.objects)
        {
            bool cone = false;
            for (Index k : p.objects)
                cone = cone || (!arrows(k, i).empty() && !arrows(k, j).empty());
            if (!cone)
                return {false, "no object maps to both " + C.object_name(i) + " and " + C.object_name(j)};
            for (Index u : arrows(i, j))
                for (Index v : arrows(i, j))
                {
                    bool eq = false;
                    for (Index w : p.morphisms)
                        eq = eq || (C.target(w) == i && C.then(w, u) == C.then(w, v));
                    if (!eq)
                        return {false, "parallel pair " + C.morphism(u).name + ", " + C.morphism(v).name +
                                           " is not equalized"};
                }
        }
    return {};
}

struct Stalk
{
    SSetPtr object;
    std::vector<std::vector<std::vector<Index>>> from;  ///< [diagram object][level][x] -> class
};

/// Levelwise colimit of X over the opposite of the diagram.
inline Stalk stalk(const SPresheaf& X, const PointDiagram& p)
{
    const FiniteCategory& C = X.site->category;
    if (auto chk = check_cofiltered(C, p); !chk.ok)
        throw InvalidArgument("stalk: point '" + p.name + "' is not cofiltered: " + chk.witness);
    const std::size_t N = X.trunc();
    std::vector<std::size_t> slot(C.object_count(), kNone);
    for (std::size_t i = 0; i < p.objects.size(); ++i)
        slot[p.objects[i]] = i;
    Stalk S;
    S.from.assign(p.objects.size(), std::vector<std::vector<Index>>(N + 1));
    std::vector<std::vector<std::pair<std::size_t, Index>>> reps(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
    {
        std::vector<std::size_t> offset(p.objects.size() + 1, 0);
        for (std::size_t i = 0; i < p.objects.size(); ++i)
            offset[i + 1] = offset[i] + X.value[p.objects[i]]->size(n);
        std::vector<std::size_t> parent(offset.back());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
            while (parent[v] != v)
                v = parent[v] = parent[parent[v]];
            return v;
        };
        for (Index f : p.morphisms)
        {
            std::size_t a = slot[C.target(f)], b = slot[C.source(f)];
            for (Index x = 0; x < X.value[C.target(f)]->size(n); ++x)
            {
                std::size_t u = root(offset[a] + x), v = root(offset[b] + X.restriction[f](n, x));
                if (u != v)
                    parent[std::max(u, v)] = std::min(u, v);
            }
        }
        std::map<std::size_t, Index> label;
        for (std::size_t i = 0; i < p.objects.size(); ++i)
            for (Index x = 0; x < X.value[p.objects[i]]->size(n); ++x)
            {
                auto [it, fresh] = label.emplace(root(offset[i] + x), static_cast<Index>(label.size()));
                if (fresh)
                    reps[n].emplace_back(i, x);
                S.from[i][n].push_back(it->second);
            }
    }
    std::vector<std::vector<Index>> levels(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
    {
        levels[n].resize(reps[n].size());
        std::iota(levels[n].begin(), levels[n].end(), 0);
    }
    S.object = share(build_from_keys(
        N, levels,
        [&](std::size_t n, std::size_t i, Index k) {
            auto [o, x] = reps[n][k];
            return S.from[o][n - 1][X.value[p.objects[o]]->face(n, i, x)];
        },
        [&](std::size_t n, std::size_t i, Index k) {
            auto [o, x] = reps[n][k];
            return S.from[o][n + 1][X.value[p.objects[o]]->degen(n, i, x)];
        },
        [&](std::size_t n, Index k) {
            auto [o, x] = reps[n][k];
            return C.object_name(p.objects[o]) + ":" + X.value[p.objects[o]]->name(n, x);
        }));
    return S;
}

/// The map on stalks induced by a presheaf map.
inline SMap stalk_map(const PresheafMap& f, const Stalk& sx, const Stalk& sy, const PointDiagram& p)
{
    const std::size_t N = sx.object->trunc();
    SMap m{sx.object, sy.object, std::vector<std::vector<Index>>(N + 1)};
    for (std::size_t n = 0; n <= N; ++n)
    {
        m.component[n].assign(sx.object->size(n), kNone);
        for (std::size_t i = 0; i < p.objects.size(); ++i)
        {
            Index c = p.objects[i];
            for (Index x = 0; x < f.source->value[c]->size(n); ++x)
            {
                Index cls = sx.from[i][n][x];
                Index img = sy.from[i][n][f.component[c](n, x)];
                if (m.component[n][cls] != kNone && m.component[n][cls] != img)
                    throw std::logic_error("stalk_map: map is not well defined on the colimit");
                m.component[n][cls] = img;
            }
        }
    }
    m.validate();
    return m;
}

/// Verdict plus the failing point or object (when any).
struct LocalVerdict
{
    Verdict verdict = Verdict::yes;
    std::string where;
    EquivalenceResult detail;
};

/**
 * Stalkwise homology-in-range test. An empty point list is not checkable.
 */
inline LocalVerdict is_local_equivalence(const PresheafMap& f, const std::vector<PointDiagram>& points,
                                         std::size_t range)
{
    if (points.empty())
        return {Verdict::not_checkable, "no points supplied", {}};
    std::vector<EquivalenceResult> res(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        auto sx = stalk(*f.source, points[i]);
        auto sy = stalk(*f.target, points[i]);
        res[i] = is_equivalence(range, stalk_map(f, sx, sy, points[i]));
    });
    for (std::size_t i = 0; i < points.size(); ++i)
        if (res[i].verdict != Verdict::yes)
            return {res[i].verdict, "point " + points[i].name, res[i]};
    return {};
}

/// Objectwise homology-in-range test.
inline LocalVerdict is_levelwise_equivalence(const PresheafMap& f, std::size_t range)
{
    const FiniteCategory& C = f.source->site->category;
    for (Index c = 0; c < C.object_count(); ++c)
    {
        auto r = is_equivalence(range, f.component[c]);
        if (r.verdict != Verdict::yes)
            return {r.verdict, "object " + C.object_name(c), r};
    }
    return {};
}

/// Judge a presheaf map with any spec name (h-range means levelwise here).
inline LocalVerdict is_equivalence(const LocalizationSpec& spec, const PresheafMap& f,
                                   const std::vector<PointDiagram>& points)
{
    if (spec.kind == SpecKind::stalkwise_h_range)
        return is_local_equivalence(f, points, spec.range);
    return is_levelwise_equivalence(f, spec.range);
}

/// Local (trivial) fibration, approximated on the supplied stalks.
inline FibrationVerdict check_fibration(const PresheafMap& f, FibrationKind kind, std::size_t n_max,
                                        const std::vector<PointDiagram>& points)
{
    FibrationVerdict out;
    out.kind = kind;
    out.n_max = n_max;
    if (points.empty())
    {
        out.result = Verdict::not_checkable;
        out.detail = "no points supplied";
        return out;
    }
    for (const auto& p : points)
    {
        auto sx = stalk(*f.source, p);
        auto sy = stalk(*f.target, p);
        auto v = check_fibration(stalk_map(f, sx, sy, p), kind, n_max);
        for (auto& row : v.table)
            out.table.push_back(row);
        if (v.result != Verdict::yes)
        {
            v.detail = "point " + p.name + (v.detail.empty() ? "" : ": " + v.detail);
            v.table = out.table;
            return v;
        }
    }
    return out;
}

}  // namespace hfib
