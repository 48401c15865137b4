/**
 * Truncated simplicial sets with explicit face and degeneracy tables.
 *
 * A TruncatedSSet stores every simplex (degenerate ones included) up to a
 * fixed dimension N together with all operators d_i and s_i between the
 * stored levels. Maps, finite limits, sequential colimits, Eilenberg-Zilber
 * normalization and the enumeration of maps out of finite objects all work
 * levelwise on these tables.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace hfib {

using Index = std::uint32_t;
inline constexpr Index kNone = static_cast<Index>(-1);

/// A nondecreasing map [m] -> [n], stored as its values a_0 <= ... <= a_m.
using Monotone = std::vector<int>;

struct SimplexAddress
{
    std::size_t level = 0;
    Index index = 0;

    auto operator<=>(const SimplexAddress&) const = default;
};

class TruncatedSSet
{
public:
    TruncatedSSet() = default;

    /**
     * Build from explicit tables. faces[n] has (n+1)*size(n) entries laid out
     * as faces[n][i*size(n)+x] (faces[0] is empty); degens[n] has
     * (n+1)*size(n) entries for n < trunc (degens[trunc] is empty).
     * Throws CorruptInput if a simplicial identity fails.
     */
    TruncatedSSet(std::size_t trunc, std::vector<std::vector<std::string>> names,
                  std::vector<std::vector<Index>> faces, std::vector<std::vector<Index>> degens)
        : trunc_(trunc), names_(std::move(names)), faces_(std::move(faces)), degens_(std::move(degens))
    {
        check_shapes();
        validate();
    }

    std::size_t trunc() const { return trunc_; }
    std::size_t size(std::size_t level) const { return names_.at(level).size(); }

    Index face(std::size_t level, std::size_t i, Index x) const
    {
        return faces_[level][i * names_[level].size() + x];
    }
    Index degen(std::size_t level, std::size_t i, Index x) const
    {
        return degens_[level][i * names_[level].size() + x];
    }
    const std::string& name(std::size_t level, Index x) const { return names_[level][x]; }

    const std::vector<std::vector<std::string>>& names() const { return names_; }
    const std::vector<std::vector<Index>>& face_tables() const { return faces_; }
    const std::vector<std::vector<Index>>& degen_tables() const { return degens_; }

    std::size_t total_size() const
    {
        std::size_t s = 0;
        for (const auto& l : names_)
            s += l.size();
        return s;
    }

    bool operator==(const TruncatedSSet&) const = default;

    /// Exhaustive check of all simplicial identities between stored levels.
    void validate() const
    {
        auto fail = [](const std::string& what, std::size_t n, Index x) {
            std::ostringstream os;
            os << "simplicial identity violated: " << what << " at level " << n << ", simplex " << x;
            throw CorruptInput(os.str());
        };
        for (std::size_t n = 2; n <= trunc_; ++n)
            for (Index x = 0; x < size(n); ++x)
                for (std::size_t j = 1; j <= n; ++j)
                    for (std::size_t i = 0; i < j; ++i)
                        if (face(n - 1, i, face(n, j, x)) != face(n - 1, j - 1, face(n, i, x)))
                            fail("d_i d_j = d_{j-1} d_i", n, x);
        for (std::size_t n = 0; n < trunc_; ++n)
        {
            for (Index x = 0; x < size(n); ++x)
            {
                for (std::size_t j = 0; j <= n; ++j)
                {
                    Index y = degen(n, j, x);
                    if (face(n + 1, j, y) != x || face(n + 1, j + 1, y) != x)
                        fail("d_j s_j = d_{j+1} s_j = id", n, x);
                    if (n >= 1)
                    {
                        for (std::size_t i = 0; i < j; ++i)
                            if (face(n + 1, i, y) != degen(n - 1, j - 1, face(n, i, x)))
                                fail("d_i s_j = s_{j-1} d_i", n, x);
                        for (std::size_t i = j + 2; i <= n + 1; ++i)
                            if (face(n + 1, i, y) != degen(n - 1, j, face(n, i - 1, x)))
                                fail("d_i s_j = s_j d_{i-1}", n, x);
                    }
                    if (n + 2 <= trunc_)
                        for (std::size_t i = 0; i <= j; ++i)
                            if (degen(n + 1, i, y) != degen(n + 1, j + 1, degen(n, i, x)))
                                fail("s_i s_j = s_{j+1} s_i", n, x);
                }
            }
        }
    }

private:
    void check_shapes() const
    {
        if (names_.size() != trunc_ + 1 || faces_.size() != trunc_ + 1 || degens_.size() != trunc_ + 1)
            throw InvalidArgument("simplicial set tables must have trunc+1 levels");
        for (std::size_t n = 0; n <= trunc_; ++n)
        {
            std::size_t sz = names_[n].size();
            std::size_t want_faces = n == 0 ? 0 : (n + 1) * sz;
            std::size_t want_degens = n == trunc_ ? 0 : (n + 1) * sz;
            if (faces_[n].size() != want_faces || degens_[n].size() != want_degens)
                throw CorruptInput("operator table of wrong size at level " + std::to_string(n));
            if (n > 0)
                for (Index v : faces_[n])
                    if (v >= names_[n - 1].size())
                        throw CorruptInput("dangling face operator at level " + std::to_string(n));
            if (n < trunc_)
                for (Index v : degens_[n])
                    if (v >= names_[n + 1].size())
                        throw CorruptInput("dangling degeneracy operator at level " + std::to_string(n));
        }
    }

    std::size_t trunc_ = 0;
    std::vector<std::vector<std::string>> names_;
    std::vector<std::vector<Index>> faces_;
    std::vector<std::vector<Index>> degens_;
};

using SSetPtr = std::shared_ptr<const TruncatedSSet>;

inline SSetPtr share(TruncatedSSet x) { return std::make_shared<const TruncatedSSet>(std::move(x)); }

/**
 * Build a simplicial set whose simplices are described by ordered keys.
 * face(n, i, key) returns the key of d_i at level n-1 and degen(n, i, key)
 * the key of s_i at level n+1; both must land in the listed keys.
 */
template <class Key, class FaceFn, class DegenFn, class NameFn>
TruncatedSSet build_from_keys(std::size_t trunc, const std::vector<std::vector<Key>>& levels, FaceFn&& face,
                              DegenFn&& degen, NameFn&& name)
{
    if (levels.size() != trunc + 1)
        throw InvalidArgument("build_from_keys: need trunc+1 levels");
    std::vector<std::map<Key, Index>> lookup(trunc + 1);
    for (std::size_t n = 0; n <= trunc; ++n)
        for (std::size_t x = 0; x < levels[n].size(); ++x)
            if (!lookup[n].emplace(levels[n][x], static_cast<Index>(x)).second)
                throw CorruptInput("build_from_keys: duplicate key at level " + std::to_string(n));
    auto find = [&](std::size_t n, const Key& k) {
        auto it = lookup[n].find(k);
        if (it == lookup[n].end())
            throw CorruptInput("build_from_keys: operator leaves the listed simplices at level " +
                               std::to_string(n));
        return it->second;
    };
    std::vector<std::vector<std::string>> names(trunc + 1);
    std::vector<std::vector<Index>> faces(trunc + 1), degens(trunc + 1);
    for (std::size_t n = 0; n <= trunc; ++n)
    {
        std::size_t sz = levels[n].size();
        names[n].reserve(sz);
        for (const auto& k : levels[n])
            names[n].push_back(name(n, k));
        if (n > 0)
        {
            faces[n].resize((n + 1) * sz);
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t x = 0; x < sz; ++x)
                    faces[n][i * sz + x] = find(n - 1, face(n, i, levels[n][x]));
        }
        if (n < trunc)
        {
            degens[n].resize((n + 1) * sz);
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t x = 0; x < sz; ++x)
                    degens[n][i * sz + x] = find(n + 1, degen(n, i, levels[n][x]));
        }
    }
    return TruncatedSSet(trunc, std::move(names), std::move(faces), std::move(degens));
}

/// A simplicial map, stored levelwise.
struct SMap
{
    SSetPtr source;
    SSetPtr target;
    std::vector<std::vector<Index>> component;

    Index operator()(std::size_t level, Index x) const { return component[level][x]; }

    /// Throws CorruptInput unless the map commutes with every operator.
    void validate() const
    {
        const auto& X = *source;
        const auto& Y = *target;
        if (X.trunc() != Y.trunc() || component.size() != X.trunc() + 1)
            throw InvalidArgument("SMap: truncation mismatch");
        for (std::size_t n = 0; n <= X.trunc(); ++n)
        {
            if (component[n].size() != X.size(n))
                throw CorruptInput("SMap: component of wrong size at level " + std::to_string(n));
            for (Index x = 0; x < X.size(n); ++x)
            {
                Index fx = component[n][x];
                if (fx >= Y.size(n))
                    throw CorruptInput("SMap: value out of range");
                if (n > 0)
                    for (std::size_t i = 0; i <= n; ++i)
                        if (component[n - 1][X.face(n, i, x)] != Y.face(n, i, fx))
                            throw CorruptInput("SMap: does not commute with d_" + std::to_string(i) +
                                               " at level " + std::to_string(n));
                if (n < X.trunc())
                    for (std::size_t i = 0; i <= n; ++i)
                        if (component[n + 1][X.degen(n, i, x)] != Y.degen(n, i, fx))
                            throw CorruptInput("SMap: does not commute with s_" + std::to_string(i) +
                                               " at level " + std::to_string(n));
            }
        }
    }
};

inline SMap identity_map(const SSetPtr& X)
{
    SMap f{X, X, {}};
    f.component.resize(X->trunc() + 1);
    for (std::size_t n = 0; n <= X->trunc(); ++n)
    {
        f.component[n].resize(X->size(n));
        std::iota(f.component[n].begin(), f.component[n].end(), Index{0});
    }
    return f;
}

/// g after f.
inline SMap compose(const SMap& g, const SMap& f)
{
    if (f.target != g.source && !(*f.target == *g.source))
        throw InvalidArgument("compose: maps are not composable");
    SMap h{f.source, g.target, f.component};
    for (std::size_t n = 0; n < h.component.size(); ++n)
        for (auto& v : h.component[n])
            v = g.component[n][v];
    return h;
}

/// Levelwise bijective simplicial map.
inline bool is_isomorphism(const SMap& f)
{
    for (std::size_t n = 0; n < f.component.size(); ++n)
    {
        if (f.source->size(n) != f.target->size(n))
            return false;
        std::vector<char> hit(f.target->size(n), 0);
        for (Index v : f.component[n])
        {
            if (hit[v])
                return false;
            hit[v] = 1;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Standard objects
// ---------------------------------------------------------------------------

enum class StandardKind
{
    simplex,
    boundary,
    horn
};

namespace detail {

inline void monotone_maps(int m, int n, Monotone& cur, std::vector<Monotone>& out)
{
    if (static_cast<int>(cur.size()) == m + 1)
    {
        out.push_back(cur);
        return;
    }
    int lo = cur.empty() ? 0 : cur.back();
    for (int v = lo; v <= n; ++v)
    {
        cur.push_back(v);
        monotone_maps(m, n, cur, out);
        cur.pop_back();
    }
}

inline std::string monotone_name(const Monotone& a)
{
    std::string s;
    bool wide = !a.empty() && a.back() >= 10;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        if (wide && i > 0)
            s += '.';
        s += std::to_string(a[i]);
    }
    return s;
}

inline Monotone drop(const Monotone& a, std::size_t i)
{
    Monotone b = a;
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(i));
    return b;
}

inline Monotone repeat(const Monotone& a, std::size_t i)
{
    Monotone b = a;
    b.insert(b.begin() + static_cast<std::ptrdiff_t>(i), a[i]);
    return b;
}

}  // namespace detail

/// All nondecreasing maps [m] -> [n] in lexicographic order.
inline std::vector<Monotone> monotone_maps(int m, int n)
{
    std::vector<Monotone> out;
    Monotone cur;
    if (m >= 0 && n >= 0)
        detail::monotone_maps(m, n, cur, out);
    return out;
}

/**
 * Truncation at N of Delta[n], its boundary, or the horn Lambda^k[n].
 * Simplices at level m are the nondecreasing sequences of length m+1 in [n]
 * whose image is allowed by the kind.
 */
inline TruncatedSSet build_standard(StandardKind kind, std::size_t n, std::optional<std::size_t> k, std::size_t N)
{
    if (n > N)
        throw InvalidArgument("build_standard: n exceeds truncation");
    if (kind == StandardKind::horn && (!k || *k > n))
        throw InvalidArgument("build_standard: horn index k must satisfy 0 <= k <= n");
    if (kind == StandardKind::horn && n == 0)
        throw InvalidArgument("build_standard: horns need n >= 1");
    auto allowed = [&](const Monotone& a) {
        std::vector<char> hit(n + 1, 0);
        for (int v : a)
            hit[v] = 1;
        if (kind == StandardKind::boundary)
            return std::find(hit.begin(), hit.end(), 0) != hit.end();
        if (kind == StandardKind::horn)
        {
            hit[*k] = 1;
            return std::find(hit.begin(), hit.end(), 0) != hit.end();
        }
        return true;
    };
    std::vector<std::vector<Monotone>> levels(N + 1);
    for (std::size_t m = 0; m <= N; ++m)
        for (auto& a : monotone_maps(static_cast<int>(m), static_cast<int>(n)))
            if (allowed(a))
                levels[m].push_back(std::move(a));
    return build_from_keys(
        N, levels, [](std::size_t, std::size_t i, const Monotone& a) { return detail::drop(a, i); },
        [](std::size_t, std::size_t i, const Monotone& a) { return detail::repeat(a, i); },
        [](std::size_t, const Monotone& a) { return detail::monotone_name(a); });
}

inline TruncatedSSet standard_simplex(std::size_t n, std::size_t N) { return build_standard(StandardKind::simplex, n, {}, N); }
inline TruncatedSSet point(std::size_t N) { return standard_simplex(0, N); }

/// Discrete simplicial set: every simplex above level 0 is degenerate.
inline TruncatedSSet discrete(const std::vector<std::string>& elements, std::size_t N)
{
    std::vector<std::vector<std::string>> names(N + 1, elements);
    std::vector<std::vector<Index>> faces(N + 1), degens(N + 1);
    std::size_t sz = elements.size();
    for (std::size_t n = 0; n <= N; ++n)
    {
        if (n > 0)
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t x = 0; x < sz; ++x)
                    faces[n].push_back(static_cast<Index>(x));
        if (n < N)
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t x = 0; x < sz; ++x)
                    degens[n].push_back(static_cast<Index>(x));
    }
    return TruncatedSSet(N, std::move(names), std::move(faces), std::move(degens));
}

/// The unique map to a terminal object with the same truncation.
inline SMap map_to_point(const SSetPtr& X, const SSetPtr& pt)
{
    SMap f{X, pt, {}};
    f.component.resize(X->trunc() + 1);
    for (std::size_t n = 0; n <= X->trunc(); ++n)
        f.component[n].assign(X->size(n), 0);
    return f;
}

// ---------------------------------------------------------------------------
// Operators, Eilenberg-Zilber normalization
// ---------------------------------------------------------------------------

inline bool is_degenerate(const TruncatedSSet& X, std::size_t level, Index x)
{
    if (level == 0)
        return false;
    for (std::size_t j = 0; j < level; ++j)
        if (X.degen(level - 1, j, X.face(level, j, x)) == x)
            return true;
    return false;
}

inline std::vector<Index> nondegenerate(const TruncatedSSet& X, std::size_t level)
{
    std::vector<Index> out;
    for (Index x = 0; x < X.size(level); ++x)
        if (!is_degenerate(X, level, x))
            out.push_back(x);
    return out;
}

/// Decomposition x = s_{w_1} ... s_{w_k} base with w_1 > ... > w_k and base nondegenerate.
struct EZDecomposition
{
    Index base = 0;
    std::size_t base_level = 0;
    std::vector<int> word;

    bool operator==(const EZDecomposition&) const = default;
};

/// Apply s_{w_1} ... s_{w_k} (rightmost first) to a simplex at the given level.
inline Index apply_degeneracies(const TruncatedSSet& X, std::size_t level, Index x, const std::vector<int>& word)
{
    for (auto it = word.rbegin(); it != word.rend(); ++it)
    {
        if (level >= X.trunc())
            throw IncompleteAtTruncation("degeneracy word leaves the truncation");
        x = X.degen(level, static_cast<std::size_t>(*it), x);
        ++level;
    }
    return x;
}

inline EZDecomposition ez_decompose(const TruncatedSSet& X, std::size_t level, Index x)
{
    EZDecomposition d{x, level, {}};
    for (std::size_t j = level; j-- > 0;)
    {
        Index f = X.face(d.base_level, j, d.base);
        if (X.degen(d.base_level - 1, j, f) == d.base)
        {
            d.word.push_back(static_cast<int>(j));
            d.base = f;
            --d.base_level;
        }
    }
    if (is_degenerate(X, d.base_level, d.base) || apply_degeneracies(X, d.base_level, d.base, d.word) != x)
        throw CorruptInput("Eilenberg-Zilber decomposition is not unique at level " + std::to_string(level));
    return d;
}

/// ez_normalize: the decomposition of every simplex, per level.
inline std::vector<std::vector<EZDecomposition>> ez_normalize(const TruncatedSSet& X)
{
    std::vector<std::vector<EZDecomposition>> out(X.trunc() + 1);
    for (std::size_t n = 0; n <= X.trunc(); ++n)
    {
        out[n].reserve(X.size(n));
        for (Index x = 0; x < X.size(n); ++x)
            out[n].push_back(ez_decompose(X, n, x));
    }
    return out;
}

/// alpha^*(x) for a nondecreasing alpha: [m] -> [n] and x at level n.
inline Index apply_operator(const TruncatedSSet& X, std::size_t n, Index x, const Monotone& alpha)
{
    if (alpha.empty())
        throw InvalidArgument("apply_operator: empty operator");
    for (std::size_t p = 0; p < alpha.size(); ++p)
        if (alpha[p] < 0 || alpha[p] > static_cast<int>(n) || (p > 0 && alpha[p] < alpha[p - 1]))
            throw InvalidArgument("apply_operator: operator is not a monotone map into [n]");
    std::vector<char> hit(n + 1, 0);
    for (int v : alpha)
        hit[v] = 1;
    std::size_t level = n;
    for (std::size_t j = n + 1; j-- > 0;)
        if (!hit[j])
            x = X.face(level--, j, x);
    for (std::size_t p = 0; p + 1 < alpha.size(); ++p)
    {
        if (alpha[p] == alpha[p + 1])
        {
            if (level >= X.trunc())
                throw IncompleteAtTruncation("apply_operator: target level above truncation");
            x = X.degen(level++, p, x);
        }
    }
    return x;
}

/// The map Delta[n] -> X classifying the n-simplex x (Yoneda).
inline SMap yoneda_map(const SSetPtr& simplex, const SSetPtr& X, std::size_t n, Index x)
{
    if (simplex->trunc() != X->trunc())
        throw InvalidArgument("yoneda_map: truncation mismatch");
    SMap f{simplex, X, {}};
    f.component.resize(X->trunc() + 1);
    for (std::size_t m = 0; m <= X->trunc(); ++m)
    {
        auto maps = monotone_maps(static_cast<int>(m), static_cast<int>(n));
        if (maps.size() != simplex->size(m))
            throw InvalidArgument("yoneda_map: source is not Delta[n]");
        for (const auto& a : maps)
            f.component[m].push_back(apply_operator(*X, n, x, a));
    }
    return f;
}

// ---------------------------------------------------------------------------
// Finite limits and colimits
// ---------------------------------------------------------------------------

/// Result of a binary limit: the object, its two projections, and a lookup
/// from pairs of simplices to the index of the pair (kNone when absent).
struct PairObject
{
    SSetPtr object;
    SMap first;
    SMap second;
    std::vector<std::vector<std::pair<Index, Index>>> pairs;
    std::vector<std::unordered_map<std::uint64_t, Index>> lookup;

    Index find(std::size_t level, Index a, Index b) const
    {
        auto it = lookup[level].find((std::uint64_t{a} << 32) | b);
        return it == lookup[level].end() ? kNone : it->second;
    }
};

namespace detail {

inline PairObject pair_object(const SSetPtr& X, const SSetPtr& Y,
                              std::vector<std::vector<std::pair<Index, Index>>> pairs)
{
    std::size_t N = X->trunc();
    PairObject P;
    P.pairs = std::move(pairs);
    P.lookup.resize(N + 1);
    std::vector<std::vector<std::string>> names(N + 1);
    std::vector<std::vector<Index>> faces(N + 1), degens(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
    {
        P.lookup[n].reserve(P.pairs[n].size());
        for (std::size_t k = 0; k < P.pairs[n].size(); ++k)
        {
            auto [a, b] = P.pairs[n][k];
            P.lookup[n].emplace((std::uint64_t{a} << 32) | b, static_cast<Index>(k));
            names[n].push_back("(" + X->name(n, a) + "," + Y->name(n, b) + ")");
        }
    }
    for (std::size_t n = 0; n <= N; ++n)
    {
        std::size_t sz = P.pairs[n].size();
        auto locate = [&](std::size_t lvl, Index a, Index b) {
            Index k = P.find(lvl, a, b);
            if (k == kNone)
                throw CorruptInput("limit is not closed under operators");
            return k;
        };
        if (n > 0)
        {
            faces[n].resize((n + 1) * sz);
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t k = 0; k < sz; ++k)
                {
                    auto [a, b] = P.pairs[n][k];
                    faces[n][i * sz + k] = locate(n - 1, X->face(n, i, a), Y->face(n, i, b));
                }
        }
        if (n < N)
        {
            degens[n].resize((n + 1) * sz);
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t k = 0; k < sz; ++k)
                {
                    auto [a, b] = P.pairs[n][k];
                    degens[n][i * sz + k] = locate(n + 1, X->degen(n, i, a), Y->degen(n, i, b));
                }
        }
    }
    P.object = share(TruncatedSSet(N, std::move(names), std::move(faces), std::move(degens)));
    P.first = SMap{P.object, X, {}};
    P.second = SMap{P.object, Y, {}};
    P.first.component.resize(N + 1);
    P.second.component.resize(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
        for (auto [a, b] : P.pairs[n])
        {
            P.first.component[n].push_back(a);
            P.second.component[n].push_back(b);
        }
    return P;
}

}  // namespace detail

/// Levelwise product X x Y with its projections.
inline PairObject product(const SSetPtr& X, const SSetPtr& Y)
{
    if (X->trunc() != Y->trunc())
        throw InvalidArgument("product: mismatched truncation levels");
    std::vector<std::vector<std::pair<Index, Index>>> pairs(X->trunc() + 1);
    for (std::size_t n = 0; n <= X->trunc(); ++n)
        for (Index a = 0; a < X->size(n); ++a)
            for (Index b = 0; b < Y->size(n); ++b)
                pairs[n].emplace_back(a, b);
    return detail::pair_object(X, Y, std::move(pairs));
}

/// Fiber product X x_Z Y of f: X -> Z and g: Y -> Z.
inline PairObject pullback(const SMap& f, const SMap& g)
{
    if (f.target != g.target && !(*f.target == *g.target))
        throw InvalidArgument("pullback: maps have different codomains");
    if (f.source->trunc() != g.source->trunc())
        throw InvalidArgument("pullback: mismatched truncation levels");
    std::size_t N = f.source->trunc();
    std::vector<std::vector<std::pair<Index, Index>>> pairs(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
    {
        std::unordered_map<Index, std::vector<Index>> by_image;
        for (Index b = 0; b < g.source->size(n); ++b)
            by_image[g.component[n][b]].push_back(b);
        for (Index a = 0; a < f.source->size(n); ++a)
        {
            auto it = by_image.find(f.component[n][a]);
            if (it != by_image.end())
                for (Index b : it->second)
                    pairs[n].emplace_back(a, b);
        }
    }
    return detail::pair_object(f.source, g.source, std::move(pairs));
}

/// The map W -> P induced by u: W -> X and v: W -> Y into a product or pullback P.
inline SMap pairing(const PairObject& P, const SMap& u, const SMap& v)
{
    SMap h{u.source, P.object, {}};
    h.component.resize(u.component.size());
    for (std::size_t n = 0; n < u.component.size(); ++n)
        for (std::size_t w = 0; w < u.component[n].size(); ++w)
        {
            Index k = P.find(n, u.component[n][w], v.component[n][w]);
            if (k == kNone)
                throw InvalidArgument("pairing: the cone does not commute");
            h.component[n].push_back(k);
        }
    return h;
}

/// Coproduct of a family with its inclusions; simplices are named "i:name".
struct CoproductObject
{
    SSetPtr object;
    std::vector<SMap> inclusions;
    std::vector<std::vector<std::pair<Index, Index>>> origin;  ///< per level: (summand, simplex)
};

inline CoproductObject coproduct(const std::vector<SSetPtr>& parts, std::size_t N,
                                 const std::vector<std::string>& labels = {})
{
    CoproductObject C;
    C.origin.resize(N + 1);
    std::vector<std::vector<Index>> offset(parts.size(), std::vector<Index>(N + 1));
    std::vector<std::vector<std::string>> names(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
    {
        Index off = 0;
        for (std::size_t p = 0; p < parts.size(); ++p)
        {
            if (parts[p]->trunc() != N)
                throw InvalidArgument("coproduct: mismatched truncation levels");
            offset[p][n] = off;
            for (Index x = 0; x < parts[p]->size(n); ++x)
            {
                C.origin[n].emplace_back(static_cast<Index>(p), x);
                std::string label = p < labels.size() ? labels[p] : std::to_string(p);
                names[n].push_back(label + ":" + parts[p]->name(n, x));
            }
            off += static_cast<Index>(parts[p]->size(n));
        }
    }
    std::vector<std::vector<Index>> faces(N + 1), degens(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
    {
        std::size_t sz = C.origin[n].size();
        if (n > 0)
        {
            faces[n].resize((n + 1) * sz);
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t k = 0; k < sz; ++k)
                {
                    auto [p, x] = C.origin[n][k];
                    faces[n][i * sz + k] = offset[p][n - 1] + parts[p]->face(n, i, x);
                }
        }
        if (n < N)
        {
            degens[n].resize((n + 1) * sz);
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t k = 0; k < sz; ++k)
                {
                    auto [p, x] = C.origin[n][k];
                    degens[n][i * sz + k] = offset[p][n + 1] + parts[p]->degen(n, i, x);
                }
        }
    }
    C.object = share(TruncatedSSet(N, std::move(names), std::move(faces), std::move(degens)));
    for (std::size_t p = 0; p < parts.size(); ++p)
    {
        SMap inc{parts[p], C.object, {}};
        inc.component.resize(N + 1);
        for (std::size_t n = 0; n <= N; ++n)
            for (Index x = 0; x < parts[p]->size(n); ++x)
                inc.component[n].push_back(offset[p][n] + x);
        C.inclusions.push_back(std::move(inc));
    }
    return C;
}

/// Sub-simplicial set of the simplices satisfying keep(level, x), with its inclusion.
struct SubObject
{
    SSetPtr object;
    SMap inclusion;
    std::vector<std::vector<Index>> position;  ///< ambient simplex -> sub index or kNone
};

template <class Keep>
SubObject sub_object(const SSetPtr& X, Keep&& keep)
{
    std::size_t N = X->trunc();
    SubObject S;
    S.position.resize(N + 1);
    std::vector<std::vector<Index>> members(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
    {
        S.position[n].assign(X->size(n), kNone);
        for (Index x = 0; x < X->size(n); ++x)
            if (keep(n, x))
            {
                S.position[n][x] = static_cast<Index>(members[n].size());
                members[n].push_back(x);
            }
    }
    std::vector<std::vector<std::string>> names(N + 1);
    std::vector<std::vector<Index>> faces(N + 1), degens(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
    {
        std::size_t sz = members[n].size();
        for (Index x : members[n])
            names[n].push_back(X->name(n, x));
        auto at = [&](std::size_t lvl, Index y) {
            if (S.position[lvl][y] == kNone)
                throw CorruptInput("sub_object: selection is not closed under operators");
            return S.position[lvl][y];
        };
        if (n > 0)
        {
            faces[n].resize((n + 1) * sz);
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t k = 0; k < sz; ++k)
                    faces[n][i * sz + k] = at(n - 1, X->face(n, i, members[n][k]));
        }
        if (n < N)
        {
            degens[n].resize((n + 1) * sz);
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t k = 0; k < sz; ++k)
                    degens[n][i * sz + k] = at(n + 1, X->degen(n, i, members[n][k]));
        }
    }
    S.object = share(TruncatedSSet(N, std::move(names), std::move(faces), std::move(degens)));
    S.inclusion = SMap{S.object, X, members};
    return S;
}

/// Restrict f along a sub-object inclusion of its source: f o inc.
inline SMap restrict_map(const SMap& f, const SubObject& sub) { return compose(f, sub.inclusion); }

/// Factor f through a sub-object of its target that contains its image.
inline SMap corestrict_map(const SMap& f, const SubObject& sub)
{
    SMap g{f.source, sub.object, f.component};
    for (std::size_t n = 0; n < g.component.size(); ++n)
        for (auto& v : g.component[n])
        {
            v = sub.position[n][v];
            if (v == kNone)
                throw InvalidArgument("corestrict_map: image leaves the sub-object");
        }
    return g;
}

/// Strict colimit of the first `stages` objects of a sequence A_0 -> A_1 -> ...
struct SequenceColimit
{
    SSetPtr object;                      ///< A_{stages-1}
    std::vector<SMap> inclusions;        ///< A_j -> object
    std::vector<bool> stabilized;        ///< per level: the last transition is bijective
    std::vector<std::size_t> stable_from;  ///< per level: first j with all later maps bijective
};

inline SequenceColimit colimit_sequence(const std::vector<SMap>& maps, std::size_t stages)
{
    if (stages == 0 || stages > maps.size() + 1)
        throw InvalidArgument("colimit_sequence: stage count out of range");
    for (std::size_t j = 0; j + 1 < stages && j + 1 < maps.size(); ++j)
        if (maps[j].target != maps[j + 1].source && !(*maps[j].target == *maps[j + 1].source))
            throw InvalidArgument("colimit_sequence: maps are not composable at stage " + std::to_string(j));
    SequenceColimit C;
    C.object = stages == 1 ? maps.front().source : maps[stages - 2].target;
    std::size_t N = C.object->trunc();
    C.inclusions.resize(stages);
    C.inclusions[stages - 1] = identity_map(C.object);
    for (std::size_t j = stages - 1; j-- > 0;)
        C.inclusions[j] = compose(C.inclusions[j + 1], maps[j]);
    C.stabilized.assign(N + 1, false);
    C.stable_from.assign(N + 1, stages - 1);
    for (std::size_t n = 0; n <= N; ++n)
    {
        std::size_t from = stages - 1;
        for (std::size_t j = stages - 1; j-- > 0;)
        {
            const SMap& m = maps[j];
            std::vector<char> hit(m.target->size(n), 0);
            bool bij = m.source->size(n) == m.target->size(n);
            for (Index v : m.component[n])
            {
                if (hit[v])
                    bij = false;
                hit[v] = 1;
            }
            if (!bij)
                break;
            from = j;
        }
        C.stable_from[n] = from;
        C.stabilized[n] = from < stages - 1;
    }
    return C;
}

/// Connected components: class id per vertex.
struct Components
{
    std::size_t count = 0;
    std::vector<Index> of_vertex;
};

inline Components pi0(const TruncatedSSet& X)
{
    if (X.trunc() < 1)
        throw InvalidArgument("pi0: needs truncation level >= 1");
    std::vector<Index> parent(X.size(0));
    std::iota(parent.begin(), parent.end(), Index{0});
    std::function<Index(Index)> root = [&](Index v) {
        while (parent[v] != v)
            v = parent[v] = parent[parent[v]];
        return v;
    };
    for (Index e = 0; e < X.size(1); ++e)
    {
        Index a = root(X.face(1, 0, e)), b = root(X.face(1, 1, e));
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
    Components c;
    c.of_vertex.resize(X.size(0));
    std::map<Index, Index> label;
    for (Index v = 0; v < X.size(0); ++v)
    {
        Index r = root(v);
        auto [it, fresh] = label.emplace(r, static_cast<Index>(label.size()));
        c.of_vertex[v] = it->second;
    }
    c.count = label.size();
    return c;
}

/// Vertex of a simplex (the image of the i-th vertex of Delta[n]).
inline Index vertex_of(const TruncatedSSet& X, std::size_t level, Index x, int i)
{
    return apply_operator(X, level, x, Monotone{i});
}

/// The sub-simplicial set of one connected component.
inline SubObject component(const SSetPtr& X, const Components& c, Index which)
{
    return sub_object(X, [&](std::size_t n, Index x) { return c.of_vertex[vertex_of(*X, n, x, 0)] == which; });
}

// ---------------------------------------------------------------------------
// Maps out of finite objects
// ---------------------------------------------------------------------------

struct SimplexMaps
{
    bool complete = true;  ///< false when the source has simplices above the truncation
    std::vector<SMap> maps;
};

/**
 * All simplicial maps K -> Y, found by assigning images to nondegenerate
 * simplices of K in order of dimension. declared_dim is the dimension of the
 * untruncated K when known; when it exceeds the truncation the enumeration is
 * flagged incomplete (maps may fail to extend).
 */
inline SimplexMaps simplex_maps(const SSetPtr& K, const SSetPtr& Y, std::optional<std::size_t> declared_dim = {})
{
    if (K->trunc() != Y->trunc())
        throw InvalidArgument("simplex_maps: mismatched truncation levels");
    std::size_t N = K->trunc();
    auto ez = ez_normalize(*K);
    std::vector<SimplexAddress> cells;
    std::size_t observed = 0;
    for (std::size_t n = 0; n <= N; ++n)
        for (Index x : nondegenerate(*K, n))
        {
            cells.push_back({n, x});
            observed = n;
        }
    SimplexMaps result;
    result.complete = declared_dim.value_or(observed) <= N;

    std::map<SimplexAddress, Index> image;
    auto image_of = [&](std::size_t n, Index x) {
        const auto& d = ez[n][x];
        return apply_degeneracies(*Y, d.base_level, image.at({d.base_level, d.base}), d.word);
    };
    std::function<void(std::size_t)> search = [&](std::size_t c) {
        if (c == cells.size())
        {
            SMap f{K, Y, {}};
            f.component.resize(N + 1);
            for (std::size_t n = 0; n <= N; ++n)
                for (Index x = 0; x < K->size(n); ++x)
                    f.component[n].push_back(image_of(n, x));
            result.maps.push_back(std::move(f));
            return;
        }
        auto [n, x] = cells[c];
        std::vector<Index> want;
        for (std::size_t i = 0; n > 0 && i <= n; ++i)
            want.push_back(image_of(n - 1, K->face(n, i, x)));
        for (Index y = 0; y < Y->size(n); ++y)
        {
            bool ok = true;
            for (std::size_t i = 0; ok && i < want.size(); ++i)
                ok = Y->face(n, i, y) == want[i];
            if (!ok)
                continue;
            image[{n, x}] = y;
            search(c + 1);
            image.erase({n, x});
        }
    };
    search(0);
    return result;
}

}  // namespace hfib
