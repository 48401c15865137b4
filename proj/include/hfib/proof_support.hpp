/**
 * Explicit bisimplicial objects from the proof of the main comparison theorem,
 * for an action on the trivial site.
 *
 * For a string sigma = (c_0 -> c_1 -> ... -> c_n) of level-n morphisms:
 *   X_sigma(p,q)   = (alpha: [p] -> [n], beta: [q] -> [n], x in X_q) with pi(x) = beta^* c_{alpha(0)}
 *   X0_sigma(p,q)  = the same with pi(x) = beta^* c_0
 *   sigma_bar      : X0_sigma -> X_sigma, x |-> beta^*(sigma_{alpha(0)} o ... o sigma_1) . x
 *   horn variant k : alpha and beta both miss some l != k
 * p is the string direction, q the internal simplicial direction.
 *
 * For a test map a: A -> mor, Xtilde(s)(p,q) is the set of diagrams
 * [p] -> [n_0] -> ... -> [n_q] together with an n_q-simplex of A and a point
 * x in X_p over the source of the composite; Xtilde(t) uses targets. The
 * n_i are bounded by the truncation level.
 */
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bisimplicial.hpp"
#include "equivalence.hpp"
#include "internal_category.hpp"
#include "sset.hpp"

namespace hfib {

/// c_0 -> ... -> c_n given by n composable morphisms at level n (or a vertex c_0 when n = 0).
struct ActionString
{
    std::size_t n = 0;
    Index c0 = kNone;
    std::vector<Index> arrows;
};

struct StringData
{
    std::size_t n = 0;
    std::vector<Index> objects;            ///< c_0..c_n at level n
    std::vector<std::vector<Index>> span;  ///< span[i][j]: c_i -> c_j for i <= j
};

inline StringData string_data(const InternalCategory& C, const ActionString& s)
{
    const std::size_t n = s.n;
    if (n > C.trunc())
        throw IncompleteAtTruncation("action string longer than the truncation level");
    if (s.arrows.size() != n)
        throw InvalidArgument("action string: need exactly n arrows");
    StringData d;
    d.n = n;
    if (n == 0)
    {
        if (s.c0 >= C.ob()->size(0))
            throw InvalidArgument("action string: c_0 is not a vertex");
        d.objects = {s.c0};
    }
    else
    {
        d.objects.push_back(C.s()(n, s.arrows[0]));
        for (std::size_t i = 0; i < n; ++i)
        {
            if (s.arrows[i] >= C.mor()->size(n))
                throw InvalidArgument("action string: arrow out of range");
            if (C.s()(n, s.arrows[i]) != d.objects.back())
                throw InvalidArgument("action string: arrows are not composable");
            d.objects.push_back(C.t()(n, s.arrows[i]));
        }
    }
    d.span.assign(n + 1, std::vector<Index>(n + 1, kNone));
    for (std::size_t i = 0; i <= n; ++i)
    {
        d.span[i][i] = C.e()(n, d.objects[i]);
        for (std::size_t j = i + 1; j <= n; ++j)
        {
            d.span[i][j] = C.then(n, d.span[i][j - 1], s.arrows[j - 1]);
            if (d.span[i][j] == kNone)
                throw InvalidArgument("action string: a contiguous composite is undefined");
        }
    }
    return d;
}

namespace detail {

inline Monotone slice(const std::vector<Index>& key, std::size_t from, std::size_t len)
{
    Monotone m;
    for (std::size_t i = 0; i < len; ++i)
        m.push_back(static_cast<int>(key[from + i]));
    return m;
}

inline void append(std::vector<Index>& key, const Monotone& m)
{
    for (int v : m)
        key.push_back(static_cast<Index>(v));
}

inline bool misses_common(const Monotone& a, const Monotone& b, std::size_t n, std::size_t k)
{
    for (std::size_t l = 0; l <= n; ++l)
    {
        if (l == k)
            continue;
        bool hit = false;
        for (int v : a)
            hit = hit || static_cast<std::size_t>(v) == l;
        for (int v : b)
            hit = hit || static_cast<std::size_t>(v) == l;
        if (!hit)
            return true;
    }
    return false;
}

inline Index act_or_throw(const InternalAction& A, std::size_t q, Index phi, Index x)
{
    Index y = A.act(q, phi, x);
    if (y == kNone)
        throw IncompleteAtTruncation("proof construction: the action leaves its window");
    return y;
}

}  // namespace detail

struct SigmaObjects
{
    StringData data;
    BiSSetPtr x_sigma;
    BiSSetPtr x0_sigma;
    BiSMap sigma_bar;  ///< x0_sigma -> x_sigma
    std::optional<std::size_t> horn;
    std::vector<std::vector<std::vector<std::vector<Index>>>> keys, keys0;  ///< [p][q]: alpha, beta, x
};

/**
 * Build X_sigma, X0_sigma and sigma_bar (restricted to the horn variant when
 * horn is set). Key layout: alpha (p+1 entries), beta (q+1 entries), x.
 */
inline SigmaObjects sigma_objects(const InternalAction& A, const ActionString& s,
                                  std::optional<std::size_t> horn = {})
{
    const InternalCategory& C = A.base();
    const TruncatedSSet& X = *A.total();
    const std::size_t N = X.trunc();
    SigmaObjects R;
    R.data = string_data(C, s);
    R.horn = horn;
    const std::size_t n = R.data.n;
    if (horn && *horn > n)
        throw InvalidArgument("horn index above n");
    using Key = std::vector<Index>;
    std::vector<std::vector<Monotone>> mono(N + 1);
    for (std::size_t m = 0; m <= N; ++m)
        mono[m] = monotone_maps(static_cast<int>(m), static_cast<int>(n));
    auto over = [&](std::size_t q, Index ob_n) {
        std::vector<std::vector<Index>> out;  // per beta index: x with pi(x) = beta^* ob_n
        for (const auto& b : mono[q])
        {
            Index target = apply_operator(*C.ob(), n, ob_n, b);
            std::vector<Index> xs;
            for (Index x = 0; x < X.size(q); ++x)
                if (A.pi()(q, x) == target)
                    xs.push_back(x);
            out.push_back(std::move(xs));
        }
        return out;
    };
    std::vector<std::vector<std::vector<std::vector<Index>>>> fibers(N + 1);  // [q][i][beta] -> xs over c_i
    for (std::size_t q = 0; q <= N; ++q)
        for (std::size_t i = 0; i <= n; ++i)
            fibers[q].push_back(over(q, R.data.objects[i]));
    auto make_keys = [&](bool zero) {
        std::vector<std::vector<std::vector<Key>>> keys(N + 1, std::vector<std::vector<Key>>(N + 1));
        for (std::size_t p = 0; p <= N; ++p)
            for (std::size_t q = 0; q <= N; ++q)
                for (const auto& a : mono[p])
                    for (std::size_t bi = 0; bi < mono[q].size(); ++bi)
                    {
                        const auto& b = mono[q][bi];
                        if (horn && !detail::misses_common(a, b, n, *horn))
                            continue;
                        for (Index x : fibers[q][zero ? 0 : a[0]][bi])
                        {
                            Key k;
                            detail::append(k, a);
                            detail::append(k, b);
                            k.push_back(x);
                            keys[p][q].push_back(std::move(k));
                        }
                    }
        return keys;
    };
    R.keys = make_keys(false);
    R.keys0 = make_keys(true);
    auto build = [&](bool zero) {
        const auto& keys = zero ? R.keys0 : R.keys;
        auto split = [](std::size_t p, std::size_t q, const Key& k) {
            return std::tuple{detail::slice(k, 0, p + 1), detail::slice(k, p + 1, q + 1), k[p + q + 2]};
        };
        auto join = [](const Monotone& a, const Monotone& b, Index x) {
            Key k;
            detail::append(k, a);
            detail::append(k, b);
            k.push_back(x);
            return k;
        };
        return share(build_bisimplicial(
            N, keys,
            [&](std::size_t p, std::size_t q, std::size_t i, const Key& k) {
                auto [a, b, x] = split(p, q, k);
                Monotone a2 = detail::drop(a, i);
                if (!zero && a2[0] != a[0])
                {
                    Index phi = apply_operator(*C.mor(), n, R.data.span[a[0]][a2[0]], b);
                    x = detail::act_or_throw(A, q, phi, x);
                }
                return join(a2, b, x);
            },
            [&](std::size_t p, std::size_t q, std::size_t i, const Key& k) {
                auto [a, b, x] = split(p, q, k);
                return join(detail::repeat(a, i), b, x);
            },
            [&](std::size_t p, std::size_t q, std::size_t i, const Key& k) {
                auto [a, b, x] = split(p, q, k);
                return join(a, detail::drop(b, i), X.face(q, i, x));
            },
            [&](std::size_t p, std::size_t q, std::size_t i, const Key& k) {
                auto [a, b, x] = split(p, q, k);
                return join(a, detail::repeat(b, i), X.degen(q, i, x));
            },
            [&](std::size_t p, std::size_t q, const Key& k) {
                auto [a, b, x] = split(p, q, k);
                return detail::monotone_name(a) + "|" + detail::monotone_name(b) + "|" + X.name(q, x);
            }));
    };
    R.x_sigma = build(false);
    R.x0_sigma = build(true);

    // sigma_bar on keys, then translated to indices.
    const auto& k0 = R.keys0;
    const auto& k1 = R.keys;
    R.sigma_bar = BiSMap{R.x0_sigma, R.x_sigma,
                         std::vector<std::vector<std::vector<Index>>>(N + 1, std::vector<std::vector<Index>>(N + 1))};
    for (std::size_t p = 0; p <= N; ++p)
        for (std::size_t q = 0; q <= N; ++q)
        {
            std::map<Key, Index> idx;
            for (Index j = 0; j < k1[p][q].size(); ++j)
                idx.emplace(k1[p][q][j], j);
            for (const auto& k : k0[p][q])
            {
                Monotone a = detail::slice(k, 0, p + 1), b = detail::slice(k, p + 1, q + 1);
                Index phi = apply_operator(*C.mor(), n, R.data.span[0][a[0]], b);
                Key img = k;
                img.back() = detail::act_or_throw(A, q, phi, k.back());
                R.sigma_bar.component[p][q].push_back(idx.at(img));
            }
        }
    R.sigma_bar.validate();
    return R;
}

/// Inclusion of the horn variant into the full object (both X_sigma and X0_sigma).
struct HornInclusion
{
    BiSMap x_sigma;
    BiSMap x0_sigma;
    bool square_commutes = false;
};

inline HornInclusion horn_inclusion(const SigmaObjects& horn, const SigmaObjects& full)
{
    const std::size_t N = full.x_sigma->trunc();
    auto include = [&](const BiSSetPtr& small, const BiSSetPtr& big, const auto& small_keys, const auto& big_keys) {
        BiSMap m{small, big, std::vector<std::vector<std::vector<Index>>>(N + 1, std::vector<std::vector<Index>>(N + 1))};
        for (std::size_t p = 0; p <= N; ++p)
            for (std::size_t q = 0; q <= N; ++q)
            {
                std::map<std::vector<Index>, Index> idx;
                for (Index y = 0; y < big_keys[p][q].size(); ++y)
                    idx.emplace(big_keys[p][q][y], y);
                for (const auto& k : small_keys[p][q])
                    m.component[p][q].push_back(idx.at(k));
            }
        m.validate();
        return m;
    };
    HornInclusion H{include(horn.x_sigma, full.x_sigma, horn.keys, full.keys),
                    include(horn.x0_sigma, full.x0_sigma, horn.keys0, full.keys0), true};
    for (std::size_t p = 0; p <= N; ++p)
        for (std::size_t q = 0; q <= N; ++q)
            for (Index x = 0; x < horn.x0_sigma->size(p, q); ++x)
                if (H.x_sigma(p, q, horn.sigma_bar(p, q, x)) != full.sigma_bar(p, q, H.x0_sigma(p, q, x)))
                    H.square_commutes = false;
    return H;
}

/**
 * X_sigma is the pullback of N(X_C) -> N(C) along Delta[n] x Delta[n] -> N(C):
 * sends (alpha, beta, x) to the string of X_C at internal level q starting at
 * x and moving along beta^* of the spans picked out by alpha. Checks that this
 * is a bijection onto the pullback in every bidegree.
 */
inline bool sigma_is_pullback(const InternalAction& A, const SigmaObjects& objs)
{
    const InternalCategory& C = A.base();
    const std::size_t N = A.total()->trunc();
    const std::size_t n = objs.data.n;
    auto AC = action_category(A);
    const InternalCategory& XC = *AC.category;
    for (std::size_t q = 0; q <= N; ++q)
    {
        std::map<std::pair<Index, Index>, Index> mor_index;
        for (Index f = 0; f < AC.pairs[q].size(); ++f)
            mor_index.emplace(AC.pairs[q][f], f);
        for (std::size_t p = 0; p <= N; ++p)
        {
            // (alpha, beta) over each string of C at (string length p, level q).
            std::map<std::vector<Index>, std::size_t> hits;
            for (const auto& a : monotone_maps(static_cast<int>(p), static_cast<int>(n)))
                for (const auto& b : monotone_maps(static_cast<int>(q), static_cast<int>(n)))
                {
                    std::vector<Index> str;
                    if (p == 0)
                        str = {apply_operator(*C.ob(), n, objs.data.objects[a[0]], b)};
                    else
                        for (std::size_t j = 1; j <= p; ++j)
                            str.push_back(apply_operator(*C.mor(), n, objs.data.span[a[j - 1]][a[j]], b));
                    ++hits[str];
                }
            std::size_t expected = 0;
            for (const auto& t : detail::internal_strings(XC, q, p))
            {
                std::vector<Index> img;
                if (p == 0)
                    img = {A.pi()(q, t[0])};
                else
                    for (Index f : t)
                        img.push_back(AC.pairs[q][f].first);
                auto it = hits.find(img);
                if (it != hits.end())
                    expected += it->second;
            }
            std::set<std::pair<std::vector<Index>, std::vector<Index>>> images;
            for (const auto& k : objs.keys[p][q])
            {
                Monotone a = detail::slice(k, 0, p + 1), b = detail::slice(k, p + 1, q + 1);
                Index x = k.back();
                std::vector<Index> str;
                if (p == 0)
                    str = {x};
                for (std::size_t j = 1; j <= p; ++j)
                {
                    Index psi = apply_operator(*C.mor(), n, objs.data.span[a[j - 1]][a[j]], b);
                    auto it = mor_index.find({psi, x});
                    if (it == mor_index.end())
                        return false;
                    str.push_back(it->second);
                    x = A.act(q, psi, x);
                }
                std::vector<Index> ab(k.begin(), k.end() - 1);
                images.insert({ab, str});
            }
            if (images.size() != objs.keys[p][q].size() || expected != images.size())
                return false;
        }
    }
    return true;
}

/// Column p of sigma_bar against the action maps (sigma_{alpha(0)} o ... o sigma_1)_*, per alpha.
struct RowDecomposition
{
    bool matches = true;
    std::size_t pieces = 0;
    std::string witness;
};

inline RowDecomposition check_row_decomposition(const InternalAction& A, const SigmaObjects& objs)
{
    const std::size_t N = A.total()->trunc();
    const std::size_t n = objs.data.n;
    RowDecomposition R;
    Fiber F0 = fiber(A, n, objs.data.objects[0]);
    std::vector<Fiber> Fi;
    std::vector<ActionMap> maps;
    for (std::size_t i = 0; i <= n; ++i)
    {
        Fi.push_back(fiber(A, n, objs.data.objects[i]));
        maps.push_back(action_map(A, n, objs.data.span[0][i], F0, Fi[i]));
    }
    std::vector<std::map<Monotone, Index>> beta_index(N + 1);
    for (std::size_t q = 0; q <= N; ++q)
    {
        auto bs = monotone_maps(static_cast<int>(q), static_cast<int>(n));
        for (Index j = 0; j < bs.size(); ++j)
            beta_index[q][bs[j]] = j;
    }
    for (std::size_t p = 0; p <= N; ++p)
    {
        std::set<Monotone> alphas;
        for (std::size_t q = 0; q <= N; ++q)
            for (Index k = 0; k < objs.keys0[p][q].size(); ++k)
            {
                const auto& src = objs.keys0[p][q][k];
                const auto& dst = objs.keys[p][q][objs.sigma_bar(p, q, k)];
                Monotone a = detail::slice(src, 0, p + 1), b = detail::slice(src, p + 1, q + 1);
                if (!std::equal(src.begin(), src.end() - 1, dst.begin()))
                {
                    R.matches = false;
                    R.witness = "sigma_bar moves alpha or beta at " + objs.x0_sigma->name(p, q, k);
                    return R;
                }
                alphas.insert(a);
                const ActionMap& am = maps[a[0]];
                Index bi = beta_index[q].at(b);
                Index local = F0.pullback.find(q, bi, src.back());
                Index dom = local == kNone ? kNone : am.domain.position[q][local];
                if (dom == kNone)
                {
                    R.matches = false;
                    R.witness = "action map undefined at " + objs.x0_sigma->name(p, q, k);
                    return R;
                }
                auto [b2, y] = Fi[a[0]].pullback.pairs[q][am.map(q, dom)];
                if (b2 != bi || y != dst.back())
                {
                    R.matches = false;
                    R.witness = "row piece differs from the action map at " + objs.x0_sigma->name(p, q, k);
                    return R;
                }
            }
        R.pieces += alphas.size();
    }
    return R;
}

// ---------------------------------------------------------------------------
// Xtilde(s) and Xtilde(t)
// ---------------------------------------------------------------------------

namespace detail {

inline Monotone compose_monotone(const Monotone& outer, const Monotone& inner)
{
    Monotone r;
    for (int v : inner)
        r.push_back(outer[static_cast<std::size_t>(v)]);
    return r;
}

inline Monotone identity_monotone(std::size_t n)
{
    Monotone r(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        r[i] = static_cast<int>(i);
    return r;
}

/// Decoded key: n_0..n_q, theta_0: [p] -> [n_0], theta_j: [n_{j-1}] -> [n_j], a in A_{n_q}, x in X_p.
struct Chain
{
    std::vector<std::size_t> ns;
    std::vector<Monotone> thetas;
    Index a = kNone;
    Index x = kNone;

    std::vector<Index> encode() const
    {
        std::vector<Index> k;
        for (auto v : ns)
            k.push_back(static_cast<Index>(v));
        for (const auto& t : thetas)
            append(k, t);
        k.push_back(a);
        k.push_back(x);
        return k;
    }

    static Chain decode(std::size_t p, std::size_t q, const std::vector<Index>& k)
    {
        Chain c;
        std::size_t pos = 0;
        for (std::size_t j = 0; j <= q; ++j)
            c.ns.push_back(k[pos++]);
        std::size_t len = p + 1;
        for (std::size_t j = 0; j <= q; ++j)
        {
            c.thetas.push_back(slice(k, pos, len));
            pos += len;
            len = c.ns[j] + 1;
        }
        c.a = k[pos++];
        c.x = k[pos];
        return c;
    }

    /// theta_q o ... o theta_0 : [p] -> [n_q]
    Monotone total() const
    {
        Monotone r = thetas[0];
        for (std::size_t j = 1; j < thetas.size(); ++j)
            r = compose_monotone(thetas[j], r);
        return r;
    }

    /// theta_q o ... o theta_1 : [n_0] -> [n_q]
    Monotone tail() const
    {
        Monotone r = identity_monotone(ns[0]);
        for (std::size_t j = 1; j < thetas.size(); ++j)
            r = compose_monotone(thetas[j], r);
        return r;
    }
};

}  // namespace detail

struct XTilde
{
    BiSSetPtr source;  ///< Xtilde(s)
    BiSSetPtr target;  ///< Xtilde(t)
    BiSMap map;
    std::vector<std::vector<std::vector<std::vector<Index>>>> source_keys, target_keys;
    std::size_t bound = 0;
};

/**
 * Build Xtilde(s) -> Xtilde(t) for a test map a: A -> mor with all n_i <= bound.
 * Every action value used must be defined.
 */
inline XTilde xtilde(const InternalAction& A, const SMap& test, std::optional<std::size_t> bound = {})
{
    const InternalCategory& C = A.base();
    const TruncatedSSet& X = *A.total();
    const TruncatedSSet& Asp = *test.source;
    const std::size_t N = X.trunc();
    const std::size_t B = std::min(bound.value_or(N), N);
    if (!(*test.target == *C.mor()))
        throw InvalidArgument("xtilde: test map does not land in mor");
    XTilde R;
    R.bound = B;
    using Key = std::vector<Index>;
    auto phi_of = [&](const detail::Chain& c) {
        std::size_t nq = c.ns.back();
        return apply_operator(*C.mor(), nq, test(nq, c.a), c.total());
    };
    auto keys_for = [&](bool target_side) {
        std::vector<std::vector<std::vector<Key>>> keys(N + 1, std::vector<std::vector<Key>>(N + 1));
        for (std::size_t p = 0; p <= N; ++p)
            for (std::size_t q = 0; q <= N; ++q)
            {
                detail::Chain c;
                std::function<void(std::size_t, std::size_t)> go = [&](std::size_t j, std::size_t prev) {
                    if (j > q)
                    {
                        std::size_t nq = c.ns.back();
                        for (Index a = 0; a < Asp.size(nq); ++a)
                        {
                            c.a = a;
                            Index phi = phi_of(c);
                            Index ob = target_side ? C.t()(p, phi) : C.s()(p, phi);
                            for (Index x = 0; x < X.size(p); ++x)
                                if (A.pi()(p, x) == ob)
                                {
                                    c.x = x;
                                    keys[p][q].push_back(c.encode());
                                }
                        }
                        return;
                    }
                    for (std::size_t nj = 0; nj <= B; ++nj)
                        for (const auto& th : monotone_maps(static_cast<int>(prev), static_cast<int>(nj)))
                        {
                            c.ns.push_back(nj);
                            c.thetas.push_back(th);
                            go(j + 1, nj);
                            c.ns.pop_back();
                            c.thetas.pop_back();
                        }
                };
                go(0, p);
            }
        return keys;
    };
    auto build = [&](const std::vector<std::vector<std::vector<Key>>>& keys) {
        using detail::Chain;
        return share(build_bisimplicial(
            N, keys,
            [&](std::size_t p, std::size_t q, std::size_t i, const Key& k) {
                Chain c = Chain::decode(p, q, k);
                c.thetas[0] = detail::drop(c.thetas[0], i);
                c.x = X.face(p, i, c.x);
                return c.encode();
            },
            [&](std::size_t p, std::size_t q, std::size_t i, const Key& k) {
                Chain c = Chain::decode(p, q, k);
                c.thetas[0] = detail::repeat(c.thetas[0], i);
                c.x = X.degen(p, i, c.x);
                return c.encode();
            },
            [&](std::size_t p, std::size_t q, std::size_t j, const Key& k) {
                Chain c = Chain::decode(p, q, k);
                if (j == q)
                {
                    c.a = apply_operator(Asp, c.ns[q], c.a, c.thetas[q]);
                    c.ns.pop_back();
                    c.thetas.pop_back();
                }
                else
                {
                    // drop object j: merge theta_{j+1} o theta_j
                    c.thetas[j + 1] = detail::compose_monotone(c.thetas[j + 1], c.thetas[j]);
                    c.thetas.erase(c.thetas.begin() + static_cast<std::ptrdiff_t>(j));
                    c.ns.erase(c.ns.begin() + static_cast<std::ptrdiff_t>(j));
                }
                return c.encode();
            },
            [&](std::size_t p, std::size_t q, std::size_t j, const Key& k) {
                Chain c = Chain::decode(p, q, k);
                c.ns.insert(c.ns.begin() + static_cast<std::ptrdiff_t>(j), c.ns[j]);
                c.thetas.insert(c.thetas.begin() + static_cast<std::ptrdiff_t>(j + 1),
                                detail::identity_monotone(c.ns[j]));
                return c.encode();
            },
            [&](std::size_t p, std::size_t q, const Key& k) {
                Chain c = Chain::decode(p, q, k);
                std::string s;
                for (std::size_t j = 0; j < c.thetas.size(); ++j)
                    s += (j ? ">" : "") + detail::monotone_name(c.thetas[j]);
                return s + "|" + Asp.name(c.ns.back(), c.a) + "|" + X.name(p, c.x);
            }));
    };
    R.source_keys = keys_for(false);
    R.target_keys = keys_for(true);
    R.source = build(R.source_keys);
    R.target = build(R.target_keys);
    R.map = BiSMap{R.source, R.target,
                   std::vector<std::vector<std::vector<Index>>>(N + 1, std::vector<std::vector<Index>>(N + 1))};
    for (std::size_t p = 0; p <= N; ++p)
        for (std::size_t q = 0; q <= N; ++q)
        {
            std::map<Key, Index> idx;
            for (Index j = 0; j < R.target_keys[p][q].size(); ++j)
                idx.emplace(R.target_keys[p][q][j], j);
            for (const auto& k : R.source_keys[p][q])
            {
                auto c = detail::Chain::decode(p, q, k);
                c.x = detail::act_or_throw(A, p, phi_of(c), c.x);
                R.map.component[p][q].push_back(idx.at(c.encode()));
            }
        }
    R.map.validate();
    return R;
}

/// s*(X)_A, t*(X)_A and the pulled-back action map between them.
struct PulledBackAction
{
    PairObject source;  ///< (a, x) with pi(x) = s(a)
    PairObject target;  ///< (a, y) with pi(y) = t(a)
    SMap map;
};

inline PulledBackAction pulled_back_action(const InternalAction& A, const SMap& test)
{
    const InternalCategory& C = A.base();
    const std::size_t N = C.trunc();
    PulledBackAction R;
    R.source = pullback(compose(C.s(), test), A.pi());
    R.target = pullback(compose(C.t(), test), A.pi());
    R.map = SMap{R.source.object, R.target.object, std::vector<std::vector<Index>>(N + 1)};
    for (std::size_t m = 0; m <= N; ++m)
        for (auto [a, x] : R.source.pairs[m])
            R.map.component[m].push_back(
                R.target.find(m, a, detail::act_or_throw(A, m, test(m, a), x)));
    R.map.validate();
    return R;
}

struct XTildeReport
{
    bool square_commutes = false;
    bool rows_are_action_maps = false;
    EquivalenceResult source_unit;  ///< diag Xtilde(s) -> s*(X)_A
    EquivalenceResult target_unit;  ///< diag Xtilde(t) -> t*(X)_A
    EquivalenceResult diagonal;     ///< diag Xtilde(s) -> diag Xtilde(t)
    EquivalenceResult pulled_back;  ///< s*(X)_A -> t*(X)_A
};

inline XTildeReport check_xtilde(const InternalAction& A, const SMap& test, std::size_t range)
{
    const std::size_t N = A.total()->trunc();
    XTildeReport rep;
    XTilde T = xtilde(A, test);
    PulledBackAction P = pulled_back_action(A, test);
    auto ds = share(diagonal(*T.source));
    auto dt = share(diagonal(*T.target));
    SMap dmap = diagonal_map(T.map, ds, dt);
    // Forget the factorization: (theta's, a, x) |-> (rho^* a, x). Strictly natural, unlike the
    // initial factorization in the other direction.
    auto project = [&](const SSetPtr& diag, const auto& keys, const PairObject& obj) {
        SMap u{diag, obj.object, std::vector<std::vector<Index>>(N + 1)};
        for (std::size_t m = 0; m <= N; ++m)
            for (const auto& k : keys[m][m])
            {
                auto c = detail::Chain::decode(m, m, k);
                Index a = apply_operator(*test.source, c.ns.back(), c.a, c.total());
                u.component[m].push_back(obj.find(m, a, c.x));
            }
        u.validate();
        return u;
    };
    SMap us = project(ds, T.source_keys, P.source);
    SMap ut = project(dt, T.target_keys, P.target);
    rep.square_commutes = compose(P.map, us).component == compose(ut, dmap).component;
    rep.source_unit = is_equivalence(range, us);
    rep.target_unit = is_equivalence(range, ut);
    rep.diagonal = is_equivalence(range, dmap);
    rep.pulled_back = is_equivalence(range, P.map);

    // Fixed q: each chain [n_0] -> ... -> A contributes phi_*: X(c) -> X(d) over Delta[n_0].
    rep.rows_are_action_maps = true;
    const InternalCategory& C = A.base();
    for (std::size_t q = 0; q <= N && rep.rows_are_action_maps; ++q)
    {
        std::map<std::vector<Index>, std::vector<std::pair<std::size_t, Index>>> pieces;  // chain -> (p, key index)
        for (std::size_t p = 0; p <= N; ++p)
            for (Index k = 0; k < T.source_keys[p][q].size(); ++k)
            {
                auto c = detail::Chain::decode(p, q, T.source_keys[p][q][k]);
                std::vector<Index> chain{c.a};
                for (auto v : c.ns)
                    chain.push_back(static_cast<Index>(v));
                for (std::size_t j = 1; j < c.thetas.size(); ++j)
                    detail::append(chain, c.thetas[j]);
                pieces[chain].emplace_back(p, k);
            }
        for (const auto& [chain, members] : pieces)
        {
            auto [p0, k0] = members.front();
            auto c0 = detail::Chain::decode(p0, q, T.source_keys[p0][q][k0]);
            std::size_t n0 = c0.ns[0];
            Index phi = apply_operator(*C.mor(), c0.ns.back(), test(c0.ns.back(), c0.a), c0.tail());
            Fiber Fs = fiber(A, n0, C.s()(n0, phi)), Ft = fiber(A, n0, C.t()(n0, phi));
            ActionMap am = action_map(A, n0, phi, Fs, Ft);
            for (auto [p, k] : members)
            {
                auto c = detail::Chain::decode(p, q, T.source_keys[p][q][k]);
                auto img = detail::Chain::decode(p, q, T.target_keys[p][q][T.map(p, q, k)]);
                auto th = monotone_maps(static_cast<int>(p), static_cast<int>(n0));
                Index ti = static_cast<Index>(std::find(th.begin(), th.end(), c.thetas[0]) - th.begin());
                Index local = Fs.pullback.find(p, ti, c.x);
                Index dom = local == kNone ? kNone : am.domain.position[p][local];
                if (dom == kNone || Ft.pullback.pairs[p][am.map(p, dom)] != std::pair<Index, Index>{ti, img.x})
                {
                    rep.rows_are_action_maps = false;
                    break;
                }
            }
        }
    }
    return rep;
}

}  // namespace hfib
