/**
 * Truncated bisimplicial sets (bidegrees p, q <= N), the diagonal, rows and
 * columns.
 *
 * Horizontal operators act on p, vertical operators on q. Tables are stored
 * per bidegree in the same i*size+x layout as TruncatedSSet.
 */
#pragma once

#include <string>
#include <vector>

#include "sset.hpp"

namespace hfib {

class TruncatedBiSSet
{
public:
    using Grid = std::vector<std::vector<std::vector<Index>>>;  // [p][q][i*size+x]

    TruncatedBiSSet() = default;

    TruncatedBiSSet(std::size_t trunc, std::vector<std::vector<std::vector<std::string>>> names, Grid hface,
                    Grid hdegen, Grid vface, Grid vdegen)
        : trunc_(trunc), names_(std::move(names)), hface_(std::move(hface)), hdegen_(std::move(hdegen)),
          vface_(std::move(vface)), vdegen_(std::move(vdegen))
    {
        validate();
    }

    std::size_t trunc() const { return trunc_; }
    std::size_t size(std::size_t p, std::size_t q) const { return names_[p][q].size(); }
    const std::string& name(std::size_t p, std::size_t q, Index x) const { return names_[p][q][x]; }

    Index hface(std::size_t p, std::size_t q, std::size_t i, Index x) const { return hface_[p][q][i * size(p, q) + x]; }
    Index hdegen(std::size_t p, std::size_t q, std::size_t i, Index x) const { return hdegen_[p][q][i * size(p, q) + x]; }
    Index vface(std::size_t p, std::size_t q, std::size_t i, Index x) const { return vface_[p][q][i * size(p, q) + x]; }
    Index vdegen(std::size_t p, std::size_t q, std::size_t i, Index x) const { return vdegen_[p][q][i * size(p, q) + x]; }

    bool operator==(const TruncatedBiSSet&) const = default;

private:
    void validate() const
    {
        const std::size_t N = trunc_;
        auto fail = [](const std::string& what) { throw CorruptInput("bisimplicial set: " + what); };
        if (names_.size() != N + 1)
            fail("wrong number of horizontal levels");
        for (std::size_t p = 0; p <= N; ++p)
        {
            if (names_[p].size() != N + 1)
                fail("wrong number of vertical levels");
            for (std::size_t q = 0; q <= N; ++q)
            {
                std::size_t sz = size(p, q);
                auto shape = [&](const Grid& g, std::size_t count, const char* what) {
                    if (g[p][q].size() != count * sz)
                        fail(std::string(what) + " table has the wrong size at (" + std::to_string(p) + "," +
                             std::to_string(q) + ")");
                };
                shape(hface_, p == 0 ? 0 : p + 1, "horizontal face");
                shape(hdegen_, p == N ? 0 : p + 1, "horizontal degeneracy");
                shape(vface_, q == 0 ? 0 : q + 1, "vertical face");
                shape(vdegen_, q == N ? 0 : q + 1, "vertical degeneracy");
            }
        }
        // Each row and column is a simplicial set; build them to reuse the identity checks.
        for (std::size_t q = 0; q <= N; ++q)
            (void)row_impl(q);
        for (std::size_t p = 0; p <= N; ++p)
            (void)column_impl(p);
        // Horizontal and vertical operators commute.
        for (std::size_t p = 0; p <= N; ++p)
            for (std::size_t q = 0; q <= N; ++q)
                for (Index x = 0; x < size(p, q); ++x)
                {
                    for (std::size_t i = 0; p > 0 && i <= p; ++i)
                    {
                        for (std::size_t j = 0; q > 0 && j <= q; ++j)
                            if (vface(p - 1, q, j, hface(p, q, i, x)) != hface(p, q - 1, i, vface(p, q, j, x)))
                                fail("horizontal and vertical faces do not commute");
                        for (std::size_t j = 0; q < N && j <= q; ++j)
                            if (vdegen(p - 1, q, j, hface(p, q, i, x)) != hface(p, q + 1, i, vdegen(p, q, j, x)))
                                fail("horizontal faces and vertical degeneracies do not commute");
                    }
                    for (std::size_t i = 0; p < N && i <= p; ++i)
                    {
                        for (std::size_t j = 0; q > 0 && j <= q; ++j)
                            if (vface(p + 1, q, j, hdegen(p, q, i, x)) != hdegen(p, q - 1, i, vface(p, q, j, x)))
                                fail("horizontal degeneracies and vertical faces do not commute");
                        for (std::size_t j = 0; q < N && j <= q; ++j)
                            if (vdegen(p + 1, q, j, hdegen(p, q, i, x)) != hdegen(p, q + 1, i, vdegen(p, q, j, x)))
                                fail("horizontal and vertical degeneracies do not commute");
                    }
                }
    }

public:
    /// Row q: the simplicial set p -> W(p,q) with horizontal operators.
    TruncatedSSet row_impl(std::size_t q) const
    {
        std::vector<std::vector<std::string>> names(trunc_ + 1);
        std::vector<std::vector<Index>> faces(trunc_ + 1), degens(trunc_ + 1);
        for (std::size_t p = 0; p <= trunc_; ++p)
        {
            names[p] = names_[p][q];
            faces[p] = hface_[p][q];
            degens[p] = hdegen_[p][q];
        }
        return TruncatedSSet(trunc_, std::move(names), std::move(faces), std::move(degens));
    }

    /// Column p: the simplicial set q -> W(p,q) with vertical operators.
    TruncatedSSet column_impl(std::size_t p) const
    {
        return TruncatedSSet(trunc_, names_[p], vface_[p], vdegen_[p]);
    }

private:
    std::size_t trunc_ = 0;
    std::vector<std::vector<std::vector<std::string>>> names_;
    Grid hface_, hdegen_, vface_, vdegen_;
};

using BiSSetPtr = std::shared_ptr<const TruncatedBiSSet>;

inline BiSSetPtr share(TruncatedBiSSet x) { return std::make_shared<const TruncatedBiSSet>(std::move(x)); }

/// A map of bisimplicial sets, stored per bidegree.
struct BiSMap
{
    BiSSetPtr source;
    BiSSetPtr target;
    std::vector<std::vector<std::vector<Index>>> component;  // [p][q][x]

    Index operator()(std::size_t p, std::size_t q, Index x) const { return component[p][q][x]; }

    void validate() const
    {
        const std::size_t N = source->trunc();
        if (target->trunc() != N)
            throw InvalidArgument("bisimplicial map: mismatched truncation levels");
        for (std::size_t p = 0; p <= N; ++p)
            for (std::size_t q = 0; q <= N; ++q)
            {
                if (component[p][q].size() != source->size(p, q))
                    throw CorruptInput("bisimplicial map: component has wrong length");
                for (Index x = 0; x < source->size(p, q); ++x)
                {
                    Index y = component[p][q][x];
                    if (y >= target->size(p, q))
                        throw CorruptInput("bisimplicial map: image out of range");
                    for (std::size_t i = 0; p > 0 && i <= p; ++i)
                        if (component[p - 1][q][source->hface(p, q, i, x)] != target->hface(p, q, i, y))
                            throw CorruptInput("bisimplicial map: does not commute with horizontal faces");
                    for (std::size_t i = 0; q > 0 && i <= q; ++i)
                        if (component[p][q - 1][source->vface(p, q, i, x)] != target->vface(p, q, i, y))
                            throw CorruptInput("bisimplicial map: does not commute with vertical faces");
                    for (std::size_t i = 0; p < N && i <= p; ++i)
                        if (component[p + 1][q][source->hdegen(p, q, i, x)] != target->hdegen(p, q, i, y))
                            throw CorruptInput("bisimplicial map: does not commute with horizontal degeneracies");
                    for (std::size_t i = 0; q < N && i <= q; ++i)
                        if (component[p][q + 1][source->vdegen(p, q, i, x)] != target->vdegen(p, q, i, y))
                            throw CorruptInput("bisimplicial map: does not commute with vertical degeneracies");
                }
            }
    }
};

/**
 * Build a bisimplicial set from ordered keys per bidegree. hface(p,q,i,k),
 * hdegen, vface, vdegen return keys at the neighbouring bidegree.
 */
template <class Key, class HFn, class HDn, class VFn, class VDn, class NameFn>
TruncatedBiSSet build_bisimplicial(std::size_t N, const std::vector<std::vector<std::vector<Key>>>& keys, HFn&& hf,
                                   HDn&& hd, VFn&& vf, VDn&& vd, NameFn&& name)
{
    std::vector<std::vector<std::map<Key, Index>>> lookup(N + 1, std::vector<std::map<Key, Index>>(N + 1));
    for (std::size_t p = 0; p <= N; ++p)
        for (std::size_t q = 0; q <= N; ++q)
            for (std::size_t x = 0; x < keys[p][q].size(); ++x)
                if (!lookup[p][q].emplace(keys[p][q][x], static_cast<Index>(x)).second)
                    throw CorruptInput("build_bisimplicial: duplicate key");
    auto find = [&](std::size_t p, std::size_t q, const Key& k) {
        auto it = lookup[p][q].find(k);
        if (it == lookup[p][q].end())
            throw CorruptInput("build_bisimplicial: operator leaves the listed simplices at (" + std::to_string(p) +
                               "," + std::to_string(q) + ")");
        return it->second;
    };
    TruncatedBiSSet::Grid HF(N + 1, std::vector<std::vector<Index>>(N + 1)), HD = HF, VF = HF, VD = HF;
    std::vector<std::vector<std::vector<std::string>>> names(N + 1, std::vector<std::vector<std::string>>(N + 1));
    for (std::size_t p = 0; p <= N; ++p)
        for (std::size_t q = 0; q <= N; ++q)
        {
            const auto& ks = keys[p][q];
            std::size_t sz = ks.size();
            for (const auto& k : ks)
                names[p][q].push_back(name(p, q, k));
            auto fill = [&](std::vector<Index>& out, std::size_t count, auto&& op, std::size_t tp, std::size_t tq) {
                out.resize(count * sz);
                for (std::size_t i = 0; i < count; ++i)
                    for (std::size_t x = 0; x < sz; ++x)
                        out[i * sz + x] = find(tp, tq, op(p, q, i, ks[x]));
            };
            if (p > 0)
                fill(HF[p][q], p + 1, hf, p - 1, q);
            if (p < N)
                fill(HD[p][q], p + 1, hd, p + 1, q);
            if (q > 0)
                fill(VF[p][q], q + 1, vf, p, q - 1);
            if (q < N)
                fill(VD[p][q], q + 1, vd, p, q + 1);
        }
    return TruncatedBiSSet(N, std::move(names), std::move(HF), std::move(HD), std::move(VF), std::move(VD));
}

/// (p,q)-simplices are pairs (x in X_p, y in Y_q).
inline TruncatedBiSSet external_product(const TruncatedSSet& X, const TruncatedSSet& Y)
{
    if (X.trunc() != Y.trunc())
        throw InvalidArgument("external_product: mismatched truncation levels");
    const std::size_t N = X.trunc();
    using Key = std::pair<Index, Index>;
    std::vector<std::vector<std::vector<Key>>> keys(N + 1, std::vector<std::vector<Key>>(N + 1));
    for (std::size_t p = 0; p <= N; ++p)
        for (std::size_t q = 0; q <= N; ++q)
            for (Index a = 0; a < X.size(p); ++a)
                for (Index b = 0; b < Y.size(q); ++b)
                    keys[p][q].emplace_back(a, b);
    return build_bisimplicial(
        N, keys, [&](std::size_t p, std::size_t, std::size_t i, const Key& k) { return Key{X.face(p, i, k.first), k.second}; },
        [&](std::size_t p, std::size_t, std::size_t i, const Key& k) { return Key{X.degen(p, i, k.first), k.second}; },
        [&](std::size_t, std::size_t q, std::size_t i, const Key& k) { return Key{k.first, Y.face(q, i, k.second)}; },
        [&](std::size_t, std::size_t q, std::size_t i, const Key& k) { return Key{k.first, Y.degen(q, i, k.second)}; },
        [&](std::size_t p, std::size_t q, const Key& k) { return X.name(p, k.first) + "|" + Y.name(q, k.second); });
}

/// Map f x g between external products.
inline BiSMap external_product_map(const SMap& f, const SMap& g, const BiSSetPtr& source, const BiSSetPtr& target)
{
    const std::size_t N = source->trunc();
    BiSMap m{source, target, std::vector<std::vector<std::vector<Index>>>(N + 1, std::vector<std::vector<Index>>(N + 1))};
    for (std::size_t p = 0; p <= N; ++p)
        for (std::size_t q = 0; q <= N; ++q)
        {
            std::size_t yq = g.target->size(q);
            for (Index a = 0; a < f.source->size(p); ++a)
                for (Index b = 0; b < g.source->size(q); ++b)
                    m.component[p][q].push_back(static_cast<Index>(f(p, a) * yq + g(q, b)));
        }
    m.validate();
    return m;
}

/// Level n simplices are W(n,n); operators act in both directions at once.
inline TruncatedSSet diagonal(const TruncatedBiSSet& W)
{
    const std::size_t N = W.trunc();
    std::vector<std::vector<std::string>> names(N + 1);
    std::vector<std::vector<Index>> faces(N + 1), degens(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
    {
        std::size_t sz = W.size(n, n);
        for (Index x = 0; x < sz; ++x)
            names[n].push_back(W.name(n, n, x));
        if (n > 0)
        {
            faces[n].resize((n + 1) * sz);
            for (std::size_t i = 0; i <= n; ++i)
                for (Index x = 0; x < sz; ++x)
                    faces[n][i * sz + x] = W.vface(n - 1, n, i, W.hface(n, n, i, x));
        }
        if (n < N)
        {
            degens[n].resize((n + 1) * sz);
            for (std::size_t i = 0; i <= n; ++i)
                for (Index x = 0; x < sz; ++x)
                    degens[n][i * sz + x] = W.vdegen(n + 1, n, i, W.hdegen(n, n, i, x));
        }
    }
    return TruncatedSSet(N, std::move(names), std::move(faces), std::move(degens));
}

inline SMap diagonal_map(const BiSMap& f, const SSetPtr& source_diag, const SSetPtr& target_diag)
{
    SMap g{source_diag, target_diag, {}};
    for (std::size_t n = 0; n <= f.source->trunc(); ++n)
        g.component.push_back(f.component[n][n]);
    g.validate();
    return g;
}

inline TruncatedSSet row(const TruncatedBiSSet& W, std::size_t q)
{
    if (q > W.trunc())
        throw InvalidArgument("row: index above truncation");
    return W.row_impl(q);
}

inline TruncatedSSet column(const TruncatedBiSSet& W, std::size_t p)
{
    if (p > W.trunc())
        throw InvalidArgument("column: index above truncation");
    return W.column_impl(p);
}

inline SMap row_map(const BiSMap& f, std::size_t q, const SSetPtr& source_row, const SSetPtr& target_row)
{
    SMap g{source_row, target_row, {}};
    for (std::size_t p = 0; p <= f.source->trunc(); ++p)
        g.component.push_back(f.component[p][q]);
    g.validate();
    return g;
}

inline SMap column_map(const BiSMap& f, std::size_t p, const SSetPtr& source_col, const SSetPtr& target_col)
{
    SMap g{source_col, target_col, f.component[p]};
    g.validate();
    return g;
}

/// Bisimplicial set constant in the horizontal direction (each column equal to X).
inline TruncatedBiSSet vertically_varying(const TruncatedSSet& X)
{
    return external_product(point(X.trunc()), X);
}

/// Bidegreewise fiber product of f: A -> C and g: B -> C; entries are (a, b) pairs.
struct BiPullback
{
    BiSSetPtr object;
    BiSMap first, second;
};

inline BiPullback pullback(const BiSMap& f, const BiSMap& g)
{
    if (!(*f.target == *g.target))
        throw InvalidArgument("pullback: bisimplicial maps have different codomains");
    const std::size_t N = f.source->trunc();
    using Key = std::pair<Index, Index>;
    std::vector<std::vector<std::vector<Key>>> keys(N + 1, std::vector<std::vector<Key>>(N + 1));
    for (std::size_t p = 0; p <= N; ++p)
        for (std::size_t q = 0; q <= N; ++q)
            for (Index a = 0; a < f.source->size(p, q); ++a)
                for (Index b = 0; b < g.source->size(p, q); ++b)
                    if (f(p, q, a) == g(p, q, b))
                        keys[p][q].emplace_back(a, b);
    const auto& A = *f.source;
    const auto& B = *g.source;
    BiPullback P;
    P.object = share(build_bisimplicial(
        N, keys,
        [&](std::size_t p, std::size_t q, std::size_t i, const Key& k) { return Key{A.hface(p, q, i, k.first), B.hface(p, q, i, k.second)}; },
        [&](std::size_t p, std::size_t q, std::size_t i, const Key& k) { return Key{A.hdegen(p, q, i, k.first), B.hdegen(p, q, i, k.second)}; },
        [&](std::size_t p, std::size_t q, std::size_t i, const Key& k) { return Key{A.vface(p, q, i, k.first), B.vface(p, q, i, k.second)}; },
        [&](std::size_t p, std::size_t q, std::size_t i, const Key& k) { return Key{A.vdegen(p, q, i, k.first), B.vdegen(p, q, i, k.second)}; },
        [&](std::size_t p, std::size_t q, const Key& k) { return "(" + A.name(p, q, k.first) + "," + B.name(p, q, k.second) + ")"; }));
    auto grid = std::vector<std::vector<std::vector<Index>>>(N + 1, std::vector<std::vector<Index>>(N + 1));
    P.first = BiSMap{P.object, f.source, grid};
    P.second = BiSMap{P.object, g.source, grid};
    for (std::size_t p = 0; p <= N; ++p)
        for (std::size_t q = 0; q <= N; ++q)
            for (const auto& [a, b] : keys[p][q])
            {
                P.first.component[p][q].push_back(a);
                P.second.component[p][q].push_back(b);
            }
    return P;
}

}  // namespace hfib
