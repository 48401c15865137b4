/**
 * Category objects in truncated simplicial sets and their left actions.
 *
 * Composition may be partial (windowed models of infinite monoids such as
 * N or Z): then(n, f, g) returns kNone where the composite is not stored. The
 * defined part must be closed under faces and degeneracies, satisfy the unit
 * laws everywhere, and be closed in the sense that a defined triple composite
 * is defined either way round. Nerve strings require all contiguous
 * composites to be defined.
 */
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bisimplicial.hpp"
#include "category.hpp"
#include "equivalence.hpp"
#include "fibration.hpp"
#include "parallel.hpp"
#include "sset.hpp"

namespace hfib {

namespace detail {
inline std::uint64_t pack(Index a, Index b) { return (std::uint64_t{a} << 32) | b; }
}  // namespace detail

class InternalCategory
{
public:
    InternalCategory() = default;

    /// then_fn(n, f, g) gives g o f at level n (f then g) or kNone.
    template <class ThenFn>
    InternalCategory(SSetPtr ob, SSetPtr mor, SMap s, SMap t, SMap e, ThenFn&& then_fn)
        : ob_(std::move(ob)), mor_(std::move(mor)), s_(std::move(s)), t_(std::move(t)), e_(std::move(e))
    {
        const std::size_t N = ob_->trunc();
        comp_.resize(N + 1);
        for (std::size_t n = 0; n <= N; ++n)
        {
            std::vector<std::vector<Index>> by_source(ob_->size(n));
            for (Index g = 0; g < mor_->size(n); ++g)
                by_source[s_(n, g)].push_back(g);
            for (Index f = 0; f < mor_->size(n); ++f)
                for (Index g : by_source[t_(n, f)])
                {
                    Index h = then_fn(n, f, g);
                    if (h != kNone)
                        comp_[n].emplace(detail::pack(f, g), h);
                }
        }
        validate();
    }

    const SSetPtr& ob() const { return ob_; }
    const SSetPtr& mor() const { return mor_; }
    const SMap& s() const { return s_; }
    const SMap& t() const { return t_; }
    const SMap& e() const { return e_; }
    std::size_t trunc() const { return ob_->trunc(); }

    Index then(std::size_t n, Index f, Index g) const
    {
        auto it = comp_[n].find(detail::pack(f, g));
        return it == comp_[n].end() ? kNone : it->second;
    }

    bool is_total() const
    {
        for (std::size_t n = 0; n <= trunc(); ++n)
        {
            std::size_t composable = 0;
            std::vector<std::size_t> count(ob_->size(n), 0);
            for (Index g = 0; g < mor_->size(n); ++g)
                ++count[s_(n, g)];
            for (Index f = 0; f < mor_->size(n); ++f)
                composable += count[t_(n, f)];
            if (composable != comp_[n].size())
                return false;
        }
        return true;
    }

private:
    void validate() const
    {
        const std::size_t N = trunc();
        auto fail = [](const std::string& m) { throw CorruptInput("internal category: " + m); };
        if (mor_->trunc() != N)
            fail("ob and mor have different truncation levels");
        s_.validate();
        t_.validate();
        e_.validate();
        for (std::size_t n = 0; n <= N; ++n)
            for (Index c = 0; c < ob_->size(n); ++c)
                if (s_(n, e_(n, c)) != c || t_(n, e_(n, c)) != c)
                    fail("source or target of a unit is wrong");
        for (std::size_t n = 0; n <= N; ++n)
        {
            for (Index f = 0; f < mor_->size(n); ++f)
            {
                if (then(n, e_(n, s_(n, f)), f) != f || then(n, f, e_(n, t_(n, f))) != f)
                    fail("unit law fails at level " + std::to_string(n) + " for " + mor_->name(n, f));
            }
            for (const auto& [key, h] : comp_[n])
            {
                Index f = static_cast<Index>(key >> 32), g = static_cast<Index>(key & 0xffffffffu);
                if (s_(n, h) != s_(n, f) || t_(n, h) != t_(n, g))
                    fail("composite has wrong endpoints");
                for (std::size_t i = 0; n > 0 && i <= n; ++i)
                    if (then(n - 1, mor_->face(n, i, f), mor_->face(n, i, g)) != mor_->face(n, i, h))
                        fail("composition does not commute with faces");
                for (std::size_t i = 0; n < N && i <= n; ++i)
                    if (then(n + 1, mor_->degen(n, i, f), mor_->degen(n, i, g)) != mor_->degen(n, i, h))
                        fail("composition does not commute with degeneracies");
            }
        }
        // Associativity, with closure for partial composition.
        for (std::size_t n = 0; n <= N; ++n)
        {
            std::vector<std::vector<Index>> by_source(ob_->size(n));
            for (Index g = 0; g < mor_->size(n); ++g)
                by_source[s_(n, g)].push_back(g);
            for (const auto& [key, fg] : comp_[n])
            {
                Index f = static_cast<Index>(key >> 32), g = static_cast<Index>(key & 0xffffffffu);
                for (Index h : by_source[t_(n, g)])
                {
                    Index left = then(n, fg, h);
                    Index gh = then(n, g, h);
                    Index right = gh == kNone ? kNone : then(n, f, gh);
                    if (left != right)
                        fail("associativity fails at level " + std::to_string(n) + " for (" + mor_->name(n, f) +
                             ", " + mor_->name(n, g) + ", " + mor_->name(n, h) + ")");
                }
            }
        }
    }

    SSetPtr ob_, mor_;
    SMap s_, t_, e_;
    std::vector<std::unordered_map<std::uint64_t, Index>> comp_;
};

using CategoryPtr = std::shared_ptr<const InternalCategory>;

/// A finite category as a category object constant in the simplicial direction.
inline InternalCategory constant_category(const FiniteCategory& C, std::size_t N)
{
    std::vector<std::string> obn(C.objects()), morn;
    for (const auto& m : C.morphisms())
        morn.push_back(m.name);
    auto ob = share(discrete(obn, N));
    auto mor = share(discrete(morn, N));
    auto constant = [&](const SSetPtr& a, const SSetPtr& b, auto&& fn) {
        SMap m{a, b, std::vector<std::vector<Index>>(N + 1)};
        for (std::size_t n = 0; n <= N; ++n)
            for (Index x = 0; x < a->size(n); ++x)
                m.component[n].push_back(fn(x));
        return m;
    };
    return InternalCategory(ob, mor, constant(mor, ob, [&](Index f) { return C.source(f); }),
                            constant(mor, ob, [&](Index f) { return C.target(f); }),
                            constant(ob, mor, [&](Index c) { return C.identity(c); }),
                            [&](std::size_t, Index f, Index g) { return C.then(f, g); });
}

// ---------------------------------------------------------------------------
// Nerve and classifying space
// ---------------------------------------------------------------------------

namespace detail {

/// Strings of q composable level-p morphisms with all contiguous composites defined.
inline std::vector<std::vector<Index>> internal_strings(const InternalCategory& C, std::size_t p, std::size_t q)
{
    std::vector<std::vector<Index>> out;
    if (q == 0)
    {
        for (Index c = 0; c < C.ob()->size(p); ++c)
            out.push_back({c});
        return out;
    }
    std::vector<std::vector<Index>> by_source(C.ob()->size(p));
    for (Index g = 0; g < C.mor()->size(p); ++g)
        by_source[C.s()(p, g)].push_back(g);
    std::vector<Index> cur;
    std::vector<std::vector<Index>> suffix;  // suffix[j] = composites ending at position j
    std::function<void()> extend = [&]() {
        if (cur.size() == q)
        {
            out.push_back(cur);
            return;
        }
        auto try_g = [&](Index g) {
            std::vector<Index> comps;
            if (!cur.empty())
            {
                // composites (f_i ... f_last) then g, for all i
                for (Index h : suffix.back())
                {
                    Index c = C.then(p, h, g);
                    if (c == kNone)
                        return;
                    comps.push_back(c);
                }
            }
            comps.push_back(g);
            cur.push_back(g);
            suffix.push_back(std::move(comps));
            extend();
            suffix.pop_back();
            cur.pop_back();
        };
        if (cur.empty())
            for (Index g = 0; g < C.mor()->size(p); ++g)
                try_g(g);
        else
            for (Index g : by_source[C.t()(p, cur.back())])
                try_g(g);
    };
    extend();
    return out;
}

inline std::vector<Index> vertical_face(const InternalCategory& C, std::size_t p, std::size_t q, std::size_t i,
                                        const std::vector<Index>& s)
{
    if (q == 1)
        return {i == 0 ? C.t()(p, s[0]) : C.s()(p, s[0])};
    std::vector<Index> t;
    for (std::size_t j = 0; j < q; ++j)
    {
        if ((i == 0 && j == 0) || (i == q && j == q - 1))
            continue;
        if (i > 0 && i < q && j == i - 1)
        {
            t.push_back(C.then(p, s[i - 1], s[i]));
            ++j;
            continue;
        }
        t.push_back(s[j]);
    }
    return t;
}

inline std::vector<Index> vertical_degen(const InternalCategory& C, std::size_t p, std::size_t q, std::size_t i,
                                         const std::vector<Index>& s)
{
    if (q == 0)
        return {C.e()(p, s[0])};
    Index obj = i == 0 ? C.s()(p, s[0]) : C.t()(p, s[i - 1]);
    std::vector<Index> t = s;
    t.insert(t.begin() + static_cast<std::ptrdiff_t>(i), C.e()(p, obj));
    return t;
}

inline std::vector<Index> horizontal(const InternalCategory& C, std::size_t p, std::size_t q, std::size_t i,
                                     const std::vector<Index>& s, bool face)
{
    const TruncatedSSet& Z = q == 0 ? *C.ob() : *C.mor();
    std::vector<Index> t;
    for (Index x : s)
        t.push_back(face ? Z.face(p, i, x) : Z.degen(p, i, x));
    return t;
}

inline std::string internal_string_name(const InternalCategory& C, std::size_t p, std::size_t q,
                                        const std::vector<Index>& s)
{
    if (q == 0)
        return C.ob()->name(p, s[0]);
    std::string out;
    for (std::size_t j = 0; j < s.size(); ++j)
        out += (j ? "," : "") + C.mor()->name(p, s[j]);
    return "[" + out + "]";
}

}  // namespace detail

/// The bisimplicial nerve: (p, q) = strings of q composable level-p morphisms.
inline TruncatedBiSSet nerve(const InternalCategory& C)
{
    const std::size_t N = C.trunc();
    using Key = std::vector<Index>;
    std::vector<std::vector<std::vector<Key>>> keys(N + 1, std::vector<std::vector<Key>>(N + 1));
    for (std::size_t p = 0; p <= N; ++p)
        for (std::size_t q = 0; q <= N; ++q)
            keys[p][q] = detail::internal_strings(C, p, q);
    return build_bisimplicial(
        N, keys,
        [&](std::size_t p, std::size_t q, std::size_t i, const Key& k) { return detail::horizontal(C, p, q, i, k, true); },
        [&](std::size_t p, std::size_t q, std::size_t i, const Key& k) { return detail::horizontal(C, p, q, i, k, false); },
        [&](std::size_t p, std::size_t q, std::size_t i, const Key& k) { return detail::vertical_face(C, p, q, i, k); },
        [&](std::size_t p, std::size_t q, std::size_t i, const Key& k) { return detail::vertical_degen(C, p, q, i, k); },
        [&](std::size_t p, std::size_t q, const Key& k) { return detail::internal_string_name(C, p, q, k); });
}

/// B C with the string behind every simplex, for building maps into it.
struct ClassifyingSpace
{
    SSetPtr object;
    std::vector<std::vector<std::vector<Index>>> strings;  ///< per level
    std::vector<std::map<std::vector<Index>, Index>> index;

    Index find(std::size_t n, const std::vector<Index>& s) const
    {
        auto it = index[n].find(s);
        return it == index[n].end() ? kNone : it->second;
    }
};

/// Diagonal of the nerve, built directly: level n = strings of n level-n morphisms.
inline ClassifyingSpace classifying_space(const InternalCategory& C)
{
    const std::size_t N = C.trunc();
    ClassifyingSpace B;
    B.strings.resize(N + 1);
    B.index.resize(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
    {
        B.strings[n] = detail::internal_strings(C, n, n);
        for (Index k = 0; k < B.strings[n].size(); ++k)
            B.index[n].emplace(B.strings[n][k], k);
    }
    B.object = share(build_from_keys(
        N, B.strings,
        [&](std::size_t n, std::size_t i, const std::vector<Index>& s) {
            return detail::vertical_face(C, n - 1, n, i, detail::horizontal(C, n, n, i, s, true));
        },
        [&](std::size_t n, std::size_t i, const std::vector<Index>& s) {
            return detail::vertical_degen(C, n + 1, n, i, detail::horizontal(C, n, n, i, s, false));
        },
        [&](std::size_t n, const std::vector<Index>& s) { return detail::internal_string_name(C, n, n, s); }));
    return B;
}

/// An internal functor given on objects and morphisms.
struct InternalFunctor
{
    const InternalCategory* source = nullptr;
    const InternalCategory* target = nullptr;
    SMap on_ob;
    SMap on_mor;
};

/// B F: BC -> BD.
inline SMap classifying_map(const InternalFunctor& F, const ClassifyingSpace& BC, const ClassifyingSpace& BD)
{
    const std::size_t N = BC.object->trunc();
    SMap m{BC.object, BD.object, std::vector<std::vector<Index>>(N + 1)};
    for (std::size_t n = 0; n <= N; ++n)
        for (const auto& s : BC.strings[n])
        {
            std::vector<Index> t;
            if (n == 0)
                t = {F.on_ob(0, s[0])};
            else
                for (Index f : s)
                    t.push_back(F.on_mor(n, f));
            Index k = BD.find(n, t);
            if (k == kNone)
                throw ContractViolation("classifying_map: image string is not in the target nerve");
            m.component[n].push_back(k);
        }
    m.validate();
    return m;
}

/// ob C -> B C sending c to the string of units at c.
inline SMap unit_strings(const InternalCategory& C, const ClassifyingSpace& B)
{
    const std::size_t N = C.trunc();
    SMap m{C.ob(), B.object, std::vector<std::vector<Index>>(N + 1)};
    for (std::size_t n = 0; n <= N; ++n)
        for (Index c = 0; c < C.ob()->size(n); ++c)
        {
            std::vector<Index> s = n == 0 ? std::vector<Index>{c} : std::vector<Index>(n, C.e()(n, c));
            m.component[n].push_back(B.find(n, s));
        }
    m.validate();
    return m;
}

// ---------------------------------------------------------------------------
// Actions
// ---------------------------------------------------------------------------

class InternalAction
{
public:
    InternalAction() = default;

    /// act_fn(n, phi, x) = phi . x (kNone when not defined), for s(phi) == pi(x).
    template <class ActFn>
    InternalAction(CategoryPtr base, SSetPtr total, SMap pi, ActFn&& act_fn)
        : base_(std::move(base)), total_(std::move(total)), pi_(std::move(pi))
    {
        const std::size_t N = total_->trunc();
        act_.resize(N + 1);
        for (std::size_t n = 0; n <= N; ++n)
        {
            std::vector<std::vector<Index>> over(base_->ob()->size(n));
            for (Index x = 0; x < total_->size(n); ++x)
                over[pi_(n, x)].push_back(x);
            for (Index phi = 0; phi < base_->mor()->size(n); ++phi)
                for (Index x : over[base_->s()(n, phi)])
                {
                    Index y = act_fn(n, phi, x);
                    if (y != kNone)
                        act_[n].emplace(detail::pack(phi, x), y);
                }
        }
        validate();
    }

    const InternalCategory& base() const { return *base_; }
    const CategoryPtr& base_ptr() const { return base_; }
    const SSetPtr& total() const { return total_; }
    const SMap& pi() const { return pi_; }

    Index act(std::size_t n, Index phi, Index x) const
    {
        auto it = act_[n].find(detail::pack(phi, x));
        return it == act_[n].end() ? kNone : it->second;
    }

    bool is_total() const
    {
        for (std::size_t n = 0; n <= total_->trunc(); ++n)
        {
            std::vector<std::size_t> count(base_->ob()->size(n), 0);
            for (Index x = 0; x < total_->size(n); ++x)
                ++count[pi_(n, x)];
            std::size_t pairs = 0;
            for (Index phi = 0; phi < base_->mor()->size(n); ++phi)
                pairs += count[base_->s()(n, phi)];
            if (pairs != act_[n].size())
                return false;
        }
        return true;
    }

private:
    void validate() const
    {
        const InternalCategory& C = *base_;
        const std::size_t N = total_->trunc();
        auto fail = [](const std::string& m) { throw ContractViolation("action: " + m); };
        if (C.trunc() != N)
            fail("base and total space have different truncation levels");
        pi_.validate();
        for (std::size_t n = 0; n <= N; ++n)
        {
            for (Index x = 0; x < total_->size(n); ++x)
                if (act(n, C.e()(n, pi_(n, x)), x) != x)
                    fail("unit does not act as the identity on " + total_->name(n, x));
            std::vector<std::vector<Index>> by_source(C.ob()->size(n));
            for (Index g = 0; g < C.mor()->size(n); ++g)
                by_source[C.s()(n, g)].push_back(g);
            for (const auto& [key, y] : act_[n])
            {
                Index phi = static_cast<Index>(key >> 32), x = static_cast<Index>(key & 0xffffffffu);
                if (pi_(n, y) != C.t()(n, phi))
                    fail("pi(phi . x) != t(phi) at level " + std::to_string(n));
                for (std::size_t i = 0; n > 0 && i <= n; ++i)
                    if (act(n - 1, C.mor()->face(n, i, phi), total_->face(n, i, x)) != total_->face(n, i, y))
                        fail("action does not commute with faces");
                for (std::size_t i = 0; n < N && i <= n; ++i)
                    if (act(n + 1, C.mor()->degen(n, i, phi), total_->degen(n, i, x)) != total_->degen(n, i, y))
                        fail("action does not commute with degeneracies");
                for (Index psi : by_source[C.t()(n, phi)])
                {
                    Index z = act(n, psi, y);
                    Index comp = C.then(n, phi, psi);
                    Index w = comp == kNone ? kNone : act(n, comp, x);
                    if (z != w)
                        fail("associativity fails at level " + std::to_string(n) + " for (" + C.mor()->name(n, phi) +
                             ", " + C.mor()->name(n, psi) + ", " + total_->name(n, x) + ")");
                }
            }
            // A defined composite action must also be defined stepwise.
            for (Index phi = 0; phi < C.mor()->size(n); ++phi)
                for (Index psi : by_source[C.t()(n, phi)])
                {
                    Index comp = C.then(n, phi, psi);
                    if (comp == kNone)
                        continue;
                    for (Index x = 0; x < total_->size(n); ++x)
                        if (pi_(n, x) == C.s()(n, phi) && act(n, comp, x) != kNone &&
                            (act(n, phi, x) == kNone || act(n, psi, act(n, phi, x)) == kNone))
                            fail("composite acts but the steps do not, at level " + std::to_string(n));
                }
        }
    }

    CategoryPtr base_;
    SSetPtr total_;
    SMap pi_;
    std::vector<std::unordered_map<std::uint64_t, Index>> act_;
};

/// X_C: objects X, morphisms (phi, x) with phi . x defined; plus its functor to C.
struct ActionCategory
{
    std::shared_ptr<const InternalCategory> category;
    InternalFunctor to_base;
    std::vector<std::vector<std::pair<Index, Index>>> pairs;  ///< per level: morphism -> (phi, x)
};

inline ActionCategory action_category(const InternalAction& A)
{
    const InternalCategory& C = A.base();
    const std::size_t N = C.trunc();
    ActionCategory R;
    R.pairs.resize(N + 1);
    std::vector<std::unordered_map<std::uint64_t, Index>> lookup(N + 1);
    std::vector<std::vector<std::string>> names(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
        for (Index phi = 0; phi < C.mor()->size(n); ++phi)
            for (Index x = 0; x < A.total()->size(n); ++x)
                if (A.pi()(n, x) == C.s()(n, phi) && A.act(n, phi, x) != kNone)
                {
                    lookup[n].emplace(detail::pack(phi, x), static_cast<Index>(R.pairs[n].size()));
                    R.pairs[n].emplace_back(phi, x);
                    names[n].push_back(C.mor()->name(n, phi) + "." + A.total()->name(n, x));
                }
    auto find = [&](std::size_t n, Index phi, Index x) {
        auto it = lookup[n].find(detail::pack(phi, x));
        if (it == lookup[n].end())
            throw ContractViolation("action_category: morphisms are not closed under operators");
        return it->second;
    };
    std::vector<std::vector<Index>> faces(N + 1), degens(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
    {
        std::size_t sz = R.pairs[n].size();
        if (n > 0)
        {
            faces[n].resize((n + 1) * sz);
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t k = 0; k < sz; ++k)
                {
                    auto [phi, x] = R.pairs[n][k];
                    faces[n][i * sz + k] = find(n - 1, C.mor()->face(n, i, phi), A.total()->face(n, i, x));
                }
        }
        if (n < N)
        {
            degens[n].resize((n + 1) * sz);
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t k = 0; k < sz; ++k)
                {
                    auto [phi, x] = R.pairs[n][k];
                    degens[n][i * sz + k] = find(n + 1, C.mor()->degen(n, i, phi), A.total()->degen(n, i, x));
                }
        }
    }
    auto mor = share(TruncatedSSet(N, std::move(names), std::move(faces), std::move(degens)));
    const SSetPtr& X = A.total();
    SMap s{mor, X, std::vector<std::vector<Index>>(N + 1)}, t = s, proj{mor, C.mor(), s.component};
    SMap e{X, mor, std::vector<std::vector<Index>>(N + 1)};
    for (std::size_t n = 0; n <= N; ++n)
    {
        for (auto [phi, x] : R.pairs[n])
        {
            s.component[n].push_back(x);
            t.component[n].push_back(A.act(n, phi, x));
            proj.component[n].push_back(phi);
        }
        for (Index x = 0; x < X->size(n); ++x)
            e.component[n].push_back(find(n, C.e()(n, A.pi()(n, x)), x));
    }
    auto pairs = R.pairs;
    try
    {
        R.category = std::make_shared<const InternalCategory>(X, mor, s, t, e, [&](std::size_t n, Index f, Index g) {
            auto [phi, x] = pairs[n][f];
            auto [psi, y] = pairs[n][g];
            Index comp = C.then(n, phi, psi);
            if (comp == kNone || A.act(n, comp, x) == kNone)
                return kNone;
            (void)y;
            return find(n, comp, x);
        });
    }
    catch (const CorruptInput& err)
    {
        throw ContractViolation(std::string("action_category: broken action: ") + err.what());
    }
    R.to_base = InternalFunctor{R.category.get(), &C, A.pi(), proj};
    return R;
}

/// X(c) = pullback of pi along the simplex c: Delta[n] -> ob.
struct Fiber
{
    std::size_t level = 0;
    Index c = kNone;
    SSetPtr simplex;  ///< Delta[n] truncated like X
    PairObject pullback;

    const SSetPtr& object() const { return pullback.object; }
};

inline Fiber fiber(const InternalAction& A, std::size_t n, Index c)
{
    const std::size_t N = A.total()->trunc();
    if (n > N)
        throw IncompleteAtTruncation("fiber: simplex level above truncation");
    Fiber F;
    F.level = n;
    F.c = c;
    F.simplex = share(standard_simplex(n, N));
    F.pullback = pullback(yoneda_map(F.simplex, A.base().ob(), n, c), A.pi());
    return F;
}

/// The part of phi_* : X(c) -> X(d) that is defined, as a map from a sub-object of X(c).
struct ActionMap
{
    SubObject domain;  ///< of the source fiber
    SMap map;          ///< domain -> X(d)
    bool total = true;
};

inline ActionMap action_map(const InternalAction& A, std::size_t n, Index phi, const Fiber& from, const Fiber& to)
{
    const InternalCategory& C = A.base();
    if (from.level != n || to.level != n || from.c != C.s()(n, phi) || to.c != C.t()(n, phi))
        throw InvalidArgument("action_map: fibers do not match the source and target of phi");
    const std::size_t N = A.total()->trunc();
    const auto& P = from.pullback;
    auto deltas = std::vector<std::vector<Monotone>>(N + 1);
    for (std::size_t m = 0; m <= N; ++m)
        deltas[m] = monotone_maps(static_cast<int>(m), static_cast<int>(n));
    auto image = [&](std::size_t m, Index k) -> Index {
        auto [a, x] = P.pairs[m][k];
        Index phi_a = apply_operator(*C.mor(), n, phi, deltas[m][a]);
        Index y = A.act(m, phi_a, x);
        return y == kNone ? kNone : to.pullback.find(m, a, y);
    };
    ActionMap R;
    R.domain = sub_object(P.object, [&](std::size_t m, Index k) { return image(m, k) != kNone; });
    R.map = SMap{R.domain.object, to.object(), std::vector<std::vector<Index>>(N + 1)};
    for (std::size_t m = 0; m <= N; ++m)
    {
        for (Index k : R.domain.inclusion.component[m])
            R.map.component[m].push_back(image(m, k));
        R.total = R.total && R.domain.object->size(m) == P.object->size(m);
    }
    R.map.validate();
    return R;
}

inline ActionMap action_map(const InternalAction& A, std::size_t n, Index phi)
{
    return action_map(A, n, phi, fiber(A, n, A.base().s()(n, phi)), fiber(A, n, A.base().t()(n, phi)));
}

// ---------------------------------------------------------------------------
// Acting by equivalences
// ---------------------------------------------------------------------------

struct ActsByWitness
{
    std::size_t level = 0;
    Index phi = kNone;
    std::string name;
    EquivalenceResult result;
};

struct ActsByVerdict
{
    Verdict verdict = Verdict::yes;
    bool used_vertex_shortcut = false;
    std::optional<FibrationVerdict> fibration;
    std::size_t checked = 0;
    std::optional<ActsByWitness> witness;
};

struct ActsByOptions
{
    bool vertex_shortcut = false;
    std::optional<std::size_t> max_level;  ///< without the flag: levels 0..max_level (default: truncation)
};

/**
 * Judge every phi_* (vertices only under the vertex shortcut, which requires
 * pi to pass the Kan check through range + 1). Returns the first failure.
 */
inline ActsByVerdict acts_by_check(const InternalAction& A, const LocalizationSpec& spec, ActsByOptions opt = {})
{
    const InternalCategory& C = A.base();
    const std::size_t N = A.total()->trunc();
    ActsByVerdict v;
    v.used_vertex_shortcut = opt.vertex_shortcut;
    if (spec.range >= N)
    {
        v.verdict = Verdict::incomplete_at_truncation;
        return v;
    }
    if (opt.vertex_shortcut)
    {
        auto fv = check_fibration(A.pi(), FibrationKind::kan, std::min(spec.range + 1, N - 1));
        v.fibration = fv;
        if (fv.result != Verdict::yes)
            throw PreconditionUnverified("acts_by_check: the shortcut needs pi to be a fibration, but the check gave " +
                                         to_string(fv.result) +
                                         (fv.witness ? " (" + describe(A.pi(), *fv.witness) + ")" : std::string()));
    }
    std::size_t top = opt.vertex_shortcut ? 0 : opt.max_level.value_or(N);
    std::vector<std::pair<std::size_t, Index>> todo;
    for (std::size_t n = 0; n <= std::min(top, N); ++n)
        for (Index phi = 0; phi < C.mor()->size(n); ++phi)
            todo.emplace_back(n, phi);
    std::vector<EquivalenceResult> res(todo.size());
    parallel_for(todo.size(), [&](std::size_t i) {
        auto [n, phi] = todo[i];
        res[i] = is_equivalence(spec, action_map(A, n, phi).map);
    });
    v.checked = todo.size();
    for (std::size_t i = 0; i < todo.size(); ++i)
        if (res[i].verdict != Verdict::yes)
        {
            auto [n, phi] = todo[i];
            v.verdict = res[i].verdict;
            v.witness = ActsByWitness{n, phi, C.mor()->name(n, phi), res[i]};
            break;
        }
    return v;
}

struct StableVerdict
{
    Verdict verdict = Verdict::yes;
    bool vacuous = false;
    std::optional<std::size_t> failing_test;
    EquivalenceResult detail;
};

/**
 * Pull mu-bar: s*(X) -> t*(X) back along each test map a: K -> mor and judge.
 * A finite certificate; an empty family is a vacuous yes.
 */
inline StableVerdict stable_equiv_check(const InternalAction& A, const LocalizationSpec& spec,
                                        const std::vector<SMap>& test_maps)
{
    StableVerdict v;
    if (test_maps.empty())
    {
        v.vacuous = true;
        return v;
    }
    const InternalCategory& C = A.base();
    const std::size_t N = C.trunc();
    PairObject sX = pullback(C.s(), A.pi());  // (phi, x), s(phi) = pi(x)
    PairObject tX = pullback(C.t(), A.pi());  // (phi, y), t(phi) = pi(y)
    for (std::size_t i = 0; i < test_maps.size(); ++i)
    {
        const SMap& a = test_maps[i];
        if (!(*a.target == *C.mor()))
            throw InvalidArgument("stable_equiv_check: test map does not land in mor");
        PairObject sA = pullback(a, sX.first);
        PairObject tA = pullback(a, tX.first);
        auto img = [&](std::size_t m, Index k) -> Index {
            auto [w, px] = sA.pairs[m][k];
            auto [phi, x] = sX.pairs[m][px];
            Index y = A.act(m, phi, x);
            if (y == kNone)
                return kNone;
            return tA.find(m, w, tX.find(m, phi, y));
        };
        auto dom = sub_object(sA.object, [&](std::size_t m, Index k) { return img(m, k) != kNone; });
        SMap f{dom.object, tA.object, std::vector<std::vector<Index>>(N + 1)};
        for (std::size_t m = 0; m <= N; ++m)
            for (Index k : dom.inclusion.component[m])
                f.component[m].push_back(img(m, k));
        f.validate();
        auto r = is_equivalence(spec, f);
        if (r.verdict != Verdict::yes)
        {
            v.verdict = r.verdict;
            v.failing_test = i;
            v.detail = r;
            return v;
        }
    }
    return v;
}

/**
 * The square X(c) -> B X_C over Delta[0] -> B C for a vertex c: checks that
 * the strict pullback of B X_C -> B C over c is exactly X(c).
 */
struct FiberSquare
{
    bool coherent = false;
    SMap comparison;  ///< X(c) -> pullback
};

inline FiberSquare fiber_square(const InternalAction& A, Index c)
{
    auto AC = action_category(A);
    auto BX = classifying_space(*AC.category);
    auto BC = classifying_space(A.base());
    SMap p = classifying_map(AC.to_base, BX, BC);
    auto unit = unit_strings(A.base(), BC);
    const std::size_t N = A.total()->trunc();
    auto pt = share(point(N));
    Index vertex = unit(0, c);
    auto over = pullback(yoneda_map(pt, BC.object, 0, vertex), p);
    Fiber F = fiber(A, 0, c);
    SMap into_bx = compose(unit_strings(*AC.category, BX), F.pullback.second);
    SMap to_pt = map_to_point(F.object(), pt);
    FiberSquare sq;
    sq.comparison = pairing(over, to_pt, into_bx);
    sq.coherent = is_isomorphism(sq.comparison);
    return sq;
}

}  // namespace hfib
