/**
 * Homology-in-range equivalences.
 *
 * is_equivalence judges a simplicial map by its induced maps on H_0..H_range.
 * Every verdict is cross-checked against the mapping cone: a "yes" needs the
 * cone acyclic through the range, and an acyclic cone one degree further
 * forces a "yes".
 */
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chains.hpp"

namespace hfib {

enum class Verdict
{
    yes,
    no,
    incomplete_at_truncation,
    not_checkable
};

inline std::string to_string(Verdict v)
{
    switch (v)
    {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::incomplete_at_truncation: return "incomplete-at-truncation";
    case Verdict::not_checkable: return "not-checkable";
    }
    return "?";
}

enum class SpecKind
{
    h_range,
    stalkwise_h_range,
    levelwise_h_range
};

inline std::string to_string(SpecKind k)
{
    switch (k)
    {
    case SpecKind::h_range: return "h-range";
    case SpecKind::stalkwise_h_range: return "stalkwise-h-range";
    case SpecKind::levelwise_h_range: return "levelwise-h-range";
    }
    return "?";
}

inline SpecKind spec_kind_from_string(const std::string& s)
{
    if (s == "h-range")
        return SpecKind::h_range;
    if (s == "stalkwise-h-range")
        return SpecKind::stalkwise_h_range;
    if (s == "levelwise-h-range")
        return SpecKind::levelwise_h_range;
    throw InvalidArgument("unknown localization spec '" + s + "'");
}

/// The judging predicate. Points and site objects live with the presheaf code.
struct LocalizationSpec
{
    SpecKind kind = SpecKind::h_range;
    std::size_t range = 0;
};

struct EquivalenceResult
{
    Verdict verdict = Verdict::yes;
    std::optional<std::size_t> failing_degree;
    std::string detail;

    explicit operator bool() const { return verdict == Verdict::yes; }
};

/// Mapping cone of the chain map induced by f, built through degree top.
inline ChainComplex mapping_cone(const SMap& f, const SimplicialChains& cx, const SimplicialChains& cy,
                                 std::size_t top)
{
    // Cone_n = C_{n-1} + D_n, d(c, e) = (-dc, f(c) + de)
    ChainComplex K;
    K.top_degree = top;
    K.boundary.resize(top + 1);
    auto c_rank = [&](std::size_t n) -> std::size_t { return n == 0 ? 0 : cx.complex.rank(n - 1); };
    auto d_rank = [&](std::size_t n) -> std::size_t { return cy.complex.rank(n); };
    for (std::size_t n = 0; n <= top; ++n)
    {
        std::size_t rows = n == 0 ? 0 : c_rank(n - 1) + d_rank(n - 1);
        IntMatrix m(rows, c_rank(n) + d_rank(n));
        if (n > 0)
        {
            std::size_t cr = c_rank(n - 1);
            if (n >= 2)
            {
                const IntMatrix& dc = cx.complex.boundary[n - 1];
                for (std::size_t i = 0; i < dc.rows(); ++i)
                    for (std::size_t j = 0; j < dc.cols(); ++j)
                        m(i, j) = -dc(i, j);
            }
            IntMatrix fc = chain_map(f, cx, cy, n - 1);
            for (std::size_t i = 0; i < fc.rows(); ++i)
                for (std::size_t j = 0; j < fc.cols(); ++j)
                    m(cr + i, j) = fc(i, j);
            const IntMatrix& de = cy.complex.boundary[n];
            for (std::size_t i = 0; i < de.rows(); ++i)
                for (std::size_t j = 0; j < de.cols(); ++j)
                    m(cr + i, c_rank(n) + j) = de(i, j);
        }
        K.boundary[n] = std::move(m);
    }
    K.check_dd();
    return K;
}

namespace detail {

inline EquivalenceResult judge_map(const SMap& f, std::size_t range)
{
    const std::size_t N = f.source->trunc();
    if (f.target->trunc() != N)
        throw InvalidArgument("is_equivalence: mismatched truncation levels");
    if (range >= N)
        return {Verdict::incomplete_at_truncation, {},
                "range " + std::to_string(range) + " is not below truncation " + std::to_string(N)};
    auto hx = HomologyData::of(*f.source, range);
    auto hy = HomologyData::of(*f.target, range);
    EquivalenceResult r;
    for (std::size_t k = 0; k <= range; ++k)
    {
        auto h = induced_map(f, hx, hy, k);
        if (!h.is_isomorphism())
        {
            r.verdict = Verdict::no;
            r.failing_degree = k;
            r.detail = "H_" + std::to_string(k) + ": " + hx.groups[k].str() + " -> " + hy.groups[k].str() +
                       " is not an isomorphism";
            break;
        }
    }
    // Cone cross-check: needs chains one degree above the range on the target side.
    std::size_t top = std::min(N, range + 1);
    auto cone = mapping_cone(f, hx.chains, hy.chains, top);
    bool vanish_through_range = true;
    for (std::size_t k = 0; k <= range && k < top; ++k)
        vanish_through_range = vanish_through_range && homology(cone, k).is_zero();
    if (r.verdict == Verdict::yes && !vanish_through_range)
        throw std::logic_error("is_equivalence: induced maps are isomorphisms but the mapping cone is not acyclic");
    if (r.verdict == Verdict::no && r.failing_degree && *r.failing_degree + 1 <= range && vanish_through_range)
        throw std::logic_error("is_equivalence: mapping cone acyclic but an induced map fails below the range");
    return r;
}

}  // namespace detail

/// Judge a simplicial map with an h-range spec.
inline EquivalenceResult is_equivalence(const LocalizationSpec& spec, const SMap& f)
{
    if (spec.kind != SpecKind::h_range)
        throw InvalidArgument("is_equivalence: spec '" + to_string(spec.kind) +
                              "' judges presheaf maps; use the presheaf overload");
    return detail::judge_map(f, spec.range);
}

inline EquivalenceResult is_equivalence(std::size_t range, const SMap& f)
{
    return is_equivalence(LocalizationSpec{SpecKind::h_range, range}, f);
}

/// Reduced homology vanishes through the range (the map to a point is an equivalence).
inline bool reduced_homology_vanishes(const SSetPtr& X, std::size_t range)
{
    if (range >= X->trunc())
        throw UnreliableAtTruncation("reduced_homology_vanishes: range not below truncation");
    auto H = homology_of(*X, range);
    if (H[0].rank != 1 || !H[0].torsion.empty())
        return false;
    for (std::size_t k = 1; k <= range; ++k)
        if (!H[k].is_zero())
            return false;
    return true;
}

}  // namespace hfib
