/**
 * End-to-end checks of the fiber/homotopy-fiber comparison.
 *
 * Homotopy fibers are only ever produced by certified reductions: a strict
 * pullback along a leg that passed the Kan check, or the covering
 * B(c/C) -> BC of a finite groupoid. Anything else needs a known-answer table.
 * A failed hypothesis gives "hypotheses-not-met", never "refuted".
 */
#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "category.hpp"
#include "equivalence.hpp"
#include "fibration.hpp"
#include "internal_category.hpp"
#include "report.hpp"
#include "sset.hpp"

namespace hfib {

// ---------------------------------------------------------------------------
// Groupoid covering oracle
// ---------------------------------------------------------------------------

struct GroupoidCover
{
    std::shared_ptr<const UnderCategory> under;  ///< c/C
    SSetPtr nerve_source;                        ///< BD
    SSetPtr nerve_target;                        ///< BC
    SSetPtr nerve_under;                         ///< B(c/C)
    PairObject pullback;                         ///< BD x_BC B(c/C)
    FibrationVerdict cover;

    const SSetPtr& object() const { return pullback.object; }
};

/// BD x_BC B(c/C), after certifying B(c/C) -> BC as a Kan fibration through n_max (default N - 1).
inline GroupoidCover groupoid_cover_oracle(const Functor& f, Index c, std::size_t N,
                                           std::optional<std::size_t> n_max = {})
{
    f.validate();
    const FiniteCategory& C = *f.target;
    if (!C.is_groupoid())
        throw UnsupportedOracle("groupoid-cover: the target category is not a groupoid");
    if (N == 0)
        throw InvalidArgument("groupoid-cover: truncation must be at least 1");
    GroupoidCover G;
    auto under = std::make_shared<UnderCategory>(under_category(C, c));
    G.under = under;
    G.nerve_source = share(nerve(*f.source, N));
    G.nerve_target = share(nerve(C, N));
    G.nerve_under = share(nerve(under->category, N));
    Functor proj = under->projection(C);
    SMap cover = nerve_map(proj, G.nerve_under, G.nerve_target);
    G.cover = check_fibration(cover, FibrationKind::kan, n_max.value_or(N - 1));
    if (G.cover.result != Verdict::yes)
        throw PreconditionUnverified("groupoid-cover: the covering failed the Kan check (" +
                                     to_string(G.cover.result) + ")");
    G.pullback = pullback(nerve_map(f, G.nerve_source, G.nerve_target), cover);
    return G;
}

/// The canonical map B(f/c) -> BD x_BC B(c/C) for a groupoid target: (d, u) goes to (d, u^-1).
inline SMap comma_to_cover(const Functor& f, const CommaCategory& K, const SSetPtr& NK, const GroupoidCover& G)
{
    const FiniteCategory& C = *f.target;
    const UnderCategory& U = *G.under;
    Functor toD{&K.category, f.source, {}, K.underlying};
    Functor toU{&K.category, &U.category, {}, {}};
    for (const auto& [d, u] : K.objects)
    {
        toD.on_objects.push_back(d);
        std::pair<Index, Index> key{f.on_objects[d], C.inverse(u)};
        auto it = std::find(U.objects.begin(), U.objects.end(), key);
        toU.on_objects.push_back(static_cast<Index>(it - U.objects.begin()));
    }
    for (Index m = 0; m < K.category.morphism_count(); ++m)
    {
        Index x = toU.on_objects[K.category.source(m)], y = toU.on_objects[K.category.target(m)];
        Index v = f.on_morphisms[K.underlying[m]];
        Index found = kNone;
        for (Index n : U.category.hom(x, y))
            if (U.underlying[n] == v)
                found = n;
        toU.on_morphisms.push_back(found);
    }
    toD.validate();
    toU.validate();
    return pairing(G.pullback, nerve_map(toD, NK, G.nerve_source), nerve_map(toU, NK, G.nerve_under));
}

// ---------------------------------------------------------------------------
// Theorem B reports
// ---------------------------------------------------------------------------

struct TheoremBReport
{
    std::string setup;  ///< "comma" or "action"
    std::string object;
    LocalizationSpec spec;
    std::string oracle;
    std::size_t trunc = 0;

    std::string fibration_hypothesis;  ///< "yes", "no", ... or "discharged-discrete-base"
    std::optional<FibrationVerdict> fibration;
    std::string acts_by = "yes";
    std::size_t acts_by_checked = 0;
    std::optional<std::string> acts_by_witness;
    std::optional<std::size_t> acts_by_level;
    std::optional<EquivalenceResult> acts_by_result;

    std::vector<std::string> fiber_homology;
    std::vector<std::string> oracle_homology;
    std::vector<DegreeComparison> comparison;
    std::optional<EquivalenceResult> comparison_map;
    std::optional<FibrationVerdict> oracle_certificate;

    Outcome outcome = Outcome::not_checkable;
    std::string detail;

    int exit_code() const { return hfib::exit_code(outcome); }

    Json to_json() const
    {
        Json j;
        j["schema"] = kReportSchema;
        j["report"] = "theorem-b";
        j["setup"] = setup;
        j["object"] = object;
        j["spec"] = hfib::to_json(spec);
        j["oracle"] = oracle;
        j["trunc"] = trunc;
        Json h;
        h["fibration"] = fibration_hypothesis;
        if (fibration)
            h["fibration_check"] = hfib::to_json(*fibration);
        h["acts_by"] = acts_by;
        h["acts_by_checked"] = acts_by_checked;
        h["acts_by_witness"] = acts_by_witness ? Json(*acts_by_witness) : Json(nullptr);
        h["acts_by_level"] = acts_by_level ? Json(*acts_by_level) : Json(nullptr);
        if (acts_by_result)
            h["acts_by_result"] = hfib::to_json(*acts_by_result);
        j["hypotheses"] = h;
        j["fiber_homology"] = fiber_homology;
        j["oracle_homology"] = oracle_homology;
        j["comparison"] = Json::array();
        for (const auto& c : comparison)
            j["comparison"].push_back(hfib::to_json(c));
        j["comparison_map"] = comparison_map ? hfib::to_json(*comparison_map) : Json(nullptr);
        j["oracle_certificate"] = oracle_certificate ? hfib::to_json(*oracle_certificate) : Json(nullptr);
        j["outcome"] = to_string(outcome);
        j["exit_code"] = exit_code();
        j["detail"] = detail;
        return j;
    }
};

namespace detail {

/// Fill the comparison fields and the outcome once both sides are known.
inline void conclude(TheoremBReport& r)
{
    r.comparison = compare_degrees(r.fiber_homology, r.oracle_homology);
    for (const auto& c : r.comparison)
        if (!c.isomorphic)
        {
            r.outcome = Outcome::refuted;
            r.detail = "H_" + std::to_string(c.degree) + " of the fiber is " + c.fiber + " but the oracle gives " +
                       c.oracle;
            return;
        }
    if (r.comparison_map && r.comparison_map->verdict == Verdict::no)
    {
        r.outcome = Outcome::refuted;
        r.detail = "the comparison map is not an equivalence: " + r.comparison_map->detail;
        return;
    }
    if (r.comparison_map && r.comparison_map->verdict != Verdict::yes)
    {
        r.outcome = Outcome::not_checkable;
        r.detail = "comparison map: " + r.comparison_map->detail;
        return;
    }
    r.outcome = Outcome::confirmed;
    r.detail = "fiber and homotopy fiber agree through degree " + std::to_string(r.spec.range);
}

inline std::vector<std::string> known_groups(const KnownAnswer& k, const std::string& label, std::size_t range)
{
    std::vector<std::string> out;
    for (std::size_t d = 0; d <= range; ++d)
    {
        auto g = k.expected(label, d);
        if (!g)
            throw InvalidArgument("known-answer table has no entry for degree " + std::to_string(d));
        out.push_back(*g);
    }
    return out;
}

inline Index nerve_vertex(const FiniteCategory& C, std::size_t N, Index c) { return NerveIndex(C, N)(0, {c}); }

}  // namespace detail

/// Classical setting: X_c = N(f/c), acted on by a finite category C.
inline TheoremBReport theorem_b_verify(const Functor& f, Index c, std::size_t N, const LocalizationSpec& spec,
                                       const OracleChoice& oracle)
{
    f.validate();
    const FiniteCategory& C = *f.target;
    TheoremBReport r;
    r.setup = "comma";
    r.object = C.object_name(c);
    r.spec = spec;
    r.oracle = to_string(oracle.kind);
    r.trunc = N;
    if (spec.range >= N)
    {
        r.outcome = Outcome::not_checkable;
        r.detail = "range must be below truncation";
        return r;
    }
    // Over a discrete object space a fiberwise Kan replacement keeps every fiber's homotopy type.
    r.fibration_hypothesis = "discharged-discrete-base";

    std::vector<CommaCategory> commas;
    for (Index x = 0; x < C.object_count(); ++x)
        commas.push_back(comma_category(f, x));
    std::vector<SSetPtr> nerves(commas.size());
    for (Index x = 0; x < commas.size(); ++x)
        nerves[x] = share(nerve(commas[x].category, N));
    for (Index a = 0; a < C.morphism_count(); ++a)
    {
        Index s = C.source(a), t = C.target(a);
        Functor T = transition_functor(f, commas[s], commas[t], a);
        auto res = is_equivalence(spec, nerve_map(T, nerves[s], nerves[t]));
        ++r.acts_by_checked;
        if (res.verdict != Verdict::yes)
        {
            r.acts_by = to_string(res.verdict);
            r.acts_by_witness = C.morphism(a).name;
            r.acts_by_level = 0;
            r.acts_by_result = res;
            r.outcome = res.verdict == Verdict::no ? Outcome::hypotheses_not_met : Outcome::not_checkable;
            r.detail = "the transition along '" + C.morphism(a).name + "' is not a " + to_string(spec.kind) +
                       " equivalence; the theorem makes no claim";
            return r;
        }
    }
    const SSetPtr& fiber = nerves[c];
    r.fiber_homology = group_strings(homology_of(*fiber, spec.range));

    try
    {
        switch (oracle.kind)
        {
        case OracleKind::groupoid_cover: {
            auto G = groupoid_cover_oracle(f, c, N);
            r.oracle_certificate = G.cover;
            r.oracle_homology = group_strings(homology_of(*G.object(), spec.range));
            r.comparison_map = is_equivalence(spec, comma_to_cover(f, commas[c], fiber, G));
            break;
        }
        case OracleKind::fibration_pullback: {
            auto ND = share(nerve(*f.source, N));
            auto NC = share(nerve(C, N));
            SMap leg = nerve_map(f, ND, NC);
            auto fv = check_fibration(leg, FibrationKind::kan, std::min(spec.range + 1, N - 1));
            r.oracle_certificate = fv;
            if (fv.result != Verdict::yes)
                throw PreconditionUnverified("fibration-pullback: BD -> BC failed the Kan check");
            auto pt = share(point(N));
            auto P = pullback(yoneda_map(pt, NC, 0, detail::nerve_vertex(C, N, c)), leg);
            r.oracle_homology = group_strings(homology_of(*P.object, spec.range));
            break;
        }
        case OracleKind::known_answer: {
            if (!oracle.known)
                throw UnsupportedOracle("known-answer: no table supplied");
            r.oracle = "known-answer:" + oracle.known->source;
            r.oracle_homology = detail::known_groups(*oracle.known, C.object_name(c), spec.range);
            break;
        }
        }
    }
    catch (const UnsupportedOracle& e)
    {
        r.outcome = Outcome::not_checkable;
        r.detail = e.what();
        return r;
    }
    catch (const PreconditionUnverified& e)
    {
        r.outcome = Outcome::not_checkable;
        r.detail = e.what();
        return r;
    }
    detail::conclude(r);
    return r;
}

/// General setting: a category object acting on X, compared at a vertex c of ob(C).
inline TheoremBReport theorem_b_verify(const InternalAction& A, Index c, const LocalizationSpec& spec,
                                       const OracleChoice& oracle, const std::string& object_name = {})
{
    const std::size_t N = A.total()->trunc();
    TheoremBReport r;
    r.setup = "action";
    r.object = object_name.empty() ? A.base().ob()->name(0, c) : object_name;
    r.spec = spec;
    r.oracle = to_string(oracle.kind);
    r.trunc = N;
    if (spec.range >= N)
    {
        r.outcome = Outcome::not_checkable;
        r.detail = "range must be below truncation";
        return r;
    }
    auto fv = check_fibration(A.pi(), FibrationKind::kan, std::min(spec.range + 1, N - 1));
    r.fibration = fv;
    r.fibration_hypothesis = to_string(fv.result);
    if (fv.result != Verdict::yes)
    {
        r.outcome = fv.result == Verdict::no ? Outcome::hypotheses_not_met : Outcome::not_checkable;
        r.detail = "pi: X -> ob(C) is not a fibration; the theorem makes no claim";
        return r;
    }
    auto ab = acts_by_check(A, spec);
    r.acts_by = to_string(ab.verdict);
    r.acts_by_checked = ab.checked;
    if (ab.witness)
    {
        r.acts_by_witness = ab.witness->name;
        r.acts_by_level = ab.witness->level;
        r.acts_by_result = ab.witness->result;
    }
    if (ab.verdict != Verdict::yes)
    {
        r.outcome = ab.verdict == Verdict::no ? Outcome::hypotheses_not_met : Outcome::not_checkable;
        r.detail = ab.witness ? "phi = " + ab.witness->name + " at level " + std::to_string(ab.witness->level) +
                                    " does not act by an equivalence; the theorem makes no claim"
                              : "acts-by check " + to_string(ab.verdict);
        return r;
    }
    Fiber F = fiber(A, 0, c);
    r.fiber_homology = group_strings(homology_of(*F.object(), spec.range));
    try
    {
        switch (oracle.kind)
        {
        case OracleKind::groupoid_cover:
            throw UnsupportedOracle("groupoid-cover applies to functors into a finite groupoid, not to actions");
        case OracleKind::fibration_pullback: {
            auto AC = action_category(A);
            auto BX = classifying_space(*AC.category);
            auto BC = classifying_space(A.base());
            SMap p = classifying_map(AC.to_base, BX, BC);
            auto cert = check_fibration(p, FibrationKind::kan, std::min(spec.range + 1, N - 1));
            r.oracle_certificate = cert;
            if (cert.result != Verdict::yes)
                throw PreconditionUnverified("fibration-pullback: B X_C -> B C failed the Kan check");
            auto sq = fiber_square(A, c);
            r.oracle_homology = group_strings(homology_of(*sq.comparison.target, spec.range));
            r.comparison_map = is_equivalence(spec, sq.comparison);
            break;
        }
        case OracleKind::known_answer: {
            if (!oracle.known)
                throw UnsupportedOracle("known-answer: no table supplied");
            r.oracle = "known-answer:" + oracle.known->source;
            r.oracle_homology = detail::known_groups(*oracle.known, r.object, spec.range);
            break;
        }
        }
    }
    catch (const UnsupportedOracle& e)
    {
        r.outcome = Outcome::not_checkable;
        r.detail = e.what();
        return r;
    }
    catch (const PreconditionUnverified& e)
    {
        r.outcome = Outcome::not_checkable;
        r.detail = e.what();
        return r;
    }
    detail::conclude(r);
    return r;
}

// ---------------------------------------------------------------------------
// Diagrams and homotopy colimits
// ---------------------------------------------------------------------------

/// A functor from a finite category into truncated simplicial sets.
struct Diagram
{
    std::shared_ptr<const FiniteCategory> shape;
    std::vector<SSetPtr> objects;
    std::vector<SMap> arrows;  ///< one per morphism of the shape

    std::size_t trunc() const { return objects.at(0)->trunc(); }

    void validate() const
    {
        const FiniteCategory& I = *shape;
        if (objects.size() != I.object_count() || arrows.size() != I.morphism_count())
            throw CorruptInput("diagram: need one object per shape object and one map per shape morphism");
        for (Index a = 0; a < I.morphism_count(); ++a)
        {
            const SMap& m = arrows[a];
            if (!(*m.source == *objects[I.source(a)]) || !(*m.target == *objects[I.target(a)]))
                throw CorruptInput("diagram: map for '" + I.morphism(a).name + "' has the wrong endpoints");
            m.validate();
            if (I.is_identity(a) && m.component != identity_map(m.source).component)
                throw CorruptInput("diagram: identity '" + I.morphism(a).name + "' is not sent to an identity");
        }
        for (Index a = 0; a < I.morphism_count(); ++a)
            for (Index b = 0; b < I.morphism_count(); ++b)
                if (I.target(a) == I.source(b) &&
                    compose(arrows[b], arrows[a]).component != arrows[I.then(a, b)].component)
                    throw CorruptInput("diagram: composition not preserved at (" + I.morphism(a).name + ", " +
                                       I.morphism(b).name + ")");
    }
};

/**
 * hocolim X = B of the action category of I acting on the coproduct of the X_i,
 * with morphisms (alpha, x) for x in X_source(alpha).
 */
struct Hocolim
{
    CategoryPtr base;  ///< I as a constant category object
    CoproductObject total;
    std::shared_ptr<const InternalAction> action;
    ActionCategory category;
    ClassifyingSpace space;
    ClassifyingSpace base_space;
    SMap to_base;  ///< hocolim X -> BI

    const SSetPtr& object() const { return space.object; }

    /// X_i -> hocolim X.
    SMap inclusion(Index i) const
    {
        return compose(unit_strings(*category.category, space), total.inclusions.at(i));
    }
};

inline Hocolim hocolim(const Diagram& X)
{
    X.validate();
    const FiniteCategory& I = *X.shape;
    const std::size_t N = X.trunc();
    Hocolim H;
    H.base = std::make_shared<const InternalCategory>(constant_category(I, N));
    H.total = coproduct(X.objects, N, I.objects());
    SMap pi{H.total.object, H.base->ob(), std::vector<std::vector<Index>>(N + 1)};
    for (std::size_t n = 0; n <= N; ++n)
        for (auto [i, x] : H.total.origin[n])
            pi.component[n].push_back(i);
    const auto& total = H.total;
    H.action = std::make_shared<const InternalAction>(H.base, H.total.object, pi,
                                                      [&](std::size_t n, Index alpha, Index k) -> Index {
                                                          auto [i, x] = total.origin[n][k];
                                                          (void)i;
                                                          Index j = I.target(alpha);
                                                          return total.inclusions[j](n, X.arrows[alpha](n, x));
                                                      });
    H.category = action_category(*H.action);
    H.space = classifying_space(*H.category.category);
    H.base_space = classifying_space(*H.base);
    H.to_base = classifying_map(H.category.to_base, H.space, H.base_space);
    return H;
}

/// A natural transformation Y -> X of diagrams on the same shape.
struct Transformation
{
    std::vector<SMap> components;

    void validate(const Diagram& Y, const Diagram& X) const
    {
        const FiniteCategory& I = *X.shape;
        if (Y.shape != X.shape && !(*Y.shape == *X.shape))
            throw CorruptInput("transformation: diagrams have different shapes");
        if (components.size() != I.object_count())
            throw CorruptInput("transformation: need one component per object");
        for (Index i = 0; i < I.object_count(); ++i)
        {
            components[i].validate();
            if (!(*components[i].source == *Y.objects[i]) || !(*components[i].target == *X.objects[i]))
                throw CorruptInput("transformation: component at '" + I.object_name(i) + "' has wrong endpoints");
        }
        for (Index a = 0; a < I.morphism_count(); ++a)
            if (compose(components[I.target(a)], Y.arrows[a]).component !=
                compose(X.arrows[a], components[I.source(a)]).component)
                throw CorruptInput("transformation: not natural at '" + I.morphism(a).name + "'");
    }
};

/// hocolim Y -> hocolim X induced by a transformation.
inline SMap hocolim_map(const Hocolim& HY, const Hocolim& HX, const Transformation& f)
{
    const std::size_t N = HY.total.object->trunc();
    SMap on_ob{HY.total.object, HX.total.object, std::vector<std::vector<Index>>(N + 1)};
    for (std::size_t n = 0; n <= N; ++n)
        for (auto [i, y] : HY.total.origin[n])
            on_ob.component[n].push_back(HX.total.inclusions[i](n, f.components[i](n, y)));
    std::vector<std::map<std::pair<Index, Index>, Index>> lookup(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
        for (Index k = 0; k < HX.category.pairs[n].size(); ++k)
            lookup[n].emplace(HX.category.pairs[n][k], k);
    SMap on_mor{HY.category.category->mor(), HX.category.category->mor(), std::vector<std::vector<Index>>(N + 1)};
    for (std::size_t n = 0; n <= N; ++n)
        for (auto [alpha, y] : HY.category.pairs[n])
            on_mor.component[n].push_back(lookup[n].at({alpha, on_ob(n, y)}));
    InternalFunctor F{HY.category.category.get(), HX.category.category.get(), on_ob, on_mor};
    return classifying_map(F, HY.space, HX.space);
}

// ---------------------------------------------------------------------------
// Puppe
// ---------------------------------------------------------------------------

struct SquareCheck
{
    Index alpha = kNone;
    std::string name;
    std::string method;
    Verdict verdict = Verdict::yes;
    std::string detail;
};

struct PuppeReport
{
    std::string base_object;
    LocalizationSpec spec;
    std::string oracle;
    std::size_t trunc = 0;
    std::vector<SquareCheck> squares;
    std::optional<std::string> failing_square;
    std::vector<std::string> fiber_homology;  ///< Y_{i0}
    std::vector<std::string> oracle_homology;
    std::vector<DegreeComparison> comparison;
    std::optional<EquivalenceResult> comparison_map;
    std::optional<FibrationVerdict> oracle_certificate;
    Outcome outcome = Outcome::not_checkable;
    std::string detail;

    int exit_code() const { return hfib::exit_code(outcome); }

    Json to_json() const
    {
        Json j;
        j["schema"] = kReportSchema;
        j["report"] = "puppe";
        j["object"] = base_object;
        j["spec"] = hfib::to_json(spec);
        j["oracle"] = oracle;
        j["trunc"] = trunc;
        j["squares"] = Json::array();
        for (const auto& s : squares)
            j["squares"].push_back(Json{{"morphism", s.name},
                                        {"method", s.method},
                                        {"verdict", to_string(s.verdict)},
                                        {"detail", s.detail}});
        j["failing_square"] = failing_square ? Json(*failing_square) : Json(nullptr);
        j["fiber_homology"] = fiber_homology;
        j["oracle_homology"] = oracle_homology;
        j["comparison"] = Json::array();
        for (const auto& c : comparison)
            j["comparison"].push_back(hfib::to_json(c));
        j["comparison_map"] = comparison_map ? hfib::to_json(*comparison_map) : Json(nullptr);
        j["oracle_certificate"] = oracle_certificate ? hfib::to_json(*oracle_certificate) : Json(nullptr);
        j["outcome"] = to_string(outcome);
        j["exit_code"] = exit_code();
        j["detail"] = detail;
        return j;
    }
};

/**
 * Check each naturality square (through a Kan leg f_j), then compare Y_{i0}
 * with X_{i0} x_{hocolim X} hocolim Y, certified when hocolim Y -> hocolim X passes the Kan check.
 */
inline PuppeReport puppe_check(const Diagram& Y, const Diagram& X, const Transformation& f, Index i0,
                               const LocalizationSpec& spec, const OracleChoice& oracle)
{
    f.validate(Y, X);
    const FiniteCategory& I = *X.shape;
    const std::size_t N = X.trunc();
    PuppeReport r;
    r.base_object = I.object_name(i0);
    r.spec = spec;
    r.oracle = to_string(oracle.kind);
    r.trunc = N;
    if (spec.range >= N)
    {
        r.outcome = Outcome::not_checkable;
        r.detail = "range must be below truncation";
        return r;
    }
    const std::size_t n_max = std::min(spec.range + 1, N - 1);
    std::vector<std::optional<FibrationVerdict>> leg(I.object_count());
    bool unknown = false;
    for (Index a = 0; a < I.morphism_count(); ++a)
    {
        if (I.is_identity(a))
            continue;
        SquareCheck sq;
        sq.alpha = a;
        sq.name = I.morphism(a).name;
        Index i = I.source(a), j = I.target(a);
        if (!leg[j])
            leg[j] = check_fibration(f.components[j], FibrationKind::kan, n_max);
        if (leg[j]->result != Verdict::yes)
        {
            sq.method = "none";
            sq.verdict = Verdict::not_checkable;
            sq.detail = "f at '" + I.object_name(j) + "' is not a Kan fibration; the square has no certified homotopy pullback";
            unknown = true;
        }
        else
        {
            sq.method = "fibration-pullback";
            auto P = pullback(X.arrows[a], f.components[j]);
            auto res = is_equivalence(spec, pairing(P, f.components[i], Y.arrows[a]));
            sq.verdict = res.verdict;
            sq.detail = res.verdict == Verdict::yes ? "cartesian" : res.detail;
        }
        r.squares.push_back(sq);
        if (sq.verdict == Verdict::no && !r.failing_square)
            r.failing_square = sq.name;
    }
    if (r.failing_square)
    {
        r.outcome = Outcome::hypotheses_not_met;
        r.detail = "the naturality square at '" + *r.failing_square + "' is not homotopy cartesian";
        return r;
    }
    if (unknown)
    {
        r.outcome = Outcome::not_checkable;
        r.detail = "some naturality squares could not be certified";
        return r;
    }
    r.fiber_homology = group_strings(homology_of(*Y.objects[i0], spec.range));
    try
    {
        switch (oracle.kind)
        {
        case OracleKind::groupoid_cover:
            throw UnsupportedOracle("groupoid-cover does not apply to diagram transformations");
        case OracleKind::fibration_pullback: {
            auto HY = hocolim(Y);
            auto HX = hocolim(X);
            SMap g = hocolim_map(HY, HX, f);
            auto cert = check_fibration(g, FibrationKind::kan, n_max);
            r.oracle_certificate = cert;
            if (cert.result != Verdict::yes)
                throw PreconditionUnverified("fibration-pullback: hocolim Y -> hocolim X failed the Kan check");
            auto P = pullback(HX.inclusion(i0), g);
            r.oracle_homology = group_strings(homology_of(*P.object, spec.range));
            r.comparison_map = is_equivalence(spec, pairing(P, f.components[i0], HY.inclusion(i0)));
            break;
        }
        case OracleKind::known_answer: {
            if (!oracle.known)
                throw UnsupportedOracle("known-answer: no table supplied");
            r.oracle = "known-answer:" + oracle.known->source;
            r.oracle_homology = detail::known_groups(*oracle.known, r.base_object, spec.range);
            break;
        }
        }
    }
    catch (const UnsupportedOracle& e)
    {
        r.outcome = Outcome::not_checkable;
        r.detail = e.what();
        return r;
    }
    catch (const PreconditionUnverified& e)
    {
        r.outcome = Outcome::not_checkable;
        r.detail = e.what();
        return r;
    }
    r.comparison = compare_degrees(r.fiber_homology, r.oracle_homology);
    for (const auto& c : r.comparison)
        if (!c.isomorphic)
        {
            r.outcome = Outcome::refuted;
            r.detail = "H_" + std::to_string(c.degree) + " differs from the homotopy pullback";
            return r;
        }
    if (r.comparison_map && r.comparison_map->verdict != Verdict::yes)
    {
        r.outcome = r.comparison_map->verdict == Verdict::no ? Outcome::refuted : Outcome::not_checkable;
        r.detail = r.comparison_map->detail;
        return r;
    }
    r.outcome = Outcome::confirmed;
    r.detail = "the square over '" + r.base_object + "' is a homotopy pullback through degree " +
               std::to_string(spec.range);
    return r;
}

}  // namespace hfib
