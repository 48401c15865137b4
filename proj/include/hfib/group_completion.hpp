/**
 * Telescopes of right multiplications, homology with pi_0 inverted, and the
 * group completion pipeline.
 *
 * A telescope is traced per component of its last stage ("thread"). Graded
 * monoids label a thread by grade minus the total grade of the word; ungraded
 * ones by the component's name. A thread is stable in degree k when the last
 * transition into it is an isomorphism on H_k.
 */
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "equivalence.hpp"
#include "fibration.hpp"
#include "internal_category.hpp"
#include "monoid.hpp"
#include "report.hpp"

namespace hfib {

struct TelescopeThread
{
    std::string label;
    std::optional<int> shift;           ///< graded label
    std::vector<Index> history;         ///< component at stage 0..s, kNone before it appears
    std::vector<std::string> groups;    ///< H_k at the last stage
    std::vector<bool> stable;           ///< per degree
    std::vector<std::size_t> stable_from;  ///< per degree: earliest stage from which every transition is an iso
};

/// Right multiplication by a vertex w between two components, as an induced map per degree.
struct Transition
{
    Index from = kNone, to = kNone, by = kNone;
    SMap map;
    std::vector<IntMatrix> matrices;  ///< per degree, on generators
    std::vector<bool> iso;
};

struct Telescope
{
    const MonoidObject* monoid = nullptr;
    std::vector<Index> word;  ///< w_1 .. w_s
    std::size_t range = 0;
    PontryaginRing ring;
    std::vector<Transition> transitions;
    std::vector<TelescopeThread> threads;

    std::size_t stages() const { return word.size(); }

    const Transition& transition(Index from, Index by) const
    {
        for (const auto& t : transitions)
            if (t.from == from && t.by == by)
                return t;
        throw std::logic_error("telescope: missing transition");
    }

    /// M acting on the last stage by left multiplication.
    InternalAction action() const { return monoid->self_action(); }

    Json to_json() const
    {
        Json j;
        j["monoid"] = monoid->name();
        std::vector<std::string> w;
        for (Index v : word)
            w.push_back(monoid->space()->name(0, v));
        j["word"] = w;
        j["range"] = range;
        j["threads"] = Json::array();
        for (const auto& t : threads)
        {
            Json e{{"label", t.label}, {"groups", t.groups}, {"stable_from", t.stable_from}};
            std::vector<bool> st(t.stable.begin(), t.stable.end());
            e["stable"] = st;
            j["threads"].push_back(e);
        }
        return j;
    }
};

namespace detail {

/// Right multiplication by w restricted to component c; throws if it leaves the window part-way.
inline Transition right_transition(const PontryaginRing& R, Index c, Index w)
{
    const MonoidObject& M = *R.monoid;
    Index d = R.product_component(c, R.pi.components.of_vertex[w]);
    if (d == kNone)
        throw ContractViolation("telescope: right multiplication leaves the window");
    const SubObject& from = R.parts[c];
    const SubObject& to = R.parts[d];
    const std::size_t N = M.trunc();
    Transition t;
    t.from = c;
    t.to = d;
    t.by = w;
    t.map = SMap{from.object, to.object, std::vector<std::vector<Index>>(N + 1)};
    for (std::size_t n = 0; n <= N; ++n)
        for (Index x : from.inclusion.component[n])
        {
            Index y = M.mul(n, x, M.constant(n, w));
            if (y == kNone || to.position[n][y] == kNone)
                throw ContractViolation("telescope: right multiplication is only partly defined on a component");
            t.map.component[n].push_back(to.position[n][y]);
        }
    t.map.validate();
    for (std::size_t k = 0; k <= R.range; ++k)
    {
        auto h = induced_map(t.map, R.homology[c], R.homology[d], k);
        t.matrices.push_back(h.matrix);
        t.iso.push_back(h.is_isomorphism());
    }
    return t;
}

}  // namespace detail

/// The first `stages` steps of M -> M -> ... along a periodic word over the sections.
inline Telescope telescope(const MonoidObject& M, const std::vector<Index>& period, std::size_t stages,
                           std::size_t range)
{
    if (period.empty())
        throw InvalidArgument("telescope: the word is empty");
    for (Index w : period)
        if (std::find(M.sections().begin(), M.sections().end(), w) == M.sections().end())
            throw InvalidArgument("telescope: '" + M.space()->name(0, w) + "' is not a declared section");
    Telescope T;
    T.monoid = &M;
    T.range = range;
    for (std::size_t j = 0; j < stages; ++j)
        T.word.push_back(period[j % period.size()]);
    T.ring = pontryagin_ring(M, range);
    const auto& R = T.ring;
    const std::size_t comps = R.pi.size();

    std::set<Index> letters(T.word.begin(), T.word.end());
    for (Index w : letters)
        for (Index c = 0; c < comps; ++c)
            if (R.product_component(c, R.pi.components.of_vertex[w]) != kNone)
                T.transitions.push_back(detail::right_transition(R, c, w));

    int total_grade = 0;
    for (Index w : T.word)
        total_grade += M.grade(0, w);
    for (Index c = 0; c < comps; ++c)
    {
        TelescopeThread th;
        th.history.assign(stages + 1, kNone);
        th.history[stages] = c;
        for (std::size_t j = stages; j-- > 0;)
        {
            Index cur = th.history[j + 1];
            if (cur == kNone)
                break;
            Index pred = kNone;
            for (const auto& t : T.transitions)
                if (t.by == T.word[j] && t.to == cur)
                {
                    if (pred != kNone)
                        throw InvalidArgument("telescope: right multiplication by '" +
                                              M.space()->name(0, T.word[j]) +
                                              "' merges components; threads need a unique predecessor");
                    pred = t.from;
                }
            th.history[j] = pred;
        }
        Index rep = R.pi.representative[c];
        if (M.graded())
        {
            th.shift = M.grade(0, rep) - total_grade;
            th.label = std::to_string(*th.shift);
        }
        else
            th.label = M.space()->name(0, rep);
        for (std::size_t k = 0; k <= range; ++k)
        {
            th.groups.push_back(R.homology[c].groups[k].str());
            std::size_t from = stages;
            for (std::size_t j = stages; j-- > 0;)
            {
                if (th.history[j] == kNone || !T.transition(th.history[j], T.word[j]).iso[k])
                    break;
                from = j;
            }
            th.stable.push_back(from < stages);
            th.stable_from.push_back(from);
        }
        T.threads.push_back(std::move(th));
    }
    std::sort(T.threads.begin(), T.threads.end(), [](const TelescopeThread& a, const TelescopeThread& b) {
        if (a.shift && b.shift)
            return *a.shift < *b.shift;
        return a.label < b.label;
    });
    return T;
}

// ---------------------------------------------------------------------------
// Localized homology
// ---------------------------------------------------------------------------

struct LocalizedEntry
{
    std::string label;
    std::size_t degree = 0;
    std::string group;
    bool stabilized = false;
    bool telescope_agrees = true;  ///< algebraic colimit equals the telescope's homology
};

struct LocalizedHomology
{
    bool grouplike = false;
    RingCheck axioms;
    RingCheck centrality;
    bool sections_generate = true;
    std::vector<LocalizedEntry> entries;
    std::optional<Telescope> telescope;

    /// Entries stabilized in degree k.
    std::vector<const LocalizedEntry*> stable_in(std::size_t k) const
    {
        std::vector<const LocalizedEntry*> out;
        for (const auto& e : entries)
            if (e.degree == k && e.stabilized)
                out.push_back(&e);
        return out;
    }

    Json to_json() const
    {
        Json j{{"grouplike", grouplike},
               {"ring_axioms", Json{{"ok", axioms.ok}, {"checked", axioms.checked}, {"witness", axioms.witness}}},
               {"centrality",
                Json{{"ok", centrality.ok}, {"checked", centrality.checked}, {"witness", centrality.witness}}},
               {"sections_generate", sections_generate}};
        j["entries"] = Json::array();
        for (const auto& e : entries)
            j["entries"].push_back(Json{{"label", e.label},
                                        {"degree", e.degree},
                                        {"group", e.group},
                                        {"stabilized", e.stabilized},
                                        {"telescope_agrees", e.telescope_agrees}});
        j["telescope"] = telescope ? telescope->to_json() : Json(nullptr);
        return j;
    }
};

namespace detail {

/// Components reachable from the unit by multiplying with section components.
inline bool sections_generate_pi0(const MonoidObject& M, const Pi0Monoid& P)
{
    const std::size_t k = P.size();
    std::set<Index> reached{P.unit};
    std::vector<Index> todo{P.unit};
    while (!todo.empty())
    {
        Index c = todo.back();
        todo.pop_back();
        for (Index s : M.sections())
        {
            Index cs = P.components.of_vertex[s];
            for (Index next : {P.table[c * k + cs], P.table[cs * k + c]})
                if (next != kNone && reached.insert(next).second)
                    todo.push_back(next);
        }
    }
    return reached.size() == k;
}

/// Right multiplication by w on H_k computed with the Pontryagin product.
inline IntMatrix pontryagin_right(const PontryaginRing& R, Index c, Index d, Index w, std::size_t k)
{
    std::map<Index, Integer> lw{{w, 1}};
    const auto& src = R.homology[c].groups[k];
    const auto& dst = R.homology[d].groups[k];
    IntMatrix m(dst.generator_count(), src.generator_count());
    for (std::size_t g = 0; g < src.generator_count(); ++g)
    {
        auto coords = R.express(d, k, R.product(k, R.lift(c, k, g), 0, lw));
        for (std::size_t r = 0; r < coords.size(); ++r)
            m(r, g) = coords[r];
    }
    return m;
}

}  // namespace detail

/**
 * h_*(M)[pi_0^-1] as the per-thread colimit of right multiplications, computed
 * with the Pontryagin product and compared with the telescope's own homology.
 */
inline LocalizedHomology localized_homology(const MonoidObject& M, std::size_t range,
                                            std::optional<std::vector<Index>> word = {}, std::size_t stages = 0)
{
    LocalizedHomology L;
    auto R = pontryagin_ring(M, range);
    L.axioms = check_ring_axioms(R);
    if (!L.axioms.ok)
        throw HypothesesNotMet("localized_homology: Pontryagin product fails: " + L.axioms.witness);
    L.grouplike = R.pi.is_group();
    if (L.grouplike)
    {
        for (std::size_t c = 0; c < R.pi.size(); ++c)
            for (std::size_t k = 0; k <= range; ++k)
                L.entries.push_back({M.space()->name(0, R.pi.representative[c]), k,
                                     R.homology[c].groups[k].str(), true, true});
        std::sort(L.entries.begin(), L.entries.end(), [](const auto& a, const auto& b) {
            return std::tie(a.label, a.degree) < std::tie(b.label, b.degree);
        });
        return L;
    }
    L.centrality = check_centrality(R);
    if (!L.centrality.ok)
        throw HypothesesNotMet("localized_homology: pi_0 is not central: " + L.centrality.witness);
    if (M.sections().empty())
        throw HypothesesNotMet("localized_homology: no sections declared");
    L.sections_generate = detail::sections_generate_pi0(M, R.pi);
    if (!L.sections_generate)
        throw HypothesesNotMet("localized_homology: the sections do not generate pi_0");

    std::vector<Index> period = word.value_or(M.sections());
    if (stages == 0)
        stages = M.window() ? static_cast<std::size_t>(*M.window()) : period.size();
    L.telescope = telescope(M, period, stages, range);
    const Telescope& T = *L.telescope;
    for (const auto& th : T.threads)
        for (std::size_t k = 0; k <= range; ++k)
        {
            LocalizedEntry e{th.label, k, th.groups[k], false, true};
            // Algebraic colimit: the last Pontryagin transition must be invertible.
            std::size_t s = T.stages();
            if (s > 0 && th.history[s - 1] != kNone)
            {
                Index c = th.history[s - 1], d = th.history[s];
                IntMatrix alg = detail::pontryagin_right(T.ring, c, d, T.word[s - 1], k);
                GroupHom h{&T.ring.homology[c].groups[k], &T.ring.homology[d].groups[k], alg};
                e.stabilized = h.is_isomorphism();
            }
            for (std::size_t j = 0; j < s; ++j)
                if (th.history[j] != kNone)
                {
                    const auto& t = T.transition(th.history[j], T.word[j]);
                    IntMatrix alg = detail::pontryagin_right(T.ring, t.from, t.to, t.by, k);
                    e.telescope_agrees = e.telescope_agrees && alg == t.matrices[k];
                }
            e.telescope_agrees = e.telescope_agrees && e.stabilized == bool(th.stable[k]);
            L.entries.push_back(e);
        }
    return L;
}

// ---------------------------------------------------------------------------
// Group completion
// ---------------------------------------------------------------------------

struct KnownComparison
{
    std::string label;
    std::size_t degree = 0;
    std::string expected;
    std::string computed;
    std::string status;  ///< match, mismatch, unstabilized, missing
};

struct GroupCompletionReport
{
    std::string monoid;
    LocalizationSpec spec;
    std::size_t trunc = 0;
    std::string route;  ///< grouplike or telescope
    std::string acts_by = "yes";
    std::size_t acts_by_checked = 0;
    bool acts_by_vacuous = false;
    std::optional<std::string> acts_by_witness;
    std::optional<FibrationVerdict> vertex_shortcut;
    std::optional<bool> contractible;  ///< B(M_M) through the range
    std::optional<LocalizedHomology> localized;
    std::optional<std::string> known_source;
    std::vector<KnownComparison> known;
    Outcome outcome = Outcome::not_checkable;
    std::string detail;

    int exit_code() const { return hfib::exit_code(outcome); }

    Json to_json() const
    {
        Json j;
        j["schema"] = kReportSchema;
        j["report"] = "group-completion";
        j["monoid"] = monoid;
        j["spec"] = hfib::to_json(spec);
        j["trunc"] = trunc;
        j["route"] = route;
        j["acts_by"] = Json{{"verdict", acts_by},
                            {"checked", acts_by_checked},
                            {"vacuous", acts_by_vacuous},
                            {"witness", acts_by_witness ? Json(*acts_by_witness) : Json(nullptr)}};
        j["vertex_shortcut"] = vertex_shortcut ? hfib::to_json(*vertex_shortcut) : Json(nullptr);
        j["contractible"] = contractible ? Json(*contractible) : Json(nullptr);
        j["localized"] = localized ? localized->to_json() : Json(nullptr);
        j["known_answer"] = known_source ? Json(*known_source) : Json(nullptr);
        j["known"] = Json::array();
        for (const auto& k : known)
            j["known"].push_back(Json{{"label", k.label},
                                      {"degree", k.degree},
                                      {"expected", k.expected},
                                      {"computed", k.computed},
                                      {"status", k.status}});
        j["outcome"] = to_string(outcome);
        j["exit_code"] = exit_code();
        j["detail"] = detail;
        return j;
    }
};

struct GroupCompletionOptions
{
    std::optional<std::vector<Index>> word;
    std::size_t stages = 0;  ///< 0: the window size
};

namespace detail {

/**
 * The sections act on the last telescope stage by spec-equivalences, on pairs
 * of threads stable in the degree. Sections generate pi_0, so every vertex
 * acts through a product of them.
 */
inline void telescope_acts_by(const MonoidObject& M, const Telescope& T, GroupCompletionReport& r)
{
    const auto& R = T.ring;
    const std::size_t k_comp = R.pi.size();
    std::map<Index, const TelescopeThread*> by_comp;
    for (const auto& th : T.threads)
        by_comp[th.history.back()] = &th;
    for (Index phi : M.sections())
    {
        Index cp = R.pi.components.of_vertex[phi];
        for (const auto& th : T.threads)
        {
            Index c = th.history.back();
            Index d = R.pi.table[cp * k_comp + c];
            if (d == kNone)
                continue;
            const TelescopeThread& target = *by_comp.at(d);
            const SubObject& from = R.parts[c];
            const SubObject& to = R.parts[d];
            std::optional<SMap> left;
            for (std::size_t k = 0; k <= r.spec.range; ++k)
            {
                if (!th.stable[k] || !target.stable[k])
                    continue;
                if (!left)
                {
                    const std::size_t N = M.trunc();
                    left = SMap{from.object, to.object, std::vector<std::vector<Index>>(N + 1)};
                    for (std::size_t n = 0; n <= N; ++n)
                        for (Index x : from.inclusion.component[n])
                        {
                            Index y = M.mul(n, M.constant(n, phi), x);
                            if (y == kNone || to.position[n][y] == kNone)
                                throw ContractViolation("group completion: left multiplication leaves the window");
                            left->component[n].push_back(to.position[n][y]);
                        }
                }
                ++r.acts_by_checked;
                if (!induced_map(*left, R.homology[c], R.homology[d], k).is_isomorphism())
                {
                    r.acts_by = "no";
                    r.acts_by_witness = M.space()->name(0, phi) + " on thread " + th.label + " in degree " +
                                        std::to_string(k);
                    return;
                }
            }
        }
    }
    r.acts_by_vacuous = r.acts_by_checked == 0;
}

inline void compare_known(const KnownAnswer& ka, const LocalizedHomology& L, GroupCompletionReport& r)
{
    r.known_source = ka.source;
    for (const auto& e : ka.entries)
    {
        bool any = false;
        for (const auto& x : L.entries)
        {
            if (x.degree != e.degree || (e.label != "*" && e.label != x.label))
                continue;
            if (e.label == "*" && !x.stabilized)
                continue;
            any = true;
            std::string status = !x.stabilized ? "unstabilized" : same_group(x.group, e.group) ? "match" : "mismatch";
            r.known.push_back({x.label, e.degree, e.group, x.group, status});
        }
        if (!any)
            r.known.push_back({e.label, e.degree, e.group, "", "missing"});
    }
}

}  // namespace detail

/**
 * Grouplike route: M acts on itself by spec-equivalences and B(M_M) is acyclic.
 * Otherwise: telescope, localized homology, and M acting on the telescope by
 * spec-equivalences. Loop space homology is only compared with a known-answer table.
 */
inline GroupCompletionReport group_completion_verify(const MonoidObject& M, const LocalizationSpec& spec,
                                                     const std::optional<KnownAnswer>& expected = {},
                                                     const GroupCompletionOptions& opt = {})
{
    GroupCompletionReport r;
    r.monoid = M.name();
    r.spec = spec;
    r.trunc = M.trunc();
    if (spec.range >= M.trunc())
    {
        r.outcome = Outcome::not_checkable;
        r.detail = "range must be below truncation";
        return r;
    }
    auto pi = pi0_monoid(M);
    r.route = pi.is_group() ? "grouplike" : "telescope";
    try
    {
        r.localized = localized_homology(M, spec.range, opt.word, opt.stages);
    }
    catch (const HypothesesNotMet& e)
    {
        r.outcome = Outcome::hypotheses_not_met;
        r.detail = e.what();
        return r;
    }
    catch (const InvalidArgument& e)
    {
        r.outcome = Outcome::not_checkable;
        r.detail = e.what();
        return r;
    }
    catch (const ContractViolation& e)
    {
        r.outcome = Outcome::not_checkable;
        r.detail = e.what();
        return r;
    }

    if (pi.is_group())
    {
        auto ab = acts_by_check(M.self_action(), spec);
        r.acts_by = to_string(ab.verdict);
        r.acts_by_checked = ab.checked;
        if (ab.witness)
            r.acts_by_witness = ab.witness->name;
    }
    else
    {
        auto pt = share(point(M.trunc()));
        r.vertex_shortcut = check_fibration(map_to_point(M.space(), pt), FibrationKind::kan,
                                            std::min(spec.range + 1, M.trunc() - 1));
        if (r.vertex_shortcut->result != Verdict::yes)
        {
            r.outcome = Outcome::not_checkable;
            r.detail = "M is not Kan, so vertices do not certify the action";
            return r;
        }
        detail::telescope_acts_by(M, *r.localized->telescope, r);
    }
    auto AC = action_category(M.self_action());
    r.contractible = reduced_homology_vanishes(classifying_space(*AC.category).object, spec.range);

    if (r.acts_by != "yes")
    {
        r.outcome = r.acts_by == "no" ? Outcome::hypotheses_not_met : Outcome::not_checkable;
        r.detail = "M does not act by " + to_string(spec.kind) + " equivalences" +
                   (r.acts_by_witness ? " (" + *r.acts_by_witness + ")" : std::string());
        return r;
    }
    if (!*r.contractible)
    {
        r.outcome = Outcome::hypotheses_not_met;
        r.detail = "B(M_M) is not acyclic through the range";
        return r;
    }
    for (const auto& e : r.localized->entries)
        if (!e.telescope_agrees)
        {
            r.outcome = Outcome::refuted;
            r.detail = "the algebraic colimit and the telescope disagree on thread " + e.label + " in degree " +
                       std::to_string(e.degree);
            return r;
        }
    if (!expected)
    {
        r.outcome = Outcome::confirmed;
        r.detail = "hypotheses hold; no known-answer table, so loop space homology was not compared";
        return r;
    }
    detail::compare_known(*expected, *r.localized, r);
    r.outcome = Outcome::confirmed;
    r.detail = "localized homology matches the known-answer table";
    for (const auto& k : r.known)
    {
        if (k.status == "mismatch")
        {
            r.outcome = Outcome::refuted;
            r.detail = "H_" + std::to_string(k.degree) + " of thread " + k.label + " is " + k.computed +
                       ", the table says " + k.expected;
            return r;
        }
        if (k.status != "match")
        {
            r.outcome = Outcome::not_checkable;
            r.detail = "table entry for " + k.label + " in degree " + std::to_string(k.degree) + " is " + k.status;
        }
    }
    return r;
}

}  // namespace hfib
