/**
 * Command dispatch behind the hfib tool. A command takes a parsed document
 * and returns an exit code, a JSON report and a human-readable summary.
 *
 * Exit codes: 0 confirmed or success, 1 refuted (with witness), 2 hypotheses
 * not met, 3 not checkable or incomplete at truncation, 4 input error.
 */
#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fibration.hpp"
#include "group_completion.hpp"
#include "harness.hpp"
#include "input.hpp"
#include "report.hpp"
#include "site.hpp"

namespace hfib {

inline constexpr int kExitInputError = 4;

struct RunOptions
{
    std::optional<std::string> oracle;  ///< groupoid-cover, fibration-pullback or known-answer:FILE
    std::optional<std::size_t> n_max;   ///< fibration: top horn dimension (default: truncation - 1)
    std::optional<std::string> presheaf;
    std::optional<std::string> point;
    std::optional<std::string> map;
};

struct CommandResult
{
    int exit = 0;
    Json report;
    std::string text;
};

inline int exit_code(Verdict v)
{
    switch (v)
    {
    case Verdict::yes: return 0;
    case Verdict::no: return 1;
    default: return 3;
    }
}

inline const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"homology",        "fibration",        "validate-site",
                                                "stalk",           "sheafify",         "hocolim",
                                                "verify theorem-b", "verify puppe",     "verify group-completion"};
    return names;
}

namespace detail {

inline Json report_header(const std::string& command, const InputDocument& d)
{
    return Json{{"schema", kReportSchema}, {"command", command}, {"input", d.name}, {"kind", to_string(d.kind)},
                {"trunc", d.trunc}, {"range", d.range}};
}

[[noreturn]] inline void wrong_kind(const std::string& command, const InputDocument& d, const std::string& want)
{
    throw InvalidArgument("'" + command + "' expects a " + want + " document, got '" + to_string(d.kind) + "'");
}

inline KnownAnswer load_known_answer(const std::string& file)
{
    std::ifstream in(file);
    if (!in)
        throw InvalidArgument("cannot open known-answer table '" + file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    Json j;
    try
    {
        j = Json::parse(ss.str());
    }
    catch (const Json::parse_error& e)
    {
        throw SchemaError(file + ": " + line_column(ss.str(), e.byte), "malformed JSON");
    }
    auto slash = file.find_last_of('/');
    return known_answer_from_json(j, slash == std::string::npos ? file : file.substr(slash + 1));
}

inline OracleChoice oracle_choice(const RunOptions& o, OracleKind fallback)
{
    if (!o.oracle)
        return {fallback, {}};
    OracleChoice c{oracle_kind_from_string(*o.oracle), {}};
    if (c.kind == OracleKind::known_answer)
    {
        auto colon = o.oracle->find(':');
        if (colon == std::string::npos || colon + 1 == o.oracle->size())
            throw InvalidArgument("--oracle known-answer needs a file: known-answer:FILE");
        c.known = load_known_answer(o.oracle->substr(colon + 1));
    }
    return c;
}

inline std::string outcome_text(Outcome o, const std::string& detail)
{
    return "outcome: " + to_string(o) + (detail.empty() ? "" : " (" + detail + ")") + "\n";
}

inline std::string comparison_text(const std::vector<DegreeComparison>& cmp)
{
    std::ostringstream os;
    for (const auto& c : cmp)
        os << "  H_" << c.degree << ": fiber " << c.fiber << ", oracle " << c.oracle
           << (c.isomorphic ? "" : "  MISMATCH") << "\n";
    return os.str();
}

inline CommandResult run_homology(const InputDocument& d)
{
    SSetPtr X;
    if (d.kind == DocKind::sset)
        X = d.sset;
    else if (d.kind == DocKind::category && !d.functor)
        X = share(nerve(*d.category, d.trunc));
    else if (d.kind == DocKind::monoid)
        X = d.monoid->space();
    else
        wrong_kind("homology", d, "sset, category or monoid");
    auto H = homology_of(*X, d.range);
    CommandResult r;
    r.report = report_header("homology", d);
    r.report["homology"] = group_strings(H);
    r.text = format_homology(H) + "\n";
    return r;
}

inline CommandResult run_fibration(const InputDocument& d, const RunOptions& o)
{
    std::optional<SMap> f;
    auto pt = share(point(d.trunc));
    if (d.kind == DocKind::sset)
        f = d.map ? *d.map : map_to_point(d.sset, pt);
    else if (d.kind == DocKind::category && d.functor)
        f = nerve_map(*d.functor, share(nerve(*d.source, d.trunc)), share(nerve(*d.category, d.trunc)));
    else if (d.kind == DocKind::category)
        f = map_to_point(share(nerve(*d.category, d.trunc)), pt);
    else
        wrong_kind("fibration", d, "sset or category");
    std::size_t n_max = o.n_max.value_or(d.trunc == 0 ? 0 : d.trunc - 1);
    auto v = check_fibration(*f, FibrationKind::kan, n_max);
    CommandResult r;
    r.exit = exit_code(v.result);
    r.report = report_header("fibration", d);
    r.report["verdict"] = to_json(v);
    Json rows = Json::array();
    std::ostringstream os;
    os << "Kan fibration through n = " << n_max << ": " << to_string(v.result) << "\n";
    os << "  n  k  problems  surjective\n";
    for (const auto& row : v.table)
    {
        rows.push_back(Json{{"n", row.n},
                            {"k", row.k ? Json(*row.k) : Json(nullptr)},
                            {"problems", row.problems},
                            {"surjective", row.surjective}});
        os << "  " << row.n << "  " << (row.k ? std::to_string(*row.k) : "-") << "  " << row.problems << "  "
           << (row.surjective ? "yes" : "no") << "\n";
    }
    r.report["table"] = rows;
    if (v.witness)
    {
        bool replays = replay(*f, *v.witness);
        r.report["witness_replays"] = replays;
        os << "witness: " << describe(*f, *v.witness) << (replays ? " (replayed)" : " (replay failed)") << "\n";
    }
    r.text = os.str();
    return r;
}

inline CommandResult run_validate_site(const InputDocument& d)
{
    if (d.kind != DocKind::site && d.kind != DocKind::presheaf)
        wrong_kind("validate-site", d, "site or presheaf");
    auto rep = validate_site(*d.site);
    CommandResult r;
    r.exit = rep.valid ? 0 : 1;
    r.report = report_header("validate-site", d);
    r.report["valid"] = rep.valid;
    r.report["failures"] = Json::array();
    std::ostringstream os;
    os << "site: " << (rep.valid ? "valid" : "invalid") << "\n";
    for (const auto& f : rep.failures)
    {
        r.report["failures"].push_back(Json{{"axiom", f.axiom}, {"object", f.object}, {"witness", f.witness}});
        os << "  " << f.axiom << " at " << f.object << ": " << f.witness << "\n";
    }
    r.text = os.str();
    return r;
}

inline std::vector<const NamedPresheaf*> selected_presheaves(const InputDocument& d, const RunOptions& o)
{
    std::vector<const NamedPresheaf*> out;
    for (const auto& p : d.presheaves)
        if (!o.presheaf || p.name == *o.presheaf)
            out.push_back(&p);
    if (out.empty())
        throw InvalidArgument("no presheaf named '" + o.presheaf.value_or("") + "'");
    return out;
}

inline CommandResult run_stalk(const InputDocument& d, const RunOptions& o)
{
    if (d.kind != DocKind::presheaf)
        wrong_kind("stalk", d, "presheaf");
    std::vector<PointDiagram> pts;
    for (const auto& p : d.points)
        if (!o.point || p.name == *o.point)
            pts.push_back(p);
    if (o.point && pts.empty())
        throw InvalidArgument("no point named '" + *o.point + "'");
    CommandResult r;
    r.report = report_header("stalk", d);
    std::ostringstream os;
    if (o.map)
    {
        const NamedPresheafMap* m = nullptr;
        for (const auto& x : d.maps)
            if (x.name == *o.map)
                m = &x;
        if (!m)
            throw InvalidArgument("no map named '" + *o.map + "'");
        auto v = is_local_equivalence(m->map, pts, d.range);
        r.exit = exit_code(v.verdict);
        r.report["map"] = m->name;
        r.report["stalkwise_equivalence"] = to_string(v.verdict);
        r.report["where"] = v.where;
        os << "stalkwise equivalence of " << m->name << ": " << to_string(v.verdict)
           << (v.where.empty() ? "" : " at " + v.where) << "\n";
        r.text = os.str();
        return r;
    }
    Json stalks = Json::array();
    for (const auto* p : selected_presheaves(d, o))
        for (const auto& pt : pts)
        {
            auto s = stalk(*p->presheaf, pt);
            auto H = homology_of(*s.object, d.range);
            stalks.push_back(Json{{"presheaf", p->name},
                                  {"point", pt.name},
                                  {"vertices", s.object->names()[0]},
                                  {"homology", group_strings(H)}});
            os << p->name << " at " << pt.name << ": " << s.object->size(0) << " vertices, " << format_homology(H)
               << "\n";
        }
    r.report["stalks"] = stalks;
    r.text = os.str();
    return r;
}

inline CommandResult run_sheafify(const InputDocument& d, const RunOptions& o)
{
    if (d.kind != DocKind::presheaf)
        wrong_kind("sheafify", d, "presheaf");
    CommandResult r;
    r.report = report_header("sheafify", d);
    Json out = Json::array();
    std::ostringstream os;
    for (const auto* p : selected_presheaves(d, o))
    {
        auto before = check_sheaf_condition(*p->presheaf);
        auto S = sheafify(*p->presheaf);
        auto after = check_sheaf_condition(S.sheaf);
        auto again = sheafify(S.sheaf);
        bool idempotent = unit_bijective(again);
        bool unit_iso = unit_bijective(S);
        Json sizes = Json::array();
        const FiniteCategory& C = d.site->category;
        for (Index c = 0; c < C.object_count(); ++c)
            sizes.push_back(Json{{"object", C.object_name(c)},
                                 {"before", p->presheaf->value[c]->size(0)},
                                 {"after", S.sheaf.value[c]->size(0)}});
        out.push_back(Json{{"presheaf", p->name},
                           {"was_sheaf", before.sheaf},
                           {"witness", before.witness},
                           {"result_is_sheaf", after.sheaf},
                           {"unit_bijective", unit_iso},
                           {"idempotent", idempotent},
                           {"vertices", sizes}});
        os << p->name << ": " << (before.sheaf ? "sheaf" : "not a sheaf") << ", sheafification "
           << (after.sheaf ? "is a sheaf" : "is NOT a sheaf") << ", unit " << (unit_iso ? "bijective" : "not bijective")
           << ", idempotent " << (idempotent ? "yes" : "no") << "\n";
        if (!before.sheaf)
            os << "  " << before.witness << "\n";
        if (!after.sheaf || !idempotent || unit_iso != before.sheaf)
            r.exit = 1;
    }
    r.report["presheaves"] = out;
    r.text = os.str();
    return r;
}

inline CommandResult run_hocolim(const InputDocument& d)
{
    if (d.kind != DocKind::diagram)
        wrong_kind("hocolim", d, "diagram");
    auto h = hocolim(*d.Y);
    auto H = homology_of(*h.object(), d.range);
    CommandResult r;
    r.report = report_header("hocolim", d);
    r.report["homology"] = group_strings(H);
    r.report["simplices"] = Json::array();
    for (std::size_t n = 0; n <= d.trunc; ++n)
        r.report["simplices"].push_back(h.object()->size(n));
    r.text = "hocolim: " + format_homology(H) + "\n";
    return r;
}

inline CommandResult run_theorem_b(const InputDocument& d, const RunOptions& o)
{
    TheoremBReport rep;
    if (d.kind == DocKind::category)
    {
        if (!d.functor || !d.object)
            throw InvalidArgument("verify theorem-b on a category document needs 'functor' and 'object'");
        rep = theorem_b_verify(*d.functor, *d.object, d.trunc, d.spec(), oracle_choice(o, OracleKind::groupoid_cover));
    }
    else if (d.kind == DocKind::action || d.kind == DocKind::monoid)
    {
        std::shared_ptr<InternalAction> A = d.action;
        if (!A)
            A = std::make_shared<InternalAction>(d.monoid->self_action());
        Index c = d.object.value_or(0);
        std::string name = d.object_name.empty() ? "*" : d.object_name;
        rep = theorem_b_verify(*A, c, d.spec(), oracle_choice(o, OracleKind::fibration_pullback), name);
    }
    else
        wrong_kind("verify theorem-b", d, "category, action or monoid");
    CommandResult r;
    r.exit = rep.exit_code();
    r.report = report_header("verify theorem-b", d);
    r.report["result"] = rep.to_json();
    std::ostringstream os;
    os << outcome_text(rep.outcome, rep.detail);
    os << "oracle: " << rep.oracle << ", fibration hypothesis: " << rep.fibration_hypothesis
       << ", acts by equivalences: " << rep.acts_by;
    if (rep.acts_by_witness)
        os << " (witness phi = " << *rep.acts_by_witness << ")";
    os << "\n" << comparison_text(rep.comparison);
    r.text = os.str();
    return r;
}

inline CommandResult run_puppe(const InputDocument& d, const RunOptions& o)
{
    if (d.kind != DocKind::diagram || !d.X || !d.transformation)
        throw InvalidArgument("verify puppe expects a diagram document with 'Y', 'X' and 'transformation'");
    auto rep = puppe_check(*d.Y, *d.X, *d.transformation, d.object.value_or(0), d.spec(),
                           oracle_choice(o, OracleKind::fibration_pullback));
    CommandResult r;
    r.exit = rep.exit_code();
    r.report = report_header("verify puppe", d);
    r.report["result"] = rep.to_json();
    std::ostringstream os;
    os << outcome_text(rep.outcome, rep.detail);
    for (const auto& s : rep.squares)
        os << "  square " << s.name << ": " << to_string(s.verdict) << " (" << s.method << ")\n";
    if (rep.failing_square)
        os << "failing square: " << *rep.failing_square << "\n";
    os << comparison_text(rep.comparison);
    r.text = os.str();
    return r;
}

inline CommandResult run_group_completion(const InputDocument& d, const RunOptions& o)
{
    if (d.kind != DocKind::monoid)
        wrong_kind("verify group-completion", d, "monoid");
    std::optional<KnownAnswer> known = d.known;
    if (o.oracle)
    {
        auto c = oracle_choice(o, OracleKind::known_answer);
        if (c.kind != OracleKind::known_answer)
            throw InvalidArgument("verify group-completion only takes --oracle known-answer:FILE");
        known = c.known;
    }
    GroupCompletionOptions opt{d.word, d.stages};
    auto rep = group_completion_verify(*d.monoid, d.spec(), known, opt);
    CommandResult r;
    r.exit = rep.exit_code();
    r.report = report_header("verify group-completion", d);
    r.report["result"] = rep.to_json();
    std::ostringstream os;
    os << outcome_text(rep.outcome, rep.detail);
    os << "route: " << rep.route << ", acts by equivalences: " << rep.acts_by;
    if (rep.acts_by_witness)
        os << " (witness " << *rep.acts_by_witness << ")";
    os << "\n";
    if (rep.localized)
        for (const auto& e : rep.localized->entries)
            os << "  [" << e.label << "] H_" << e.degree << " = " << e.group << (e.stabilized ? "" : " (unstable)")
               << "\n";
    for (const auto& k : rep.known)
        os << "  known [" << k.label << "] H_" << k.degree << ": expected " << k.expected << ", computed "
           << k.computed << " -> " << k.status << "\n";
    r.text = os.str();
    return r;
}

}  // namespace detail

/**
 * Run one command. Input errors (bad flags, wrong document kind, schema
 * problems found late) are returned as exit 4 with an "error" report.
 */
inline CommandResult run_command(const std::string& command, const InputDocument& d, const RunOptions& o = {})
{
    try
    {
        if (command == "homology")
            return detail::run_homology(d);
        if (command == "fibration")
            return detail::run_fibration(d, o);
        if (command == "validate-site")
            return detail::run_validate_site(d);
        if (command == "stalk")
            return detail::run_stalk(d, o);
        if (command == "sheafify")
            return detail::run_sheafify(d, o);
        if (command == "hocolim")
            return detail::run_hocolim(d);
        if (command == "verify theorem-b")
            return detail::run_theorem_b(d, o);
        if (command == "verify puppe")
            return detail::run_puppe(d, o);
        if (command == "verify group-completion")
            return detail::run_group_completion(d, o);
        throw InvalidArgument("unknown command '" + command + "'");
    }
    catch (const InvalidArgument& e)
    {
        CommandResult r;
        r.exit = kExitInputError;
        r.report = detail::report_header(command, d);
        r.report["error"] = e.what();
        r.text = std::string("error: ") + e.what() + "\n";
        return r;
    }
    catch (const CorruptInput& e)
    {
        CommandResult r;
        r.exit = kExitInputError;
        r.report = detail::report_header(command, d);
        r.report["error"] = e.what();
        r.text = std::string("error: ") + e.what() + "\n";
        return r;
    }
}

}  // namespace hfib
