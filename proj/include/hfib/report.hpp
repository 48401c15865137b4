/**
 * Outcomes, exit codes, oracle choices and known-answer tables shared by the
 * verification pipelines. Reports serialize to JSON with sorted keys, so the
 * machine-readable output is byte-stable.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chains.hpp"
#include "equivalence.hpp"
#include "fibration.hpp"

namespace hfib {

using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "hfib-report/1";

enum class Outcome
{
    confirmed,
    refuted,
    hypotheses_not_met,
    not_checkable
};

inline std::string to_string(Outcome o)
{
    switch (o)
    {
    case Outcome::confirmed: return "confirmed";
    case Outcome::refuted: return "refuted";
    case Outcome::hypotheses_not_met: return "hypotheses-not-met";
    case Outcome::not_checkable: return "not-checkable";
    }
    return "?";
}

/// 0 confirmed, 1 refuted, 2 hypotheses not met, 3 not checkable.
inline int exit_code(Outcome o)
{
    switch (o)
    {
    case Outcome::confirmed: return 0;
    case Outcome::refuted: return 1;
    case Outcome::hypotheses_not_met: return 2;
    case Outcome::not_checkable: return 3;
    }
    return 3;
}

enum class OracleKind
{
    groupoid_cover,
    fibration_pullback,
    known_answer
};

inline std::string to_string(OracleKind k)
{
    switch (k)
    {
    case OracleKind::groupoid_cover: return "groupoid-cover";
    case OracleKind::fibration_pullback: return "fibration-pullback";
    case OracleKind::known_answer: return "known-answer";
    }
    return "?";
}

inline OracleKind oracle_kind_from_string(const std::string& s)
{
    if (s == "groupoid-cover")
        return OracleKind::groupoid_cover;
    if (s == "fibration-pullback")
        return OracleKind::fibration_pullback;
    if (s == "known-answer" || s.rfind("known-answer:", 0) == 0)
        return OracleKind::known_answer;
    throw InvalidArgument("unknown oracle '" + s + "'");
}

/// One expected group. Label "*" matches every label.
struct KnownEntry
{
    std::string label = "*";
    std::size_t degree = 0;
    std::string group;
};

/// User-supplied expected homology, always reported as such.
struct KnownAnswer
{
    std::string source;
    std::vector<KnownEntry> entries;

    /// Expected group in degree k for a label, if the table says anything.
    std::optional<std::string> expected(const std::string& label, std::size_t k) const
    {
        std::optional<std::string> any;
        for (const auto& e : entries)
            if (e.degree == k)
            {
                if (e.label == label)
                    return e.group;
                if (e.label == "*")
                    any = e.group;
            }
        return any;
    }
};

inline KnownAnswer known_answer_from_json(const Json& j, std::string source = "inline")
{
    KnownAnswer k;
    k.source = std::move(source);
    const Json& rows = j.is_object() && j.contains("expected") ? j.at("expected") : j;
    if (!rows.is_array())
        throw InvalidArgument("known-answer table: expected an array of {label, degree, group}");
    for (const auto& r : rows)
    {
        KnownEntry e;
        e.label = r.value("label", std::string("*"));
        e.degree = r.at("degree").get<std::size_t>();
        e.group = r.at("group").get<std::string>();
        parse_group(e.group);
        k.entries.push_back(e);
    }
    return k;
}

struct OracleChoice
{
    OracleKind kind = OracleKind::groupoid_cover;
    std::optional<KnownAnswer> known;
};

/// Groups agree as abstract groups; "Z + Z/2" and "Z/2+Z" compare equal.
inline bool same_group(const std::string& a, const std::string& b) { return parse_group(a) == parse_group(b); }

struct DegreeComparison
{
    std::size_t degree = 0;
    std::string fiber;
    std::string oracle;
    bool isomorphic = false;
};

inline std::vector<std::string> group_strings(const std::vector<HomologyGroup>& groups)
{
    std::vector<std::string> out;
    for (const auto& g : groups)
        out.push_back(g.str());
    return out;
}

inline std::vector<DegreeComparison> compare_degrees(const std::vector<std::string>& fiber,
                                                     const std::vector<std::string>& oracle)
{
    std::vector<DegreeComparison> out;
    for (std::size_t k = 0; k < fiber.size() && k < oracle.size(); ++k)
        out.push_back({k, fiber[k], oracle[k], same_group(fiber[k], oracle[k])});
    return out;
}

inline Json to_json(const EquivalenceResult& r)
{
    Json j{{"verdict", to_string(r.verdict)}, {"detail", r.detail}};
    j["failing_degree"] = r.failing_degree ? Json(*r.failing_degree) : Json(nullptr);
    return j;
}

inline Json to_json(const FibrationVerdict& v)
{
    Json j{{"kind", to_string(v.kind)}, {"n_max", v.n_max}, {"result", to_string(v.result)}, {"detail", v.detail}};
    if (v.witness)
    {
        Json w{{"n", v.witness->n}, {"faces", v.witness->faces}};
        w["k"] = v.witness->k ? Json(*v.witness->k) : Json(nullptr);
        w["base"] = v.witness->base;
        j["witness"] = w;
    }
    return j;
}

inline Json to_json(const DegreeComparison& c)
{
    return Json{{"degree", c.degree}, {"fiber", c.fiber}, {"oracle", c.oracle}, {"isomorphic", c.isomorphic}};
}

inline Json to_json(const LocalizationSpec& s) { return Json{{"kind", to_string(s.kind)}, {"range", s.range}}; }

}  // namespace hfib
