/**
 * Input documents. Every input is one JSON object with a top-level "kind"
 * tag (sset, category, action, monoid, site, presheaf, diagram, suite), a
 * truncation "trunc" and an optional "range" (default trunc - 1). Schema
 * problems are reported as SchemaError with a JSON-pointer style path, or a
 * line and column for syntax errors.
 *
 * Objects, morphisms and simplices are referred to by name throughout; the
 * fixtures/ directory has one example per kind.
 */
#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "category.hpp"
#include "group_completion.hpp"
#include "harness.hpp"
#include "monoid.hpp"
#include "report.hpp"
#include "site.hpp"
#include "sset_io.hpp"

namespace hfib {

/// A schema violation at a location ("/monoid/table/2" or "line 4, column 7").
class SchemaError : public InvalidArgument
{
public:
    SchemaError(const std::string& where, const std::string& what)
        : InvalidArgument((where.empty() ? std::string("/") : where) + ": " + what), where_(where)
    {
    }
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

enum class DocKind
{
    sset,
    category,
    action,
    monoid,
    site,
    presheaf,
    diagram,
    suite
};

inline std::string to_string(DocKind k)
{
    switch (k)
    {
    case DocKind::sset: return "sset";
    case DocKind::category: return "category";
    case DocKind::action: return "action";
    case DocKind::monoid: return "monoid";
    case DocKind::site: return "site";
    case DocKind::presheaf: return "presheaf";
    case DocKind::diagram: return "diagram";
    case DocKind::suite: return "suite";
    }
    return "?";
}

/// Overrides from the command line, applied before anything is built.
struct InputFlags
{
    std::optional<std::size_t> trunc;
    std::optional<std::size_t> range;
};

struct NamedPresheaf
{
    std::string name;
    std::shared_ptr<SPresheaf> presheaf;
};

struct NamedPresheafMap
{
    std::string name;
    PresheafMap map;
};

struct SuiteCase
{
    std::string name;
    std::vector<std::string> argv;  ///< command words and flags, without the input path
    std::string input;              ///< resolved path
    int expect = 0;
};

struct InputDocument
{
    DocKind kind = DocKind::sset;
    std::string path;
    std::string name;
    std::size_t trunc = 0;
    std::size_t range = 0;

    // sset
    SSetPtr sset;
    std::optional<SMap> map;  ///< optional map out of the sset, for the fibration check

    // category, action, site, diagram shape
    std::shared_ptr<FiniteCategory> category;
    std::shared_ptr<FiniteCategory> source;
    std::optional<Functor> functor;
    std::optional<Index> object;
    std::string object_name;

    std::shared_ptr<InternalAction> action;

    // monoid
    std::shared_ptr<MonoidObject> monoid;
    std::optional<std::vector<Index>> word;
    std::size_t stages = 0;
    std::optional<KnownAnswer> known;

    // site, presheaf
    std::shared_ptr<FiniteSite> site;
    std::vector<NamedPresheaf> presheaves;
    std::vector<NamedPresheafMap> maps;
    std::vector<PointDiagram> points;

    // diagram
    std::optional<Diagram> Y;
    std::optional<Diagram> X;
    std::optional<Transformation> transformation;

    // suite
    std::vector<SuiteCase> cases;

    LocalizationSpec spec() const { return LocalizationSpec{SpecKind::h_range, range}; }
};

namespace detail {

/// A JSON value together with its path, for located errors.
class Node
{
public:
    Node(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {}

    const Json& json() const { return *j_; }
    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& what) const { throw SchemaError(path_, what); }

    bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

    Node operator[](const std::string& key) const
    {
        if (!j_->is_object())
            fail("expected an object");
        if (!j_->contains(key))
            fail("missing field '" + key + "'");
        return Node(j_->at(key), path_ + "/" + key);
    }

    Node operator[](std::size_t i) const { return Node(j_->at(i), path_ + "/" + std::to_string(i)); }

    std::size_t size() const
    {
        if (!j_->is_array())
            fail("expected an array");
        return j_->size();
    }

    std::vector<std::pair<std::string, Node>> items() const
    {
        if (!j_->is_object())
            fail("expected an object");
        std::vector<std::pair<std::string, Node>> out;
        for (auto it = j_->begin(); it != j_->end(); ++it)
            out.emplace_back(it.key(), Node(it.value(), path_ + "/" + it.key()));
        return out;
    }

    std::string str() const
    {
        if (!j_->is_string())
            fail("expected a string");
        return j_->get<std::string>();
    }

    std::size_t uint() const
    {
        if (!j_->is_number_unsigned() && !(j_->is_number_integer() && j_->get<long long>() >= 0))
            fail("expected a non-negative integer");
        return j_->get<std::size_t>();
    }

    int integer() const
    {
        if (!j_->is_number_integer())
            fail("expected an integer");
        return j_->get<int>();
    }

    bool boolean() const
    {
        if (!j_->is_boolean())
            fail("expected true or false");
        return j_->get<bool>();
    }

    bool is_null() const { return j_->is_null(); }
    bool is_string() const { return j_->is_string(); }
    bool is_object() const { return j_->is_object(); }
    bool is_array() const { return j_->is_array(); }

    std::vector<std::string> strings() const
    {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < size(); ++i)
            out.push_back((*this)[i].str());
        return out;
    }

private:
    const Json* j_;
    std::string path_;
};

/// Rethrow library errors raised while building a value as located schema errors.
template <class Fn>
auto located(const Node& at, Fn&& fn) -> decltype(fn())
{
    try
    {
        return fn();
    }
    catch (const SchemaError&)
    {
        throw;
    }
    catch (const InvalidArgument& e)
    {
        at.fail(e.what());
    }
    catch (const CorruptInput& e)
    {
        at.fail(e.what());
    }
    catch (const ContractViolation& e)
    {
        at.fail(e.what());
    }
    catch (const std::out_of_range& e)
    {
        at.fail(e.what());
    }
}

inline Index lookup(const std::vector<std::string>& names, const Node& n, const std::string& what)
{
    std::string s = n.str();
    for (Index i = 0; i < names.size(); ++i)
        if (names[i] == s)
            return i;
    n.fail("unknown " + what + " '" + s + "'");
}

inline Index object_index(const FiniteCategory& C, const Node& n) { return lookup(C.objects(), n, "object"); }

inline Index morphism_index(const FiniteCategory& C, const Node& n)
{
    std::string s = n.str();
    for (Index f = 0; f < C.morphism_count(); ++f)
        if (C.morphism(f).name == s)
            return f;
    n.fail("unknown morphism '" + s + "'");
}

inline std::vector<std::string> morphism_names(const FiniteCategory& C)
{
    std::vector<std::string> out;
    for (const auto& m : C.morphisms())
        out.push_back(m.name);
    return out;
}

/// A group name: "Z/n" or "Sn".
inline FiniteCategory named_group(const Node& n)
{
    std::string s = n.str();
    try
    {
        if (s.rfind("Z/", 0) == 0)
            return cyclic_group_category(std::stoul(s.substr(2)));
        if (s.size() > 1 && s[0] == 'S')
            return symmetric_group_category(std::stoi(s.substr(1)));
    }
    catch (const std::logic_error&)
    {
    }
    n.fail("unknown group '" + s + "' (use Z/n or Sn)");
}

/**
 * Category forms:
 *   {"group": "Z/3"}, {"cyclic": 3}, {"symmetric": 3}, {"ordinal": 1},
 *   {"terminal": true}, {"codiscrete": 2},
 *   {"poset": {"objects": [...], "relations": [[a, b], ...]}},
 *   {"monoid": {"elements": [...], "table": [[...], ...]}} (first element is the unit),
 *   {"objects": [...], "morphisms": [{"name", "source", "target"}], "identities": [...],
 *    "compose": [[f, g, "f then g"], ...]} (identity composites are implied).
 */
inline FiniteCategory parse_category(const Node& n)
{
    return located(n, [&]() -> FiniteCategory {
        if (n.has("group"))
            return named_group(n["group"]);
        if (n.has("cyclic"))
            return cyclic_group_category(n["cyclic"].uint());
        if (n.has("symmetric"))
            return symmetric_group_category(static_cast<int>(n["symmetric"].uint()));
        if (n.has("ordinal"))
            return ordinal_category(n["ordinal"].uint());
        if (n.has("terminal"))
            return terminal_category();
        if (n.has("codiscrete"))
            return codiscrete_category(n["codiscrete"].uint());
        if (n.has("poset"))
        {
            Node p = n["poset"];
            auto names = p["objects"].strings();
            std::vector<std::pair<Index, Index>> rel;
            if (p.has("relations"))
            {
                Node r = p["relations"];
                for (std::size_t i = 0; i < r.size(); ++i)
                {
                    if (r[i].size() != 2)
                        r[i].fail("a relation is a pair [a, b] meaning a <= b");
                    rel.emplace_back(lookup(names, r[i][0], "object"), lookup(names, r[i][1], "object"));
                }
            }
            return poset_category(names.size(), rel, names);
        }
        if (n.has("monoid"))
        {
            Node m = n["monoid"];
            auto el = m["elements"].strings();
            Node t = m["table"];
            if (t.size() != el.size())
                t.fail("table must have one row per element");
            std::vector<Index> mult;
            for (std::size_t a = 0; a < el.size(); ++a)
            {
                if (t[a].size() != el.size())
                    t[a].fail("row must have one entry per element");
                for (std::size_t b = 0; b < el.size(); ++b)
                    mult.push_back(lookup(el, t[a][b], "element"));
            }
            return monoid_category(el, mult);
        }
        auto objects = n["objects"].strings();
        Node ms = n["morphisms"];
        std::vector<Morphism> mors;
        std::vector<std::string> mnames;
        for (std::size_t i = 0; i < ms.size(); ++i)
        {
            mors.push_back({ms[i]["name"].str(), lookup(objects, ms[i]["source"], "object"),
                            lookup(objects, ms[i]["target"], "object")});
            mnames.push_back(mors.back().name);
        }
        Node idn = n["identities"];
        if (idn.size() != objects.size())
            idn.fail("one identity per object is required");
        std::vector<Index> ids;
        for (std::size_t c = 0; c < objects.size(); ++c)
            ids.push_back(lookup(mnames, idn[c], "morphism"));
        std::map<std::pair<Index, Index>, Index> comp;
        if (n.has("compose"))
        {
            Node cn = n["compose"];
            for (std::size_t i = 0; i < cn.size(); ++i)
            {
                if (cn[i].size() != 3)
                    cn[i].fail("a composite is a triple [f, g, f then g]");
                comp[{lookup(mnames, cn[i][0], "morphism"), lookup(mnames, cn[i][1], "morphism")}] =
                    lookup(mnames, cn[i][2], "morphism");
            }
        }
        auto is_id = [&](Index f) { return ids[mors[f].source] == f; };
        return make_category(objects, mors, ids, [&](Index f, Index g) -> Index {
            if (is_id(f))
                return g;
            if (is_id(g))
                return f;
            auto it = comp.find({f, g});
            if (it == comp.end())
                n["compose"].fail("no composite given for (" + mnames[f] + ", " + mnames[g] + ")");
            return it->second;
        });
    });
}

/// {"source": cat, "target": cat, "objects": {a: b}, "morphisms": {f: g}}; identities are implied.
inline Functor parse_functor(const Node& n, const FiniteCategory& D, const FiniteCategory& C)
{
    Functor F{&D, &C, std::vector<Index>(D.object_count(), kNone), std::vector<Index>(D.morphism_count(), kNone)};
    for (const auto& [k, v] : n["objects"].items())
        F.on_objects[lookup(D.objects(), Node(Json(k), v.path()), "source object")] = object_index(C, v);
    for (Index d = 0; d < D.object_count(); ++d)
        if (F.on_objects[d] == kNone)
            n["objects"].fail("object '" + D.object_name(d) + "' has no image");
    if (n.has("morphisms"))
        for (const auto& [k, v] : n["morphisms"].items())
            F.on_morphisms[lookup(morphism_names(D), Node(Json(k), v.path()), "source morphism")] =
                morphism_index(C, v);
    for (Index f = 0; f < D.morphism_count(); ++f)
        if (F.on_morphisms[f] == kNone)
        {
            if (!D.is_identity(f))
                n["morphisms"].fail("morphism '" + D.morphism(f).name + "' has no image");
            F.on_morphisms[f] = C.identity(F.on_objects[D.source(f)]);
        }
    located(n, [&] { F.validate(); });
    return F;
}

/**
 * Simplicial set forms: explicit tables {"trunc", "levels", "faces", "degeneracies"},
 * {"standard": "simplex"|"boundary"|"horn", "n": 2, "k": 1}, {"point": true},
 * {"discrete": [...]}, {"nerve": category}, {"product": [sset, sset]}.
 */
inline TruncatedSSet parse_sset(const Node& n, std::size_t N)
{
    return located(n, [&]() -> TruncatedSSet {
        if (n.has("levels"))
        {
            auto X = sset_from_json(n.json());
            if (X.trunc() != N)
                n.fail("tables are truncated at " + std::to_string(X.trunc()) + " but the document uses " +
                       std::to_string(N));
            return X;
        }
        if (n.has("standard"))
        {
            std::string s = n["standard"].str();
            StandardKind k = s == "simplex"    ? StandardKind::simplex
                             : s == "boundary" ? StandardKind::boundary
                             : s == "horn"     ? StandardKind::horn
                                               : (n["standard"].fail("expected simplex, boundary or horn"),
                                                  StandardKind::simplex);
            std::optional<std::size_t> horn;
            if (n.has("k"))
                horn = n["k"].uint();
            return build_standard(k, n["n"].uint(), horn, N);
        }
        if (n.has("point"))
            return point(N);
        if (n.has("discrete"))
            return discrete(n["discrete"].strings(), N);
        if (n.has("nerve"))
            return nerve(parse_category(n["nerve"]), N);
        if (n.has("product"))
        {
            Node p = n["product"];
            if (p.size() != 2)
                p.fail("a product takes two factors");
            auto P = product(share(parse_sset(p[0], N)), share(parse_sset(p[1], N)));
            return *P.object;
        }
        n.fail("expected one of levels, standard, point, discrete, nerve, product");
    });
}

/// The constant extension of a vertex map out of a discrete simplicial set.
inline SMap vertex_map(const SSetPtr& X, const SSetPtr& Y, const std::vector<Index>& v, const Node& at)
{
    if (v.size() != X->size(0))
        at.fail("need one image per vertex");
    const std::size_t N = X->trunc();
    SMap f{X, Y, std::vector<std::vector<Index>>(N + 1)};
    f.component[0] = v;
    for (std::size_t n = 1; n <= N; ++n)
    {
        if (X->size(n) != X->size(0))
            at.fail("a vertex map needs a discrete source");
        for (Index x = 0; x < X->size(n); ++x)
            f.component[n].push_back(Y->degen(n - 1, 0, f.component[n - 1][X->face(n, 0, x)]));
    }
    located(at, [&] { f.validate(); });
    return f;
}

/// "identity", "to_point", {"vertices": [...]} (names in Y), {"component": [[...], ...]}.
inline SMap parse_map(const Node& n, const SSetPtr& X, const SSetPtr& Y)
{
    if (n.is_string())
    {
        std::string s = n.str();
        if (s == "identity")
        {
            if (!(*X == *Y))
                n.fail("identity between different simplicial sets");
            return identity_map(X);
        }
        if (s == "to_point")
        {
            if (Y->size(0) != 1)
                n.fail("target is not a point");
            return located(n, [&] { return map_to_point(X, Y); });
        }
        n.fail("expected identity, to_point or a map object");
    }
    if (n.has("vertices"))
    {
        Node v = n["vertices"];
        std::vector<Index> img;
        for (std::size_t i = 0; i < v.size(); ++i)
            img.push_back(lookup(Y->names()[0], v[i], "vertex"));
        return vertex_map(X, Y, img, v);
    }
    return located(n, [&] { return smap_from_json(n.json(), X, Y); });
}

/**
 * Monoid forms: {"generator": "naturals"|"integers"|"cyclic"|"symmetric"|"block_sum", "size": k},
 * or a discrete table {"elements", "table" (null = undefined), "unit", "sections", "grades",
 * "window", "name"}.
 */
inline MonoidObject parse_monoid(const Node& n, std::size_t N)
{
    return located(n, [&]() -> MonoidObject {
        if (n.has("generator"))
        {
            std::string g = n["generator"].str();
            int k = static_cast<int>(n["size"].uint());
            if (g == "naturals")
                return naturals_monoid(k, N);
            if (g == "integers")
                return integers_monoid(k, N);
            if (g == "cyclic")
                return cyclic_group_monoid(k, N);
            if (g == "symmetric")
                return symmetric_group_monoid(k, N);
            if (g == "block_sum")
                return block_sum_monoid(k, N);
            n["generator"].fail("unknown generator '" + g + "'");
        }
        auto el = n["elements"].strings();
        Node t = n["table"];
        if (t.size() != el.size())
            t.fail("table must have one row per element");
        std::vector<Index> mult;
        for (std::size_t a = 0; a < el.size(); ++a)
        {
            if (t[a].size() != el.size())
                t[a].fail("row must have one entry per element");
            for (std::size_t b = 0; b < el.size(); ++b)
                mult.push_back(t[a][b].is_null() ? kNone : lookup(el, t[a][b], "element"));
        }
        Index unit = n.has("unit") ? lookup(el, n["unit"], "element") : 0;
        std::vector<Index> sections;
        if (n.has("sections"))
            for (std::size_t i = 0; i < n["sections"].size(); ++i)
                sections.push_back(lookup(el, n["sections"][i], "element"));
        std::vector<int> grades;
        if (n.has("grades"))
            for (std::size_t i = 0; i < n["grades"].size(); ++i)
                grades.push_back(n["grades"][i].integer());
        std::optional<int> window;
        if (n.has("window"))
            window = n["window"].integer();
        std::string name = n.has("name") ? n["name"].str() : "M";
        return discrete_monoid(el, mult, unit, N, sections, grades, window, name);
    });
}

/// {"sierpinski": bool} or {"category": cat, "covers": {object: [[morphisms], ...]}} or {"category", "trivial": true}.
inline FiniteSite parse_site(const Node& n)
{
    if (n.has("sierpinski"))
        return sierpinski_site(n["sierpinski"].boolean());
    FiniteCategory C = parse_category(n["category"]);
    if (n.has("trivial"))
        return trivial_site(C);
    FiniteSite s{C, std::vector<std::vector<Sieve>>(C.object_count())};
    for (const auto& [obj, list] : n["covers"].items())
    {
        Index c = lookup(C.objects(), Node(Json(obj), list.path()), "object");
        for (std::size_t i = 0; i < list.size(); ++i)
        {
            Sieve S;
            for (std::size_t j = 0; j < list[i].size(); ++j)
                S.push_back(morphism_index(C, list[i][j]));
            std::sort(S.begin(), S.end());
            S.erase(std::unique(S.begin(), S.end()), S.end());
            s.covers[c].push_back(S);
        }
        std::sort(s.covers[c].begin(), s.covers[c].end());
    }
    return s;
}

/// {"name", "sets": {object: [...]}, "restrict": {morphism: [...]}} or {"name", "constant": sset}.
inline std::shared_ptr<SPresheaf> parse_presheaf(const Node& n, const FiniteSite& site, std::size_t N)
{
    const FiniteCategory& C = site.category;
    auto P = std::make_shared<SPresheaf>();
    P->site = &site;
    if (n.has("constant"))
    {
        auto K = share(parse_sset(n["constant"], N));
        *P = constant_presheaf(site, K);
        return P;
    }
    std::vector<std::vector<std::string>> sets(C.object_count());
    std::vector<char> seen(C.object_count(), 0);
    for (const auto& [obj, v] : n["sets"].items())
    {
        Index c = lookup(C.objects(), Node(Json(obj), v.path()), "object");
        sets[c] = v.strings();
        seen[c] = 1;
    }
    for (Index c = 0; c < C.object_count(); ++c)
        if (!seen[c])
            n["sets"].fail("no set given for object '" + C.object_name(c) + "'");
    for (const auto& s : sets)
        P->value.push_back(share(discrete(s, N)));
    P->restriction.resize(C.morphism_count());
    std::vector<char> have(C.morphism_count(), 0);
    if (n.has("restrict"))
        for (const auto& [mor, v] : n["restrict"].items())
        {
            Index f = lookup(morphism_names(C), Node(Json(mor), v.path()), "morphism");
            std::vector<Index> img;
            for (std::size_t i = 0; i < v.size(); ++i)
                img.push_back(lookup(sets[C.source(f)], v[i], "element"));
            P->restriction[f] = vertex_map(P->value[C.target(f)], P->value[C.source(f)], img, v);
            have[f] = 1;
        }
    for (Index f = 0; f < C.morphism_count(); ++f)
        if (!have[f])
        {
            if (!C.is_identity(f))
                n["restrict"].fail("no restriction given along '" + C.morphism(f).name + "'");
            P->restriction[f] = identity_map(P->value[C.source(f)]);
        }
    located(n, [&] { P->validate(); });
    return P;
}

/// {"objects": {shape object: space name}, "arrows": {morphism: map}}; identities are implied.
inline Diagram parse_diagram(const Node& n, const std::shared_ptr<const FiniteCategory>& I,
                             const std::map<std::string, SSetPtr>& spaces)
{
    Diagram D{I, std::vector<SSetPtr>(I->object_count()), std::vector<SMap>(I->morphism_count())};
    for (const auto& [obj, v] : n["objects"].items())
    {
        Index i = lookup(I->objects(), Node(Json(obj), v.path()), "shape object");
        auto it = spaces.find(v.str());
        if (it == spaces.end())
            v.fail("unknown space '" + v.str() + "'");
        D.objects[i] = it->second;
    }
    for (Index i = 0; i < I->object_count(); ++i)
        if (!D.objects[i])
            n["objects"].fail("no space given for '" + I->object_name(i) + "'");
    std::vector<char> have(I->morphism_count(), 0);
    if (n.has("arrows"))
        for (const auto& [mor, v] : n["arrows"].items())
        {
            Index a = lookup(morphism_names(*I), Node(Json(mor), v.path()), "shape morphism");
            D.arrows[a] = parse_map(v, D.objects[I->source(a)], D.objects[I->target(a)]);
            have[a] = 1;
        }
    for (Index a = 0; a < I->morphism_count(); ++a)
        if (!have[a])
        {
            if (!I->is_identity(a))
                n["arrows"].fail("no map given for '" + I->morphism(a).name + "'");
            D.arrows[a] = identity_map(D.objects[I->source(a)]);
        }
    located(n, [&] { D.validate(); });
    return D;
}

inline std::string line_column(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i)
    {
        if (text[i] == '\n')
            ++line, col = 1;
        else
            ++col;
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline std::string directory_of(const std::string& path)
{
    auto slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string() : path.substr(0, slash + 1);
}

}  // namespace detail

/// Parse and validate a document held in memory. `path` is used for messages and relative references.
inline InputDocument parse_document(const std::string& text, const std::string& path = "<input>",
                                    const InputFlags& flags = {})
{
    using detail::Node;
    Json j;
    try
    {
        j = Json::parse(text);
    }
    catch (const Json::parse_error& e)
    {
        throw SchemaError(detail::line_column(text, e.byte), "malformed JSON");
    }
    Node root(j, "");
    InputDocument d;
    d.path = path;
    std::string kind = root["kind"].str();
    static const std::map<std::string, DocKind> kinds{
        {"sset", DocKind::sset},         {"category", DocKind::category}, {"action", DocKind::action},
        {"monoid", DocKind::monoid},     {"site", DocKind::site},         {"presheaf", DocKind::presheaf},
        {"diagram", DocKind::diagram},   {"suite", DocKind::suite}};
    auto k = kinds.find(kind);
    if (k == kinds.end())
        root["kind"].fail("unknown kind '" + kind + "'");
    d.kind = k->second;
    d.name = root.has("name") ? root["name"].str() : "";

    if (d.kind == DocKind::suite)
    {
        Node cs = root["cases"];
        for (std::size_t i = 0; i < cs.size(); ++i)
        {
            SuiteCase c;
            c.name = cs[i].has("name") ? cs[i]["name"].str() : "case " + std::to_string(i);
            c.argv = cs[i]["command"].strings();
            if (cs[i].has("args"))
                for (auto a : cs[i]["args"].strings())
                {
                    // known-answer tables are relative to the suite file
                    const std::string tag = "known-answer:";
                    if (a.rfind(tag, 0) == 0 && a.size() > tag.size() && a[tag.size()] != '/')
                        a = tag + detail::directory_of(path) + a.substr(tag.size());
                    c.argv.push_back(a);
                }
            c.input = detail::directory_of(path) + cs[i]["input"].str();
            c.expect = cs[i].has("expect") ? cs[i]["expect"].integer() : 0;
            d.cases.push_back(std::move(c));
        }
        return d;
    }

    if (flags.trunc)
        d.trunc = *flags.trunc;
    else if (root.has("trunc"))
        d.trunc = root["trunc"].uint();
    else
        root.fail("missing field 'trunc'");
    if (flags.range)
        d.range = *flags.range;
    else if (root.has("range"))
        d.range = root["range"].uint();
    else
        d.range = d.trunc == 0 ? 0 : d.trunc - 1;
    if (d.range >= d.trunc && d.kind != DocKind::site)
        throw SchemaError(root.has("range") && !flags.range ? "/range" : "",
                          "range must be below truncation (range " + std::to_string(d.range) + ", trunc " +
                              std::to_string(d.trunc) + ")");
    const std::size_t N = d.trunc;

    switch (d.kind)
    {
    case DocKind::sset:
    {
        d.sset = share(detail::parse_sset(root["sset"], N));
        if (root.has("map"))
        {
            Node m = root["map"];
            auto Y = share(detail::parse_sset(m["target"], N));
            d.map = detail::parse_map(m["map"], d.sset, Y);
        }
        break;
    }
    case DocKind::category:
    {
        if (root.has("functor"))
        {
            Node f = root["functor"];
            d.source = std::make_shared<FiniteCategory>(detail::parse_category(f["source"]));
            d.category = std::make_shared<FiniteCategory>(detail::parse_category(f["target"]));
            d.functor = detail::parse_functor(f, *d.source, *d.category);
        }
        else
            d.category = std::make_shared<FiniteCategory>(detail::parse_category(root["category"]));
        if (root.has("object"))
        {
            d.object = detail::object_index(*d.category, root["object"]);
            d.object_name = root["object"].str();
        }
        break;
    }
    case DocKind::action:
    {
        if (root.has("monoid"))
        {
            d.monoid = std::make_shared<MonoidObject>(detail::parse_monoid(root["monoid"], N));
            d.action = std::make_shared<InternalAction>(d.monoid->self_action());
            d.object = 0;
            d.object_name = "*";
            break;
        }
        d.category = std::make_shared<FiniteCategory>(detail::parse_category(root["category"]));
        const FiniteCategory& C = *d.category;
        Node s = root["set"];
        auto elements = s["elements"].strings();
        Node over = s["over"];
        if (over.size() != elements.size())
            over.fail("need one object per element");
        std::vector<Index> pi0;
        for (std::size_t i = 0; i < over.size(); ++i)
            pi0.push_back(detail::object_index(C, over[i]));
        std::map<std::pair<Index, Index>, Index> act;
        if (s.has("act"))
            for (const auto& [mor, table] : s["act"].items())
            {
                Index phi = detail::lookup(detail::morphism_names(C), Node(Json(mor), table.path()), "morphism");
                for (const auto& [x, y] : table.items())
                    act[{phi, detail::lookup(elements, Node(Json(x), y.path()), "element")}] =
                        detail::lookup(elements, y, "element");
            }
        auto base = std::make_shared<const InternalCategory>(constant_category(C, N));
        auto total = share(discrete(elements, N));
        SMap pi{total, base->ob(), std::vector<std::vector<Index>>(N + 1, pi0)};
        d.action = detail::located(s, [&] {
            return std::make_shared<InternalAction>(base, total, pi, [&](std::size_t, Index phi, Index x) -> Index {
                if (C.is_identity(phi))
                    return x;
                auto it = act.find({phi, x});
                return it == act.end() ? kNone : it->second;
            });
        });
        if (root.has("object"))
        {
            d.object = detail::object_index(C, root["object"]);
            d.object_name = root["object"].str();
        }
        break;
    }
    case DocKind::monoid:
    {
        d.monoid = std::make_shared<MonoidObject>(detail::parse_monoid(root["monoid"], N));
        const auto& names = d.monoid->space()->names()[0];
        if (root.has("word"))
        {
            d.word.emplace();
            for (std::size_t i = 0; i < root["word"].size(); ++i)
                d.word->push_back(detail::lookup(names, root["word"][i], "vertex"));
        }
        if (root.has("stages"))
            d.stages = root["stages"].uint();
        if (root.has("known"))
            d.known = detail::located(root["known"],
                                      [&] { return known_answer_from_json(root["known"].json(), path); });
        break;
    }
    case DocKind::site:
    {
        d.site = std::make_shared<FiniteSite>(detail::parse_site(root["site"]));
        break;
    }
    case DocKind::presheaf:
    {
        d.site = std::make_shared<FiniteSite>(detail::parse_site(root["site"]));
        const FiniteCategory& C = d.site->category;
        Node ps = root["presheaves"];
        for (std::size_t i = 0; i < ps.size(); ++i)
            d.presheaves.push_back({ps[i]["name"].str(), detail::parse_presheaf(ps[i], *d.site, N)});
        auto find = [&](const Node& n) -> const SPresheaf* {
            for (const auto& p : d.presheaves)
                if (p.name == n.str())
                    return p.presheaf.get();
            n.fail("unknown presheaf '" + n.str() + "'");
        };
        if (root.has("maps"))
        {
            Node ms = root["maps"];
            for (std::size_t i = 0; i < ms.size(); ++i)
            {
                PresheafMap f{find(ms[i]["source"]), find(ms[i]["target"]), {}};
                Node comp = ms[i]["components"];
                for (Index c = 0; c < C.object_count(); ++c)
                {
                    if (!comp.has(C.object_name(c)))
                        comp.fail("no component at '" + C.object_name(c) + "'");
                    f.component.push_back(
                        detail::parse_map(comp[C.object_name(c)], f.source->value[c], f.target->value[c]));
                }
                detail::located(ms[i], [&] { f.validate(); });
                d.maps.push_back({ms[i]["name"].str(), std::move(f)});
            }
        }
        if (root.has("points"))
        {
            Node pts = root["points"];
            for (std::size_t i = 0; i < pts.size(); ++i)
            {
                PointDiagram p{pts[i]["name"].str(), {}, {}};
                for (std::size_t k = 0; k < pts[i]["objects"].size(); ++k)
                {
                    Index c = detail::object_index(C, pts[i]["objects"][k]);
                    p.objects.push_back(c);
                    p.morphisms.push_back(C.identity(c));
                }
                if (pts[i].has("morphisms"))
                    for (std::size_t k = 0; k < pts[i]["morphisms"].size(); ++k)
                        p.morphisms.push_back(detail::morphism_index(C, pts[i]["morphisms"][k]));
                std::sort(p.morphisms.begin(), p.morphisms.end());
                p.morphisms.erase(std::unique(p.morphisms.begin(), p.morphisms.end()), p.morphisms.end());
                if (auto chk = check_cofiltered(C, p); !chk.ok)
                    pts[i].fail("point is not cofiltered: " + chk.witness);
                d.points.push_back(std::move(p));
            }
        }
        break;
    }
    case DocKind::diagram:
    {
        auto I = std::make_shared<FiniteCategory>(detail::parse_category(root["shape"]));
        d.category = I;
        std::map<std::string, SSetPtr> spaces;
        for (const auto& [name, s] : root["spaces"].items())
            spaces[name] = share(detail::parse_sset(s, N));
        d.Y = detail::parse_diagram(root["Y"], I, spaces);
        if (root.has("X"))
        {
            d.X = detail::parse_diagram(root["X"], I, spaces);
            Node t = root["transformation"];
            Transformation f;
            for (Index i = 0; i < I->object_count(); ++i)
            {
                if (!t.has(I->object_name(i)))
                    t.fail("no component at '" + I->object_name(i) + "'");
                f.components.push_back(detail::parse_map(t[I->object_name(i)], d.Y->objects[i], d.X->objects[i]));
            }
            detail::located(t, [&] { f.validate(*d.Y, *d.X); });
            d.transformation = std::move(f);
        }
        if (root.has("object"))
        {
            d.object = detail::object_index(*I, root["object"]);
            d.object_name = root["object"].str();
        }
        break;
    }
    case DocKind::suite: break;
    }
    return d;
}

/// Read and parse a file; a missing file is an input error.
inline InputDocument parse_input(const std::string& path, const InputFlags& flags = {})
{
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_document(ss.str(), path, flags);
}

}  // namespace hfib
