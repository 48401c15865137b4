/** Input documents, located schema errors, and command dispatch. */
#include <catch_amalgamated.hpp>

#include <map>

#include "hfib/cli.hpp"

using namespace hfib;

namespace {

std::string fixture(const std::string& name) { return std::string(HFIB_FIXTURES) + "/" + name; }

CommandResult run_fixture(const std::string& command, const std::string& name, const RunOptions& o = {})
{
    return run_command(command, parse_input(fixture(name)), o);
}

std::string schema_message(const std::string& text)
{
    try
    {
        parse_document(text);
    }
    catch (const SchemaError& e)
    {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("minimal documents parse")
{
    auto d = parse_input(fixture("point.json"));
    CHECK(d.kind == DocKind::sset);
    CHECK(d.trunc == 2);
    CHECK(d.range == 1);
    CHECK(d.sset->size(0) == 1);

    auto t = parse_input(fixture("circle_tables.json"));
    CHECK(group_strings(homology_of(*t.sset, 1)) == std::vector<std::string>{"Z", "Z"});

    // Flags override the document before anything is built.
    auto o = parse_input(fixture("boundary2.json"), InputFlags{4, 2});
    CHECK(o.sset->trunc() == 4);
    CHECK(o.range == 2);
}

TEST_CASE("schema errors are located")
{
    CHECK(schema_message(R"({"kind": "sset", "trunc": 2, "range": 2, "sset": {"point": true}})")
              .find("range must be below truncation") != std::string::npos);
    CHECK(schema_message(R"({"trunc": 2})").find("missing field 'kind'") != std::string::npos);
    CHECK(schema_message(R"({"kind": "blob", "trunc": 2})").rfind("/kind:", 0) == 0);
    CHECK(schema_message("{\"kind\": \"sset\",\n \"trunc\": }").rfind("line 2", 0) == 0);
    CHECK(schema_message(R"({"kind": "category", "trunc": 2, "category": {"poset": {"objects": ["a"],
          "relations": [["a", "b"]]}}})")
              .rfind("/category/poset/relations/0/1: unknown object 'b'", 0) == 0);
    CHECK(schema_message(R"({"kind": "sset", "trunc": 2, "sset": {"standard": "cube", "n": 1}})")
              .rfind("/sset/standard", 0) == 0);

    // Non-associative table: the witness triple is part of the message.
    std::string m;
    try
    {
        parse_input(fixture("nonassociative_monoid.json"));
    }
    catch (const SchemaError& e)
    {
        m = e.what();
    }
    CHECK(m.rfind("/monoid:", 0) == 0);
    CHECK(m.find("not associative") != std::string::npos);
    // Whatever triple is reported must really break associativity in the fixture's table.
    std::map<std::pair<char, char>, char> mul{{{'e', 'e'}, 'e'}, {{'e', 'a'}, 'a'}, {{'e', 'b'}, 'b'},
                                              {{'a', 'e'}, 'a'}, {{'a', 'a'}, 'b'}, {{'a', 'b'}, 'e'},
                                              {{'b', 'e'}, 'b'}, {{'b', 'a'}, 'b'}, {{'b', 'b'}, 'e'}};
    auto open = m.find('(');
    REQUIRE(open != std::string::npos);
    char x = m[open + 1], y = m[open + 4], z = m[open + 7];
    CHECK(mul[{mul[{x, y}], z}] != mul[{x, mul[{y, z}]}]);

    // A functor that breaks composition.
    CHECK(schema_message(R"({"kind": "category", "trunc": 3, "functor": {"source": {"group": "Z/2"},
          "target": {"group": "Z/3"}, "objects": {"*": "*"}, "morphisms": {"1": "1"}}})")
              .find("composition not preserved") != std::string::npos);
}

TEST_CASE("documents with general category tables")
{
    // Two objects, a pair of inverse arrows: a groupoid whose nerve is contractible.
    auto d = parse_document(R"({"kind": "category", "trunc": 3, "category": {
        "objects": ["a", "b"],
        "morphisms": [{"name": "1a", "source": "a", "target": "a"}, {"name": "1b", "source": "b", "target": "b"},
                      {"name": "f", "source": "a", "target": "b"}, {"name": "g", "source": "b", "target": "a"}],
        "identities": ["1a", "1b"],
        "compose": [["f", "g", "1a"], ["g", "f", "1b"]]}})");
    CHECK(d.category->morphism_count() == 4);
    CHECK(run_command("homology", d).text == "H_0 = Z, H_1 = 0, H_2 = 0\n");
    CHECK(run_command("fibration", d).exit == 0);
}

TEST_CASE("commands and exit codes")
{
    auto h = run_fixture("homology", "boundary2.json");
    CHECK(h.exit == 0);
    CHECK(h.text == "H_0 = Z, H_1 = Z\n");

    CHECK(run_fixture("verify theorem-b", "comma_point_to_BZ2.json").exit == 0);
    auto nat = run_fixture("verify theorem-b", "naturals_self_action.json");
    CHECK(nat.exit == 2);
    CHECK(nat.report["result"]["hypotheses"]["acts_by_witness"] == "1");

    auto fib = run_fixture("fibration", "nerve_arrow.json");
    CHECK(fib.exit == 1);
    CHECK(fib.report["witness_replays"] == true);

    CHECK(run_fixture("verify puppe", "puppe_double_cover.json").exit == 0);
    auto broken = run_fixture("verify puppe", "puppe_broken.json");
    CHECK(broken.exit == 2);
    CHECK(broken.report["result"]["failing_square"] == "0<1");

    RunOptions known{"known-answer:" + fixture("symmetric_known.json"), {}, {}, {}, {}};
    CHECK(run_fixture("verify group-completion", "block_sum_group_completion.json", known).exit == 0);
    RunOptions wrong{"known-answer:" + fixture("symmetric_known_wrong.json"), {}, {}, {}, {}};
    CHECK(run_fixture("verify group-completion", "block_sum_group_completion.json", wrong).exit == 1);

    // Input errors.
    CHECK(run_fixture("hocolim", "point.json").exit == kExitInputError);
    CHECK(run_fixture("bogus", "point.json").exit == kExitInputError);
    RunOptions missing{"known-answer:/nonexistent.json", {}, {}, {}, {}};
    CHECK(run_fixture("verify theorem-b", "z3_self_action.json", missing).exit == kExitInputError);
    RunOptions bad_oracle{"magic", {}, {}, {}, {}};
    CHECK(run_fixture("verify theorem-b", "z3_self_action.json", bad_oracle).exit == kExitInputError);
}

TEST_CASE("site and presheaf commands")
{
    CHECK(run_fixture("validate-site", "sierpinski.json").exit == 0);
    auto bad = run_fixture("validate-site", "bad_site.json");
    CHECK(bad.exit == 1);
    CHECK(bad.report["failures"][0]["axiom"] == "maximal");

    auto sh = run_fixture("sheafify", "sierpinski_presheaves.json");
    CHECK(sh.exit == 0);
    CHECK(sh.report["presheaves"][0]["was_sheaf"] == false);
    CHECK(sh.report["presheaves"][0]["unit_bijective"] == false);
    CHECK(sh.report["presheaves"][1]["was_sheaf"] == true);
    CHECK(sh.report["presheaves"][1]["unit_bijective"] == true);

    RunOptions at_u{{}, {}, {}, "U", "i"};
    CHECK(run_fixture("stalk", "sierpinski_presheaves.json", at_u).exit == 0);
    RunOptions at_x{{}, {}, {}, "X", "i"};
    CHECK(run_fixture("stalk", "sierpinski_presheaves.json", at_x).exit == 1);
}

TEST_CASE("reports are byte-identical on reruns")
{
    for (const auto& [cmd, file] : std::vector<std::pair<std::string, std::string>>{
             {"verify theorem-b", "comma_poset_to_BS3.json"},
             {"verify group-completion", "naturals_group_completion.json"},
             {"hocolim", "hocolim_circle.json"}})
    {
        auto a = run_fixture(cmd, file).report.dump(2);
        auto b = run_fixture(cmd, file).report.dump(2);
        CHECK(a == b);
    }
}
