/**
 * hfib: homology, fibration, site and Theorem B style checks on finite
 * inputs. Run `hfib --help` for the command list.
 */
#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hfib/cli.hpp"
#include "hfib/parallel.hpp"

namespace {

struct Flags
{
    std::string input;
    std::optional<std::size_t> trunc, range, n_max;
    std::optional<std::string> oracle, report, presheaf, point, map;
    bool json = false;
    unsigned threads = 0;
};

void add_common(CLI::App* sub, Flags& f)
{
    sub->add_option("input", f.input, "input document (JSON)")->required();
    sub->add_option("--trunc", f.trunc, "truncation level (overrides the document)");
    sub->add_option("--range", f.range, "homology range (overrides the document)");
    sub->add_option("--report", f.report, "write the machine-readable report to FILE");
    sub->add_flag("--json", f.json, "print the machine-readable report instead of text");
    sub->add_option("--threads", f.threads, "worker threads (0: hardware)");
}

int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

int run_suite(const hfib::InputDocument& d, std::ostream& out, std::ostream& err)
{
    int failed = 0;
    for (const auto& c : d.cases)
    {
        std::vector<std::string> argv = c.argv;
        argv.push_back(c.input);
        std::ostringstream sink;
        int got = dispatch(argv, sink, sink);
        bool ok = got == c.expect;
        failed += ok ? 0 : 1;
        out << (ok ? "PASS " : "FAIL ") << c.name << " (exit " << got << ", expected " << c.expect << ")\n";
        if (!ok)
            err << sink.str();
    }
    out << (d.cases.size() - failed) << "/" << d.cases.size() << " cases passed\n";
    return failed ? 1 : 0;
}

int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"hfib: finite checks for homotopy fibers, nerves and group completion"};
    app.require_subcommand(1);
    Flags f;
    std::string command;

    auto simple = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        add_common(s, f);
        s->callback([&command, name] { command = name; });
        return s;
    };
    simple("homology", "integral homology through the range");
    auto* fib = simple("fibration", "Kan fibration check with verdict table and replayable witness");
    fib->add_option("--n-max", f.n_max, "top horn dimension (default: truncation - 1)");
    simple("validate-site", "check the Grothendieck topology axioms");
    auto* st = simple("stalk", "stalks at the document's points, or a stalkwise equivalence verdict");
    st->add_option("--presheaf", f.presheaf, "presheaf name");
    st->add_option("--point", f.point, "point name");
    st->add_option("--map", f.map, "judge this presheaf map stalkwise");
    auto* sh = simple("sheafify", "sheafification, unit and idempotence checks");
    sh->add_option("--presheaf", f.presheaf, "presheaf name");
    simple("hocolim", "homology of the homotopy colimit of a diagram");
    simple("suite", "run a suite document of commands with expected exit codes");

    auto* verify = app.add_subcommand("verify", "end-to-end verifications");
    verify->require_subcommand(1);
    for (std::string v : {"theorem-b", "puppe", "group-completion"})
    {
        auto* s = verify->add_subcommand(v, "verify " + v);
        add_common(s, f);
        s->add_option("--oracle", f.oracle, "groupoid-cover | fibration-pullback | known-answer:FILE");
        s->callback([&command, v] { command = "verify " + v; });
    }

    try
    {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return 0;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << "\n";
        return hfib::kExitInputError;
    }

    if (f.threads)
        hfib::set_thread_count(f.threads);

    hfib::InputDocument doc;
    try
    {
        doc = hfib::parse_input(f.input, hfib::InputFlags{f.trunc, f.range});
    }
    catch (const std::exception& e)
    {
        err << "error: " << f.input << ": " << e.what() << "\n";
        return hfib::kExitInputError;
    }

    if (command == "suite")
    {
        if (doc.kind != hfib::DocKind::suite)
        {
            err << "error: 'suite' expects a suite document\n";
            return hfib::kExitInputError;
        }
        return run_suite(doc, out, err);
    }

    hfib::CommandResult r;
    try
    {
        r = hfib::run_command(command, doc, hfib::RunOptions{f.oracle, f.n_max, f.presheaf, f.point, f.map});
    }
    catch (const hfib::IncompleteAtTruncation& e)
    {
        err << "incomplete at truncation: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << "\n";
        return hfib::kExitInputError;
    }

    std::string machine = r.report.dump(2) + "\n";
    if (f.report)
    {
        std::ofstream rep(*f.report, std::ios::binary);
        if (!rep)
        {
            err << "error: cannot write '" << *f.report << "'\n";
            return hfib::kExitInputError;
        }
        rep << machine;
    }
    if (f.json)
        out << machine;
    else
        (r.exit == hfib::kExitInputError ? err : out) << r.text;
    return r.exit;
}

}  // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args, std::cout, std::cerr);
}
