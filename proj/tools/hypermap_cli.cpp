#include "hypermap/hypermap.hpp"
#include "hypermap/testing/checks.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>

using namespace hypermap;
using nlohmann::json;

namespace {

struct Globals {
    bool json_output = false;
    bool parallel = false;
    std::uint64_t max_refinements = kDefaultRefinementCap;
    std::uint64_t max_flow_space = kDefaultFlowCap;
};

// A computed answer: the plain-text lines and the structured form of the same result.
struct Output {
    std::string text;
    json result;
    std::string method;
    json stats = json::object();
    json input_echo;
};

std::string read_input(const std::string& path)
{
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void require_refinements(const HypermapCollection& h, const Globals& g)
{
    RefinementSpace(h.alpha()).checked_count(g.max_refinements);
}

json stats_json(const WhitneyStats& s)
{
    return {{"nodes", s.nodes},
            {"memo_hits", s.memo_hits},
            {"memo_entries", s.memo_entries},
            {"refinements", s.refinements},
            {"weights", {{"1", s.weights[0]}, {"u", s.weights[1]}, {"v", s.weights[2]}, {"uv", s.weights[3]}}}};
}

WhitneyMethod parse_method(const std::string& name)
{
    if (name == "brute") {
        return WhitneyMethod::BruteForce;
    }
    if (name == "phi") {
        return WhitneyMethod::PhiRecurrence;
    }
    return WhitneyMethod::PsiRecurrence;
}

Output run_whitney(const HypermapCollection& h, const Globals& g, const std::string& method, bool check)
{
    require_refinements(h, g);
    BruteForceOptions options;
    options.refinement_cap = g.max_refinements;
    options.threads = g.parallel ? std::max(1U, std::thread::hardware_concurrency()) : 1U;

    Output out;
    out.method = method;
    const std::vector<std::string> methods =
        (method == "all" || check) ? std::vector<std::string>{"brute", "phi", "psi"} : std::vector<std::string>{method};
    std::vector<WhitneyResult> results;
    for (const std::string& m : methods) {
        results.push_back(whitney(h, parse_method(m), options));
        out.stats[m] = stats_json(results.back().stats);
    }
    if (check) {
        for (std::size_t k = 1; k < results.size(); ++k) {
            if (results[k].polynomial != results[0].polynomial) {
                throw std::runtime_error("--check mismatch: brute gives " + format(results[0].polynomial) + ", " + methods[k] +
                                         " gives " + format(results[k].polynomial));
            }
        }
    }
    if (method == "all") {
        out.result = json::array();
        for (const WhitneyResult& r : results) {
            out.text += format(r.polynomial) + "\n";
            out.result.push_back(format(r.polynomial));
        }
    } else {
        const WhitneyResult& r = results[static_cast<std::size_t>(
            std::find(methods.begin(), methods.end(), method) - methods.begin())];
        out.text = format(r.polynomial) + "\n";
        out.result = format(r.polynomial);
    }
    return out;
}

std::string signed_cycles(const Permutation& p)
{
    std::string s;
    for (const Cycle& c : p.cycles()) {
        s += "(";
        for (std::size_t k = 0; k < c.size(); ++k) {
            s += (k ? " " : "") + signed_point::to_string(c[k]);
        }
        s += ")";
    }
    return s;
}

Output scalar(const std::string& value)
{
    Output out;
    out.text = value + "\n";
    out.result = value;
    return out;
}

void emit(const Output& out, const Globals& g)
{
    if (!g.json_output) {
        std::cout << out.text;
        return;
    }
    json j;
    j["input_echo"] = out.input_echo;
    j["result"] = out.result;
    j["method"] = out.method.empty() ? json(nullptr) : json(out.method);
    j["stats"] = out.stats;
    std::cout << j.dump(2) << "\n";
}

int run_selftest(const Globals& g, const testing::SuiteOptions& options)
{
    json checks = json::array();
    std::size_t failed = 0;
    std::size_t total = 0;
    testing::run_all_checks(options, [&](const testing::CheckResult& r) {
        ++total;
        failed += r.passed ? 0 : 1;
        if (g.json_output) {
            checks.push_back({{"name", r.name}, {"passed", r.passed}, {"cases", r.cases}, {"failure", r.failure}});
            return;
        }
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases << ")";
        if (!r.passed) {
            std::cout << ": " << r.failure;
        }
        std::cout << "\n" << std::flush;
    });
    if (g.json_output) {
        json j;
        j["input_echo"] = {{"seed", options.seed}, {"n_max", options.n_max}, {"count", options.count}};
        j["result"] = checks;
        j["method"] = nullptr;
        j["stats"] = {{"checks", total}, {"failed", failed}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (total - failed) << "/" << total << " checks passed\n";
    }
    return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Whitney polynomials, medial maps, characteristic and flow polynomials of hypermaps"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_flag("--json", g.json_output, "Emit {input_echo, result, method, stats} as JSON");
    app.add_flag("--parallel", g.parallel, "Use all hardware threads for brute-force enumeration");
    app.add_option("--max-refinements", g.max_refinements, "Refuse instances with more refinements of alpha")
        ->capture_default_str();
    app.add_option("--max-flow-space", g.max_flow_space, "Refuse enumerating more than this many flows")->capture_default_str();

    std::string input;
    auto with_input = [&](CLI::App* sub) {
        sub->add_option("input", input, "Hypermap file (text or JSON), or - for stdin")->required();
        return sub;
    };

    std::string method = "brute";
    bool check = false;
    CLI::App* whitney_cmd = with_input(app.add_subcommand("whitney", "Whitney polynomial R(u, v)"));
    whitney_cmd->add_option("--method", method, "brute, phi, psi or all")
        ->check(CLI::IsMember({"brute", "phi", "psi", "all"}))
        ->capture_default_str();
    whitney_cmd->add_flag("--check", check, "Compute by all three methods and fail on disagreement");

    CLI::App* genus_cmd = with_input(app.add_subcommand("genus", "Genus of the collection"));
    CLI::App* dual_cmd = with_input(app.add_subcommand("dual", "Dual collection (alpha^-1 sigma, alpha^-1)"));
    CLI::App* medial_cmd = with_input(app.add_subcommand("medial", "Medial map in signed points i-, i+"));
    CLI::App* circuit_cmd = with_input(app.add_subcommand("circuit-partition", "Circuit partition polynomial j(M; x)"));
    CLI::App* wet_dry_cmd = with_input(app.add_subcommand("wet-dry", "Wet/dry region polynomial (genus 0)"));
    CLI::App* charpoly_cmd = with_input(app.add_subcommand("charpoly", "Characteristic polynomial chi(t)"));
    CLI::App* flowpoly_cmd = with_input(app.add_subcommand("flowpoly", "Flow polynomial C(t)"));

    int q = 2;
    bool nowhere_zero = false;
    CLI::App* flows_cmd = with_input(app.add_subcommand("flows", "Count flows over GF(q)"));
    flows_cmd->add_option("--q", q, "Prime field size")->required();
    flows_cmd->add_flag("--nowhere-zero", nowhere_zero, "Count only nowhere-zero flows");

    int m = 2;
    bool eulerian = false;
    CLI::App* colorings_cmd = with_input(app.add_subcommand("colorings", "Count proper vertex m-colorings"));
    colorings_cmd->add_option("--m", m, "Number of colors")->required()->check(CLI::PositiveNumber);
    colorings_cmd->add_flag("--eulerian", eulerian, "Sum of valence products over Eulerian edge colorings instead");

    CLI::App* digraph_cmd = app.add_subcommand("from-digraph", "Collection whose medial digraph is the given Eulerian digraph");
    digraph_cmd->add_option("edgelist", input, "Edge list, one `tail head` per line, or - for stdin")->required();

    testing::SuiteOptions suite;
    CLI::App* selftest_cmd = app.add_subcommand("selftest", "Run every property check on a seeded corpus");
    selftest_cmd->add_option("--n-max", suite.n_max, "Largest instance size")->capture_default_str()->check(CLI::Range(1, 12));
    selftest_cmd->add_option("--seed", suite.seed, "Corpus seed")->capture_default_str();
    selftest_cmd->add_option("--count", suite.count, "Corpus size")->capture_default_str()->check(CLI::Range(1, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (selftest_cmd->parsed()) {
            return run_selftest(g, suite);
        }
        if (digraph_cmd->parsed()) {
            const DigraphDocument d = parse_edge_list(read_input(input));
            const HypermapCollection h = from_eulerian_digraph(d.graph);
            Output out;
            const HypermapDocument doc = HypermapDocument::from_collection(h);
            out.text = print_hypermap(doc);
            out.result = to_json(doc);
            out.input_echo = print_edge_list(d.graph);
            emit(out, g);
            return 0;
        }

        const HypermapDocument doc = parse_hypermap(read_input(input));
        const HypermapCollection h = doc.collection();
        Output out;
        if (whitney_cmd->parsed()) {
            out = run_whitney(h, g, method, check);
        } else if (genus_cmd->parsed()) {
            out = scalar(std::to_string(h.genus()));
            out.stats = {{"n", h.size()},
                         {"kappa", h.kappa()},
                         {"z_sigma", h.sigma().cycle_count()},
                         {"z_alpha", h.alpha().cycle_count()},
                         {"z_faces", h.faces().cycle_count()}};
        } else if (dual_cmd->parsed()) {
            const HypermapDocument d = with_collection(doc, dual(h));
            out.text = print_hypermap(d);
            out.result = to_json(d);
        } else if (medial_cmd->parsed()) {
            const EulerianMap medial = medial_map(h);
            out.text = "vertices: " + signed_cycles(medial.sigma_prime) + "\nedges: " + signed_cycles(medial.alpha_prime) + "\n";
            out.result = {{"vertices", signed_cycles(medial.sigma_prime)}, {"edges", signed_cycles(medial.alpha_prime)}};
            out.stats = {{"vertices", medial.sigma_prime.cycle_count()}, {"edges", medial.alpha_prime.cycle_count()}};
        } else if (circuit_cmd->parsed()) {
            out = scalar(format(circuit_partition_polynomial(h, g.max_refinements), "x"));
        } else if (wet_dry_cmd->parsed()) {
            out = scalar(format(wet_dry_polynomial(h, g.max_refinements)));
        } else if (charpoly_cmd->parsed()) {
            out = scalar(format(characteristic_polynomial(h, g.max_refinements), "t"));
        } else if (flowpoly_cmd->parsed()) {
            out = scalar(format(flow_polynomial(h, g.max_refinements), "t"));
        } else if (flows_cmd->parsed()) {
            const FlowSpace space = flow_space(h, q);
            out = scalar(to_string(nowhere_zero ? nowhere_zero_flow_count(h, q, g.max_flow_space) : flow_count(h, q)));
            out.stats = {{"q", q}, {"dimension", space.dimension}};
        } else if (colorings_cmd->parsed()) {
            out = scalar(to_string(eulerian ? eulerian_coloring_sum(h, m, g.max_refinements)
                                            : proper_coloring_count(h, m, g.max_refinements)));
            out.stats = {{"m", m}};
        }
        out.input_echo = to_json(doc);
        emit(out, g);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
