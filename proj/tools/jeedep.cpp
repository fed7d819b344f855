// jeedep: dependency graphs for multilanguage web applications.
//
//   jeedep analyze <root> [--mode full|baseline] [--format json|dot|graphml] [--out path] ...
//   jeedep diff <a.json> <b.json>
//   jeedep eval <graph.json> <truth.txt>
//
// Machine output (graph, Json reports) goes to stdout or --out; the human
// summary goes to stderr. Exit codes: 0 ok, 1 usage, 2 fatal IO or schema.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "jeedep/eval.hpp"
#include "jeedep/pipeline.hpp"
#include "jeedep/serialize.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kFatal = 2;

bool read_file(const std::string& path, std::string& out)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream buf;
    buf << in.rdbuf();
    out = buf.str();
    return true;
}

bool write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return bool(std::cout);
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    return bool(out);
}

struct AnalyzeArgs {
    std::string root;
    std::string mode = "full";
    std::string format = "json";
    std::string out;
    std::string web_root;
    std::string tag_rules;
    std::string unresolved = "placeholder";
    std::string externals = "ignore";
    std::string dump_lowered;
    std::string report;
    unsigned threads = 0;
};

int run_analyze(const AnalyzeArgs& a)
{
    jeedep::AnalysisConfig config;
    config.root = a.root;
    config.mode = *jeedep::parse_analysis_mode(a.mode);
    config.unresolved =
        a.unresolved == "drop" ? jeedep::UnresolvedPolicy::Drop : jeedep::UnresolvedPolicy::Placeholder;
    config.externals = a.externals == "placeholder" ? jeedep::ExternalPolicy::Placeholder : jeedep::ExternalPolicy::Ignore;
    config.threads = a.threads;
    if (!a.web_root.empty()) config.web_root = a.web_root;
    if (!a.dump_lowered.empty()) config.dump_lowered = a.dump_lowered;
    if (!a.tag_rules.empty()) {
        std::string text;
        if (!read_file(a.tag_rules, text)) {
            std::cerr << "jeedep: cannot read " << a.tag_rules << "\n";
            return kFatal;
        }
        try {
            config.tag_rules = jeedep::merge_tag_rules(text);
        } catch (const std::invalid_argument& e) {
            std::cerr << "jeedep: " << a.tag_rules << ": " << e.what() << "\n";
            return kFatal;
        }
    }

    jeedep::AnalysisResult result;
    try {
        result = jeedep::analyze(config);
    } catch (const jeedep::IoError& e) {
        std::cerr << "jeedep: " << e.what() << "\n";
        return kFatal;
    }

    const auto format = *jeedep::parse_graph_format(a.format);
    if (!write_output(a.out, jeedep::serialize(result.graph, format))) {
        std::cerr << "jeedep: cannot write " << a.out << "\n";
        return kFatal;
    }
    if (!a.report.empty() && !write_output(a.report, jeedep::report_json(result))) {
        std::cerr << "jeedep: cannot write " << a.report << "\n";
        return kFatal;
    }
    std::cerr << jeedep::report_summary(result) << "\n";
    return 0;
}

int run_diff(const std::string& a, const std::string& b)
{
    try {
        auto ga = jeedep::load_graph_file(a);
        auto gb = jeedep::load_graph_file(b);
        auto delta = jeedep::diff(ga, gb);
        std::cout << jeedep::diff_json(delta);
        std::cerr << jeedep::diff_report(delta);
    } catch (const jeedep::GraphError& e) {
        std::cerr << "jeedep: " << e.what() << "\n";
        return kFatal;
    }
    return 0;
}

int run_eval(const std::string& graph_path, const std::string& truth_path, bool include_contains)
{
    std::string truth_text;
    if (!read_file(truth_path, truth_text)) {
        std::cerr << "jeedep: cannot read " << truth_path << "\n";
        return kFatal;
    }
    try {
        auto graph = jeedep::load_graph_file(graph_path);
        auto truth = jeedep::parse_truth(truth_text);
        auto report = jeedep::evaluate(graph, truth, {include_contains});
        std::cout << jeedep::eval_json(report);
        std::cerr << jeedep::eval_table(report);
    } catch (const jeedep::GraphError& e) {
        std::cerr << "jeedep: " << e.what() << "\n";
        return kFatal;
    } catch (const jeedep::TruthError& e) {
        std::cerr << "jeedep: " << truth_path << ": " << e.what() << "\n";
        return kFatal;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dependency graphs for multilanguage web applications"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(jeedep::kToolVersion));

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "Extract the dependency graph of a project tree");
    analyze->add_option("root", an.root, "Project root")->required();
    analyze->add_option("--mode", an.mode, "full or baseline")->check(CLI::IsMember({"full", "baseline"}));
    analyze->add_option("--format", an.format, "json, dot or graphml")
        ->check(CLI::IsMember({"json", "dot", "graphml"}));
    analyze->add_option("--out", an.out, "Graph output file (default stdout)");
    analyze->add_option("--web-root", an.web_root, "Web root relative to the project root");
    analyze->add_option("--tag-rules", an.tag_rules, "Json file with extra tag rules");
    analyze->add_option("--unresolved", an.unresolved, "drop or placeholder")
        ->check(CLI::IsMember({"drop", "placeholder"}));
    analyze->add_option("--externals", an.externals, "Calls into library types: ignore or placeholder")
        ->check(CLI::IsMember({"ignore", "placeholder"}));
    analyze->add_option("--dump-lowered", an.dump_lowered, "Write the lowered page sources here");
    analyze->add_option("--report", an.report, "Write the analysis report (Json) here");
    analyze->add_option("--threads", an.threads, "Worker threads (0: one per core)");

    std::string diff_a, diff_b;
    auto* diff = app.add_subcommand("diff", "Compare two graphs");
    diff->add_option("a", diff_a, "First graph (Json)")->required();
    diff->add_option("b", diff_b, "Second graph (Json)")->required();

    std::string eval_graph, eval_truth;
    bool include_contains = false;
    auto* eval = app.add_subcommand("eval", "Score a graph against a ground truth");
    eval->add_option("graph", eval_graph, "Graph (Json)")->required();
    eval->add_option("truth", eval_truth, "Truth file: 'source -> target [kind]' per line")->required();
    eval->add_flag("--include-contains", include_contains, "Also score containment edges");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    if (*analyze) return run_analyze(an);
    if (*diff) return run_diff(diff_a, diff_b);
    return run_eval(eval_graph, eval_truth, include_contains);
}
