#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jeedep/diagnostics.hpp"
#include "jeedep/graph.hpp"
#include "jeedep/literals.hpp"
#include "jeedep/oo_frontend.hpp"
#include "jeedep/web_tags.hpp"

namespace jeedep {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Baseline runs the source frontend and records descriptor entities only.
enum class AnalysisMode { Baseline, Full };

std::string_view to_string(AnalysisMode mode);
std::optional<AnalysisMode> parse_analysis_mode(std::string_view text);

struct AnalysisConfig {
    std::filesystem::path root;
    std::optional<std::string> web_root;  // project-relative; found via WEB-INF when absent
    AnalysisMode mode = AnalysisMode::Full;
    UnresolvedPolicy unresolved = UnresolvedPolicy::Placeholder;
    ExternalPolicy externals = ExternalPolicy::Ignore;
    std::vector<TagRule> tag_rules = builtin_tag_rules();
    std::optional<std::filesystem::path> dump_lowered;  // writes <class>.java per page
    unsigned threads = 0;                               // 0: hardware concurrency
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PageStats {
    std::size_t server_pages = 0;
    std::size_t html_pages = 0;
    std::size_t multilanguage = 0;  // server pages with a scriptlet, declaration or expression

    std::size_t total() const { return server_pages + html_pages; }
};

struct AnalysisResult {
    AnalysisMode mode = AnalysisMode::Full;
    std::string web_root;
    DependencyGraph graph;  // sealed
    Diagnostics diagnostics;
    SealReport seal;
    PageStats pages;
    std::vector<std::string> multilanguage_pages;  // web paths
    LiteralClassification literals;
};

// Runs the whole pipeline. Throws IoError when the root is not a readable
// directory; problems with single files become diagnostics.
AnalysisResult analyze(const AnalysisConfig& config);

// Hash over the sorted (path, content hash) pairs of the analyzed files.
std::string project_hash(const std::vector<std::pair<std::string, std::string>>& files);

// The analysis report as a Json document.
std::string report_json(const AnalysisResult& result);

// "entities=12 relationships=30 ..." for terminals.
std::string report_summary(const AnalysisResult& result);

} // namespace jeedep
