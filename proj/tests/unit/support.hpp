#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <unistd.h>

#include "jeedep/pipeline.hpp"

namespace test {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(JEEDEP_FIXTURES) / name; }

inline std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline jeedep::AnalysisResult run(const std::string& name, jeedep::AnalysisMode mode = jeedep::AnalysisMode::Full)
{
    jeedep::AnalysisConfig config;
    config.root = fixture(name);
    config.mode = mode;
    return jeedep::analyze(config);
}

inline jeedep::AnalysisResult run_dir(const std::filesystem::path& root,
                                     jeedep::AnalysisMode mode = jeedep::AnalysisMode::Full)
{
    jeedep::AnalysisConfig config;
    config.root = root;
    config.mode = mode;
    return jeedep::analyze(config);
}

inline std::string name_of(const jeedep::DependencyGraph& g, const jeedep::EntityId& id)
{
    const auto* e = g.find(id);
    return e ? e->name : id.str();
}

// Distinct "source -> target Kind" lines for non-containment edges.
inline std::set<std::string> edge_lines(const jeedep::DependencyGraph& g)
{
    std::set<std::string> out;
    for (const auto& [key, r] : g.relationships())
        if (r.kind != jeedep::RelationKind::Contains)
            out.insert(name_of(g, r.source) + " -> " + name_of(g, r.target) + " " + std::string(to_string(r.kind)));
    return out;
}

inline bool has_edge(const jeedep::DependencyGraph& g, const std::string& line) { return edge_lines(g).count(line) != 0; }

// Scratch directory removed on scope exit.
struct TempDir {
    std::filesystem::path path;
    TempDir()
    {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("jeedep-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    void write(const std::string& rel, const std::string& text) const
    {
        auto p = path / rel;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream(p, std::ios::binary) << text;
    }
};

} // namespace test
