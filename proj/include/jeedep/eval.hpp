#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jeedep/graph.hpp"

namespace jeedep {

// One expected dependency. Lines read "source -> target [Kind]"; '#' starts a
// comment. Without a kind any relationship kind matches.
struct TruthEdge {
    std::string source;
    std::string target;
    std::optional<RelationKind> kind;
    int line = 0;
};

class TruthError : public std::runtime_error {
public:
    TruthError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    int line() const { return line_; }

private:
    int line_;
};

std::vector<TruthEdge> parse_truth(std::string_view text);

struct EvalOptions {
    bool include_contains = false;
};

// Graph edges are compared as distinct (source name, target name, kind)
// triples. A graph name matches a truth name when equal, or equal after
// dropping a trailing "/N" arity.
struct EvalReport {
    std::size_t matched = 0;        // graph triples matched by some truth edge
    std::size_t extra = 0;          // graph triples matched by none
    std::size_t missing = 0;        // truth edges matching no graph triple
    std::size_t truth_size = 0;
    std::optional<double> precision;  // absent when undefined
    std::optional<double> recall;
    std::vector<std::string> matched_edges;
    std::vector<std::string> extra_edges;
    std::vector<std::string> missing_edges;
    std::vector<std::string> unmatched_names;  // truth names naming no entity
};

EvalReport evaluate(const DependencyGraph& graph, const std::vector<TruthEdge>& truth, const EvalOptions& options = {});

std::string eval_json(const EvalReport& report);
std::string eval_table(const EvalReport& report);

// Printable delta between two graphs, with improvement percentages.
std::string diff_report(const GraphDelta& delta);
std::string diff_json(const GraphDelta& delta);

} // namespace jeedep
