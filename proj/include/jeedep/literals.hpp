#pragma once

#include <map>
#include <string>
#include <vector>

#include "jeedep/graph.hpp"
#include "jeedep/oo_frontend.hpp"

namespace jeedep {

// The counted universe: quoted attribute values in template markup, literal
// fragments of response writes in source classes, and literal arguments of
// lookup calls anywhere (scriptlets included).
enum class LiteralKind { Attribute, Write, Lookup };

std::string_view to_string(LiteralKind kind);

struct LiteralSite {
    LiteralKind kind = LiteralKind::Attribute;
    SourceLocation open;   // opening quote
    SourceLocation close;  // closing quote, same path
};

struct LiteralCounts {
    std::size_t total = 0;
    std::size_t bearing = 0;  // cited by at least one edge

    bool operator==(const LiteralCounts&) const = default;
};

struct LiteralClassification {
    LiteralCounts all;
    std::map<std::string, LiteralCounts> by_kind;
    std::map<std::string, LiteralCounts> by_file;
};

// Write and lookup literals of the indexed classes. Write literals are taken
// from source classes only; lowered pages contribute through their markup.
std::vector<LiteralSite> source_literals(const ProjectIndex& index);

// A literal is dependency-bearing iff some non-containment edge has its
// evidence location inside the literal's span.
LiteralClassification classify_literals(const std::vector<LiteralSite>& sites, const DependencyGraph& graph);

// "31.8% (65/204)", truncated to tenths; "n/a (0/0)" when there is nothing
// to count.
std::string format_ratio(std::size_t part, std::size_t whole);

} // namespace jeedep
