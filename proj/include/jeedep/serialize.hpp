#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "jeedep/graph.hpp"

namespace jeedep {

enum class GraphFormat { Json, Dot, GraphMl };

std::optional<GraphFormat> parse_graph_format(std::string_view text);

// Writes a sealed graph. Output is deterministic: entities in id order,
// relationships in (source, target, kind, location) order.
void serialize(const DependencyGraph& graph, GraphFormat format, std::ostream& out);
std::string serialize(const DependencyGraph& graph, GraphFormat format);

// Reads the Json format back into a sealed graph. Throws GraphError(Schema)
// on malformed documents.
DependencyGraph deserialize_json(std::string_view text);
DependencyGraph load_graph_file(const std::string& path);

} // namespace jeedep
