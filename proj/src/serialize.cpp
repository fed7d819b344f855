#include "jeedep/serialize.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace jeedep {

using json = nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

json location_json(const SourceLocation& loc)
{
    return json{{"path", loc.path}, {"line", loc.line}, {"column", loc.column}};
}

SourceLocation location_from(const json& j)
{
    SourceLocation loc;
    loc.path = j.at("path").get<std::string>();
    loc.line = j.at("line").get<int>();
    loc.column = j.at("column").get<int>();
    if (!loc.valid()) throw GraphError(GraphError::Code::Schema, "invalid location " + loc.str());
    return loc;
}

template <typename T>
T parse_kind(std::optional<T> value, const std::string& text, const char* what)
{
    if (!value) throw GraphError(GraphError::Code::Schema, std::string("unknown ") + what + " '" + text + "'");
    return *value;
}

void write_json(const DependencyGraph& graph, std::ostream& out)
{
    json doc;
    doc["schema"] = kSchemaVersion;
    doc["meta"] = json{{"tool_version", graph.meta().tool_version},
                       {"project_root_hash", graph.meta().project_root_hash}};

    json entities = json::array();
    for (const auto& [id, e] : graph.entities()) {
        json j{{"id", id.str()},
               {"kind", to_string(e.kind)},
               {"name", e.name},
               {"location", location_json(e.location)},
               {"synthetic", e.synthetic}};
        if (e.parent) j["parent"] = e.parent->str();
        entities.push_back(std::move(j));
    }
    doc["entities"] = std::move(entities);

    json rels = json::array();
    for (const auto& [key, r] : graph.relationships()) {
        rels.push_back(json{{"source", r.source.str()},
                            {"target", r.target.str()},
                            {"kind", to_string(r.kind)},
                            {"evidence", json{{"analyzer", to_string(r.evidence.analyzer)},
                                              {"location", location_json(r.evidence.location)},
                                              {"note", r.evidence.note}}}});
    }
    doc["relationships"] = std::move(rels);
    out << doc.dump(2) << '\n';
}

std::string dot_escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out;
}

std::string_view dot_shape(EntityKind kind)
{
    switch (kind) {
    case EntityKind::Package: return "folder";
    case EntityKind::ClassUnit: return "box";
    case EntityKind::MethodUnit: return "ellipse";
    case EntityKind::FieldUnit: return "plaintext";
    case EntityKind::ServerPage:
    case EntityKind::HtmlPage: return "note";
    case EntityKind::ConfigFile:
    case EntityKind::TagDefinition: return "component";
    case EntityKind::Container: return "doubleoctagon";
    case EntityKind::UnresolvedTarget: return "diamond";
    }
    return "ellipse";
}

void write_dot(const DependencyGraph& graph, std::ostream& out)
{
    out << "digraph dependencies {\n";
    out << "  rankdir=LR;\n";
    for (const auto& [id, e] : graph.entities()) {
        out << "  \"" << id.str() << "\" [label=\"" << dot_escape(e.name) << "\", shape=" << dot_shape(e.kind)
            << ", kind=\"" << to_string(e.kind) << "\"];\n";
    }
    for (const auto& [key, r] : graph.relationships()) {
        out << "  \"" << r.source.str() << "\" -> \"" << r.target.str() << "\" [label=\"" << to_string(r.kind)
            << "\"";
        if (r.kind == RelationKind::Contains) out << ", style=dashed";
        out << "];\n";
    }
    out << "}\n";
}

std::string xml_escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

void write_graphml(const DependencyGraph& graph, std::ostream& out)
{
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
           "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
           "  <key id=\"name\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n"
           "  <key id=\"location\" for=\"node\" attr.name=\"location\" attr.type=\"string\"/>\n"
           "  <key id=\"synthetic\" for=\"node\" attr.name=\"synthetic\" attr.type=\"boolean\"/>\n"
           "  <key id=\"relation\" for=\"edge\" attr.name=\"kind\" attr.type=\"string\"/>\n"
           "  <key id=\"analyzer\" for=\"edge\" attr.name=\"analyzer\" attr.type=\"string\"/>\n"
           "  <key id=\"evidence\" for=\"edge\" attr.name=\"evidence\" attr.type=\"string\"/>\n"
           "  <key id=\"note\" for=\"edge\" attr.name=\"note\" attr.type=\"string\"/>\n"
           "  <graph id=\"dependencies\" edgedefault=\"directed\">\n";
    for (const auto& [id, e] : graph.entities()) {
        out << "    <node id=\"" << id.str() << "\">\n"
            << "      <data key=\"kind\">" << to_string(e.kind) << "</data>\n"
            << "      <data key=\"name\">" << xml_escape(e.name) << "</data>\n"
            << "      <data key=\"location\">" << xml_escape(e.location.str()) << "</data>\n"
            << "      <data key=\"synthetic\">" << (e.synthetic ? "true" : "false") << "</data>\n"
            << "    </node>\n";
    }
    std::size_t n = 0;
    for (const auto& [key, r] : graph.relationships()) {
        out << "    <edge id=\"e" << n++ << "\" source=\"" << r.source.str() << "\" target=\"" << r.target.str()
            << "\">\n"
            << "      <data key=\"relation\">" << to_string(r.kind) << "</data>\n"
            << "      <data key=\"analyzer\">" << to_string(r.evidence.analyzer) << "</data>\n"
            << "      <data key=\"evidence\">" << xml_escape(r.evidence.location.str()) << "</data>\n"
            << "      <data key=\"note\">" << xml_escape(r.evidence.note) << "</data>\n"
            << "    </edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

} // namespace

std::optional<GraphFormat> parse_graph_format(std::string_view text)
{
    if (text == "json") return GraphFormat::Json;
    if (text == "dot") return GraphFormat::Dot;
    if (text == "graphml") return GraphFormat::GraphMl;
    return std::nullopt;
}

void serialize(const DependencyGraph& graph, GraphFormat format, std::ostream& out)
{
    if (!graph.sealed()) throw GraphError(GraphError::Code::NotSealed, "serialize requires a sealed graph");
    switch (format) {
    case GraphFormat::Json: write_json(graph, out); break;
    case GraphFormat::Dot: write_dot(graph, out); break;
    case GraphFormat::GraphMl: write_graphml(graph, out); break;
    }
    if (!out) throw GraphError(GraphError::Code::Io, "failed to write graph");
}

std::string serialize(const DependencyGraph& graph, GraphFormat format)
{
    std::ostringstream out;
    serialize(graph, format, out);
    return out.str();
}

DependencyGraph deserialize_json(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw GraphError(GraphError::Code::Schema, std::string("not a graph document: ") + e.what());
    }

    try {
        if (!doc.is_object() || !doc.contains("entities") || !doc.contains("relationships"))
            throw GraphError(GraphError::Code::Schema, "graph document needs 'entities' and 'relationships'");
        if (doc.value("schema", kSchemaVersion) != kSchemaVersion)
            throw GraphError(GraphError::Code::Schema, "unsupported schema version");

        GraphMeta meta;
        if (doc.contains("meta")) {
            meta.tool_version = doc["meta"].value("tool_version", "");
            meta.project_root_hash = doc["meta"].value("project_root_hash", "");
        }

        std::vector<Entity> entities;
        for (const auto& j : doc.at("entities")) {
            Entity e;
            e.id = EntityId(j.at("id").get<std::string>());
            auto kind = j.at("kind").get<std::string>();
            e.kind = parse_kind(parse_entity_kind(kind), kind, "entity kind");
            e.name = j.at("name").get<std::string>();
            if (j.contains("parent")) e.parent = EntityId(j.at("parent").get<std::string>());
            e.location = location_from(j.at("location"));
            e.synthetic = j.value("synthetic", false);
            entities.push_back(std::move(e));
        }

        std::vector<Relationship> rels;
        for (const auto& j : doc.at("relationships")) {
            Relationship r;
            r.source = EntityId(j.at("source").get<std::string>());
            r.target = EntityId(j.at("target").get<std::string>());
            auto kind = j.at("kind").get<std::string>();
            r.kind = parse_kind(parse_relation_kind(kind), kind, "relationship kind");
            const auto& ev = j.at("evidence");
            auto analyzer = ev.at("analyzer").get<std::string>();
            r.evidence.analyzer = parse_kind(parse_analyzer(analyzer), analyzer, "analyzer");
            r.evidence.location = location_from(ev.at("location"));
            r.evidence.note = ev.value("note", "");
            rels.push_back(std::move(r));
        }
        return DependencyGraph::restore(std::move(entities), std::move(rels), std::move(meta));
    } catch (const json::exception& e) {
        throw GraphError(GraphError::Code::Schema, std::string("malformed graph document: ") + e.what());
    }
}

DependencyGraph load_graph_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GraphError(GraphError::Code::Io, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return deserialize_json(buffer.str());
}

} // namespace jeedep
