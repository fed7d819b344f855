#include "jeedep/eval.hpp"

#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace jeedep {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// "pkg.C.m/2" -> "pkg.C.m"
std::string_view strip_arity(std::string_view name)
{
    auto slash = name.rfind('/');
    if (slash == std::string_view::npos || slash + 1 == name.size()) return name;
    for (std::size_t i = slash + 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return name;
    return name.substr(0, slash);
}

bool name_matches(std::string_view graph_name, std::string_view truth_name)
{
    return graph_name == truth_name || strip_arity(graph_name) == truth_name;
}

using Triple = std::tuple<std::string, std::string, RelationKind>;

std::string show(const Triple& t)
{
    return std::get<0>(t) + " -> " + std::get<1>(t) + " " + std::string(to_string(std::get<2>(t)));
}

std::string show(const TruthEdge& t)
{
    return t.source + " -> " + t.target + (t.kind ? " " + std::string(to_string(*t.kind)) : std::string());
}

std::string percent(const std::optional<double>& v)
{
    if (!v) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", *v * 100.0);
    return buf;
}

} // namespace

std::vector<TruthEdge> parse_truth(std::string_view text)
{
    std::vector<TruthEdge> out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        // '#' opens a comment at the start of a line or after whitespace;
        // inside a name it is part of the name ("x.tld#tag").
        for (std::size_t i = 0; i < line.size(); ++i)
            if (line[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
                line = line.substr(0, i);
                break;
            }
        line = trim(line);
        if (line.empty()) continue;

        auto arrow = line.find("->");
        if (arrow == std::string_view::npos) throw TruthError("expected 'source -> target [kind]'", line_no);
        TruthEdge edge;
        edge.line = line_no;
        edge.source = std::string(trim(line.substr(0, arrow)));
        std::istringstream rest{std::string(line.substr(arrow + 2))};
        std::string target, kind, junk;
        rest >> target >> kind >> junk;
        if (edge.source.empty() || target.empty()) throw TruthError("missing source or target", line_no);
        if (edge.source.find_first_of(" \t") != std::string::npos)
            throw TruthError("names cannot contain spaces", line_no);
        if (!junk.empty()) throw TruthError("unexpected text after the kind", line_no);
        edge.target = target;
        if (kind.size() >= 2 && kind.front() == '[' && kind.back() == ']') kind = kind.substr(1, kind.size() - 2);
        if (!kind.empty() && kind != "*") {
            edge.kind = parse_relation_kind(kind);
            if (!edge.kind) throw TruthError("unknown relationship kind '" + kind + "'", line_no);
        }
        out.push_back(std::move(edge));
        if (end == text.size()) break;
    }
    return out;
}

EvalReport evaluate(const DependencyGraph& graph, const std::vector<TruthEdge>& truth, const EvalOptions& options)
{
    auto name_of = [&](const EntityId& id) {
        const Entity* e = graph.find(id);
        return e ? e->name : id.str();
    };
    std::set<Triple> triples;
    for (const auto& [key, rel] : graph.relationships()) {
        if (rel.kind == RelationKind::Contains && !options.include_contains) continue;
        triples.emplace(name_of(rel.source), name_of(rel.target), rel.kind);
    }
    auto matches = [](const TruthEdge& t, const Triple& g) {
        return name_matches(std::get<0>(g), t.source) && name_matches(std::get<1>(g), t.target) &&
               (!t.kind || *t.kind == std::get<2>(g));
    };

    EvalReport report;
    report.truth_size = truth.size();
    for (const auto& g : triples) {
        bool hit = false;
        for (const auto& t : truth)
            if (matches(t, g)) {
                hit = true;
                break;
            }
        (hit ? report.matched_edges : report.extra_edges).push_back(show(g));
    }
    std::size_t truth_hits = 0;
    for (const auto& t : truth) {
        bool hit = false;
        for (const auto& g : triples)
            if (matches(t, g)) {
                hit = true;
                break;
            }
        if (hit)
            ++truth_hits;
        else
            report.missing_edges.push_back(show(t));
    }

    std::set<std::string> unmatched;
    for (const auto& t : truth)
        for (const std::string* name : {&t.source, &t.target}) {
            bool known = false;
            for (const auto& [id, e] : graph.entities())
                if (name_matches(e.name, *name)) {
                    known = true;
                    break;
                }
            if (!known) unmatched.insert(*name);
        }
    report.unmatched_names.assign(unmatched.begin(), unmatched.end());

    report.matched = report.matched_edges.size();
    report.extra = report.extra_edges.size();
    report.missing = report.missing_edges.size();
    if (report.matched + report.extra > 0)
        report.precision = static_cast<double>(report.matched) / static_cast<double>(report.matched + report.extra);
    if (!truth.empty()) report.recall = static_cast<double>(truth_hits) / static_cast<double>(truth.size());
    return report;
}

std::string eval_json(const EvalReport& r)
{
    nlohmann::ordered_json doc;
    auto value = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json("n/a"); };
    doc["precision"] = value(r.precision);
    doc["recall"] = value(r.recall);
    doc["matched"] = r.matched;
    doc["extra"] = r.extra;
    doc["missing"] = r.missing;
    doc["truth_edges"] = r.truth_size;
    doc["matched_edges"] = r.matched_edges;
    doc["extra_edges"] = r.extra_edges;
    doc["missing_edges"] = r.missing_edges;
    doc["unmatched_names"] = r.unmatched_names;
    return doc.dump(2) + "\n";
}

std::string eval_table(const EvalReport& r)
{
    std::ostringstream out;
    out << "precision  " << percent(r.precision) << "  (" << r.matched << " matched, " << r.extra << " extra)\n";
    out << "recall     " << percent(r.recall) << "  (" << r.truth_size - r.missing << " of " << r.truth_size
        << " truth edges)\n";
    for (const auto& e : r.extra_edges) out << "  extra    " << e << "\n";
    for (const auto& e : r.missing_edges) out << "  missing  " << e << "\n";
    for (const auto& n : r.unmatched_names) out << "  unknown  " << n << "\n";
    return out.str();
}

std::string diff_report(const GraphDelta& delta)
{
    std::ostringstream out;
    auto store = [&](const char* label, const StoreDelta& d) {
        out << label << ": " << d.size_a << " -> " << d.size_b << "  only-in-a " << d.only_in_a.size()
            << "  only-in-b " << d.only_in_b.size() << "  improvement " << d.improvement_percent() << "%\n";
    };
    store("entities     ", delta.entities);
    store("relationships", delta.relationships);
    return out.str();
}

std::string diff_json(const GraphDelta& delta)
{
    auto store = [](const StoreDelta& d) {
        return nlohmann::ordered_json{{"size_a", d.size_a},
                                      {"size_b", d.size_b},
                                      {"common", d.common},
                                      {"improvement_percent", d.improvement_percent()},
                                      {"only_in_a", d.only_in_a},
                                      {"only_in_b", d.only_in_b}};
    };
    nlohmann::ordered_json doc;
    doc["entities"] = store(delta.entities);
    doc["relationships"] = store(delta.relationships);
    return doc.dump(2) + "\n";
}

} // namespace jeedep
