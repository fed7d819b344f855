#include "jeedep/literals.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "java_walk.hpp"

namespace jeedep {

std::string_view to_string(LiteralKind kind)
{
    switch (kind) {
    case LiteralKind::Attribute: return "attribute";
    case LiteralKind::Write: return "write";
    case LiteralKind::Lookup: return "lookup";
    }
    return "attribute";
}

std::vector<LiteralSite> source_literals(const ProjectIndex& index)
{
    std::vector<LiteralSite> out;
    std::set<const OoCompilationUnit*> units;
    for (const auto& [name, cls] : index.classes()) {
        if (!cls.synthetic) units.insert(cls.unit);
        java::walk_class(*cls.decl, [&](const Expr& e, const java::Scope&, const java::Member&) {
            if (e.kind != Expr::Kind::Call || e.text != "lookup" || e.arity() != 1) return;
            const Expr& arg = e.arg(0);
            if (arg.kind != Expr::Kind::StringLit) return;
            SourceLocation open = index.locate(cls, arg.pos);
            SourceLocation close = open;
            close.column += static_cast<int>(arg.text.size()) + 1;
            out.push_back({LiteralKind::Lookup, open, close});
        });
    }
    for (const auto* unit : units) {
        for (const auto& site : collect_string_writes(*unit)) {
            for (const auto& f : site.fragments) {
                if (f.hole) continue;
                // Decoded length; escapes make the source span longer, and the
                // close only has to cover evidence cited inside the literal.
                SourceLocation open{site.path, f.pos.line, f.pos.column};
                SourceLocation close = open;
                close.column += static_cast<int>(f.text.size()) + 1;
                out.push_back({LiteralKind::Write, open, close});
            }
        }
    }
    return out;
}

LiteralClassification classify_literals(const std::vector<LiteralSite>& sites, const DependencyGraph& graph)
{
    std::map<std::string, std::vector<SourceLocation>> cited;
    for (const auto& [key, rel] : graph.relationships())
        if (rel.kind != RelationKind::Contains) cited[rel.evidence.location.path].push_back(rel.evidence.location);
    for (auto& [path, locs] : cited) std::sort(locs.begin(), locs.end());

    LiteralClassification out;
    std::set<std::pair<SourceLocation, LiteralKind>> seen;
    for (const auto& site : sites) {
        if (!seen.emplace(site.open, site.kind).second) continue;
        bool bearing = false;
        if (auto it = cited.find(site.open.path); it != cited.end()) {
            auto first = std::lower_bound(it->second.begin(), it->second.end(), site.open);
            bearing = first != it->second.end() && *first <= site.close;
        }
        for (LiteralCounts* c : {&out.all, &out.by_kind[std::string(to_string(site.kind))], &out.by_file[site.open.path]}) {
            ++c->total;
            if (bearing) ++c->bearing;
        }
    }
    return out;
}

std::string format_ratio(std::size_t part, std::size_t whole)
{
    char buf[64];
    if (whole == 0)
        std::snprintf(buf, sizeof buf, "n/a (%zu/%zu)", part, whole);
    else {
        // Truncated to tenths: 65/204 is 31.86% and reads "31.8%".
        const std::size_t tenths = part * 1000 / whole;
        std::snprintf(buf, sizeof buf, "%zu.%zu%% (%zu/%zu)", tenths / 10, tenths % 10, part, whole);
    }
    return buf;
}

} // namespace jeedep
