#pragma once

#include <optional>
#include <vector>

#include "jeedep/graph.hpp"
#include "jeedep/java_ast.hpp"
#include "jeedep/location.hpp"

namespace jeedep {

enum class TemplateNodeKind {
    Scriptlet,
    Declaration,
    Expression,
    UseBean,
    GetProperty,
    SetProperty,
    CustomTag,
    Directive,
    RawMarkup,
    Comment,
};

std::string_view to_string(TemplateNodeKind kind);

// One line of lowered source and where it came from in the template.
// Verbatim lines (scriptlet, declaration and expression code) keep their
// column layout, so columns map by offset; generated lines map to a single
// template location.
struct OriginEntry {
    int lowered_line = 1;
    int lowered_column = 1;  // column where the copied text starts (verbatim only)
    SourceLocation template_location;
    std::optional<TemplateNodeKind> node;  // nullopt for the generated prologue/epilogue
    bool verbatim = false;
};

struct OriginLookup {
    SourceLocation location;
    std::optional<TemplateNodeKind> node;
};

class OriginMap {
public:
    void add(OriginEntry entry);
    std::optional<OriginLookup> map(Position lowered) const;
    const std::vector<OriginEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<OriginEntry> entries_;  // sorted by lowered_line, one per line
};

// Attached to a lowered page unit so analyzers speak in page terms.
struct SyntheticContext {
    EntityId page;
    SourceLocation page_location;
    const OriginMap* origins = nullptr;
};

} // namespace jeedep
