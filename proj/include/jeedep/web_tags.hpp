#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "jeedep/config.hpp"
#include "jeedep/diagnostics.hpp"
#include "jeedep/graph.hpp"
#include "jeedep/oo_frontend.hpp"

namespace jeedep {

// A markup tag attribute that names another resource. Tag names are matched
// case-insensitively; "%@include" and "%@page" stand for the directives.
struct TagRule {
    std::string tag;
    std::string attribute;
    RelationKind kind = RelationKind::LinksTo;

    bool operator==(const TagRule&) const = default;
};

// The ten built-in rows.
const std::vector<TagRule>& builtin_tag_rules();

// Built-in rows plus the rows of a Json array [{tag, attribute, kind}]. A row
// with an existing (tag, attribute) replaces its kind. Throws
// std::invalid_argument on malformed documents.
std::vector<TagRule> merge_tag_rules(std::string_view json_text);

struct TagHit {
    TagRule rule;
    std::string raw;          // attribute value as written
    SourceLocation location;  // opening quote of the value (write sites: of the literal)
    EntityId container;       // page, html page or method
    std::string base;         // web path relative URLs resolve against
    bool dynamic = false;     // value contains code or a hole
    bool expression_language = false;
    std::string note;         // "form action", plus metadata such as method=post
};

// Finds rule attributes in markup. `origin` is the location of text[0].
// Text blanked with '\x01' (code regions) counts as dynamic content; dynamic
// values are reported here and never resolved.
std::vector<TagHit> scan_markup(std::string_view text, const SourceLocation& origin, const EntityId& container,
                                std::string_view base, const std::vector<TagRule>& rules, Diagnostics& diags);

// Scans output-stream literals; only form/action and a/href apply. Values
// that span a hole are dynamic and reported with a diagnostic.
std::vector<TagHit> scan_write_sites(const std::vector<StringWriteSite>& sites, const EntityId& owner,
                                     std::string_view base, Diagnostics& diags);

// Span of one quoted attribute value, quotes included.
struct QuotedValue {
    SourceLocation open;
    SourceLocation close;
};

// Every quoted attribute value of every tag and directive in markup.
std::vector<QuotedValue> quoted_attribute_values(std::string_view text, const SourceLocation& origin,
                                                 Diagnostics& diags);

// Normalizes and looks up each hit; emits one edge of the rule's kind per
// resolved hit. Unresolvable targets are recorded as dangling edges named by
// the normalized path and handled by the graph's unresolved policy. Dynamic
// hits are skipped; expression-language values are left to the EL analyzer.
void resolve_hits(const std::vector<TagHit>& hits, const UrlMappingTable& mapping, DependencyGraph& graph,
                  Diagnostics& diags);

} // namespace jeedep
