#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "jeedep/diagnostics.hpp"
#include "jeedep/graph.hpp"
#include "jeedep/oo_frontend.hpp"

namespace jeedep {

struct ElSegment {
    std::string name;
    bool call = false;
    std::vector<std::string> args;  // literal arguments as written
};

// `${base.seg.call(args)}` or `#{...}`. Anything outside that grammar keeps
// parsed == false and only `raw`.
struct ElExpression {
    std::string raw;
    bool parsed = false;
    char sigil = '$';
    std::string base;
    std::vector<ElSegment> segments;
};

// Never throws.
ElExpression parse_el(std::string_view text);

// Canonical spelling of a parsed expression; `raw` for unparsed ones.
std::string render(const ElExpression& expr);

// An expression found in markup, with the location of its "${" or "#{".
struct ElSite {
    ElExpression expr;
    SourceLocation location;
    std::size_t offset = 0;
    std::size_t length = 0;
};

// Finds ${...} and #{...} spans in text; `origin` is the location of text[0].
// An unclosed expression is reported and skipped.
std::vector<ElSite> find_el(std::string_view text, const SourceLocation& origin, Diagnostics& diags);

// EL-visible names and their classes (qualified).
using BeanScope = std::map<std::string, std::string>;

bool is_el_implicit_object(std::string_view name);

// Emits ElAccess edges from `source` for each resolvable step: a property goes
// to get<Prop>/0 or is<Prop>/0, falling back to the field; a call goes to the
// method of that arity. Types follow the chain while they stay in the project.
// Unknown bases and members are reported; implicit objects are skipped.
void resolve_el(const ElSite& site, const BeanScope& scope, const ProjectIndex& index, const EntityId& source,
                DependencyGraph& graph, Diagnostics& diags);

} // namespace jeedep
