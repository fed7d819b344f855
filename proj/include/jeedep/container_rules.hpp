#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "jeedep/config.hpp"
#include "jeedep/diagnostics.hpp"
#include "jeedep/graph.hpp"
#include "jeedep/oo_frontend.hpp"
#include "jeedep/template.hpp"

namespace jeedep {

inline constexpr std::string_view kWebContainer = "WebContainer";
inline constexpr std::string_view kEjbContainer = "EjbContainer";

Entity container_entity(std::string_view name);

// Base types (simple names) that make a class a servlet or a tag handler.
const std::set<std::string, std::less<>>& servlet_bases();
const std::set<std::string, std::less<>>& tag_handler_bases();

// prefix -> uri from the page's taglib directives.
std::map<std::string, std::string> taglib_bindings(const TemplatePage& page);

struct TagUse {
    EntityId page;
    std::string web_path;
    std::string tag;  // "prefix:name" as written
    const TagSpec* spec = nullptr;
    std::vector<TemplateAttribute> attributes;  // as provided
    SourceLocation location;                    // the start tag
};

// One TagUse per start tag whose prefix is bound to a project TLD declaring
// the tag. Unbound prefixes, unknown tags, undeclared attributes and missing
// required attributes are reported; the use is still returned for the last
// two.
std::vector<TagUse> find_tag_uses(const TemplatePage& page, const EntityId& page_id, std::string_view web_path,
                                  const ConfigModel& config, Diagnostics& diags);

// "action" -> "setAction".
std::string setter_name(std::string_view attribute);

// Page -> handler edges: one AttributeSetter per provided attribute, then
// LifecycleCallback to doStartTag and doEndTag. Callbacks the handler only
// inherits from a library base get a synthetic method entity. A handler that
// is not in the project yields dangling edges; one that is in the project but
// does not extend a tag base yields a diagnostic and no edges.
void emit_tag_lifecycle_edges(const TagUse& use, const ProjectIndex& index, DependencyGraph& graph,
                              Diagnostics& diags);

// WebContainer -> init, service (synthesized when inherited) and the declared
// doXxx/destroy methods of every servlet class; WebContainer -> page for every
// lowered page.
void emit_servlet_lifecycle_edges(const ProjectIndex& index, const ConfigModel& config,
                                  const std::vector<EntityId>& lowered_pages, DependencyGraph& graph,
                                  Diagnostics& diags);

// EjbContainer -> creation/removal callbacks of descriptor-declared beans,
// and -> post-construct/pre-destroy methods of annotated beans.
void emit_ejb_lifecycle_edges(const ProjectIndex& index, const ConfigModel& config, DependencyGraph& graph,
                              Diagnostics& diags);

// JndiLookup edges for lookup("java:comp/env/ejb/Name") calls with a literal
// argument, from the enclosing method (or page) to the bean class.
void emit_jndi_edges(const ProjectIndex& index, const ConfigModel& config, DependencyGraph& graph,
                     Diagnostics& diags);

// Bean name a JNDI string refers to: "java:comp/env/ejb/Hello" -> "ejb/Hello".
// Empty when the name is not an enterprise-bean reference.
std::string ejb_reference(std::string_view jndi_name);

} // namespace jeedep
