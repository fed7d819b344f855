#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "jeedep/diagnostics.hpp"
#include "jeedep/graph.hpp"
#include "jeedep/java_ast.hpp"
#include "jeedep/origin.hpp"
#include "jeedep/template.hpp"

namespace jeedep {

// A page translated into a synthetic servlet class.
struct LoweredUnit {
    std::string page_path;   // project-relative file path
    std::string web_path;    // "/dir/page.jsp"
    std::string class_name;  // "dir_page_jsp" (default package)
    std::string source;      // generated code
    OoCompilationUnit unit;
    OriginMap origins;
    EntityId page;           // ServerPage entity id
    SyntheticContext context;  // points into `origins`; refreshed by bind()

    // Re-points `context` at this object's members after a move or copy.
    void bind();
};

struct LoweringOptions {
    // Handler class for a custom tag ("prefix", "name"), when known.
    std::function<std::optional<std::string>(std::string_view prefix, std::string_view name)> tag_handler;
};

// Jasper-style class name for a web path: "/shop/list.jsp" -> "shop_list_jsp".
// '_' is written "_005f" and other non-identifier characters "_00xx" so
// distinct paths give distinct names.
std::string synthetic_class_name(std::string_view web_path);

// The ServerPage entity for a page.
Entity server_page_entity(std::string_view page_path, std::string_view web_path);

// Applies the lowering rules: scriptlets verbatim, declarations as members,
// bean actions as instantiation and accessor calls, custom tags as lifecycle
// call sequences, everything else as writes of the raw text. Code that does
// not parse structurally is degraded to raw text with a
// "lowering-degraded" diagnostic.
LoweredUnit lower_page(const TemplatePage& page, std::string_view web_path, Diagnostics& diags,
                       const LoweringOptions& options = {});

// Adds the ServerPage and its synthetic ClassUnit. Members and edges follow
// from extract_oo_graph over `lowered.unit` with `lowered.context`.
void register_page(DependencyGraph& graph, const LoweredUnit& lowered);

// "firstName" -> "FirstName".
std::string capitalize_property(std::string_view property);

} // namespace jeedep
