#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace jeedep {

// True for "scheme:..." and protocol-relative "//host" URLs.
bool is_external_url(std::string_view raw);

// Normalizes a URL written in the file at `base_web_path`: query string and
// fragment are dropped, a leading '/' is relative to the web root, anything
// else to the directory of the base; "." and ".." collapse (never above the
// root). A trailing '/' is kept. Returns nullopt for external and empty
// URLs. normalize_url(*normalize_url(u, b), b) == normalize_url(u, b).
std::optional<std::string> normalize_url(std::string_view raw, std::string_view base_web_path);

// Web path of a project file relative to the web root ("" = project root):
// "web/shop/list.jsp" with root "web" -> "/shop/list.jsp". Files outside the
// web root keep their project-relative path.
std::string web_path_of(std::string_view project_path, std::string_view web_root);

} // namespace jeedep
