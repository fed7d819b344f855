#include "jeedep/url.hpp"

#include <cctype>
#include <vector>

namespace jeedep {

bool is_external_url(std::string_view raw)
{
    if (raw.substr(0, 2) == "//") return true;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (c == ':') return i > 0;
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.')) return false;
    }
    return false;
}

std::optional<std::string> normalize_url(std::string_view raw, std::string_view base_web_path)
{
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.front()))) raw.remove_prefix(1);
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.remove_suffix(1);
    raw = raw.substr(0, raw.find_first_of("?#"));
    if (raw.empty() || is_external_url(raw)) return std::nullopt;

    std::string joined;
    if (raw.front() == '/') {
        joined = std::string(raw);
    } else {
        auto slash = base_web_path.rfind('/');
        joined = std::string(slash == std::string_view::npos ? std::string_view("/") : base_web_path.substr(0, slash + 1));
        joined += raw;
    }
    const bool trailing = joined.back() == '/' || joined.ends_with("/.") || joined.ends_with("/..");

    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= joined.size()) {
        auto end = joined.find('/', start);
        if (end == std::string::npos) end = joined.size();
        std::string seg = joined.substr(start, end - start);
        if (seg == "..") {
            if (!parts.empty()) parts.pop_back();
        } else if (!seg.empty() && seg != ".") {
            parts.push_back(std::move(seg));
        }
        start = end + 1;
    }
    std::string out;
    for (const auto& p : parts) out += "/" + p;
    if (out.empty() || trailing) out += "/";
    return out;
}

std::string web_path_of(std::string_view project_path, std::string_view web_root)
{
    std::string root(web_root);
    while (!root.empty() && root.back() == '/') root.pop_back();
    if (root.empty()) return "/" + std::string(project_path);
    if (project_path.size() > root.size() && project_path.substr(0, root.size()) == root &&
        project_path[root.size()] == '/')
        return std::string(project_path.substr(root.size()));
    return "/" + std::string(project_path);
}

} // namespace jeedep
