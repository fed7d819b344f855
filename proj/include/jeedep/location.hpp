#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace jeedep {

// A position inside a project file. Paths are project-relative with forward
// slashes; line and column are 1-based (columns count bytes).
struct SourceLocation {
    std::string path;
    int line = 1;
    int column = 1;

    auto operator<=>(const SourceLocation&) const = default;
    bool operator==(const SourceLocation&) const = default;

    bool valid() const;
    std::string str() const;
};

// Maps byte offsets of a text to locations; `origin` is where text[0] sits.
class TextLocator {
public:
    TextLocator(std::string_view text, SourceLocation origin);
    SourceLocation at(std::size_t offset) const;

private:
    SourceLocation origin_;
    std::vector<std::size_t> line_starts_;  // offsets just after each '\n'
};

// Normalizes a relative path: backslashes become slashes, "." and empty
// segments are dropped, ".." pops a segment (never above the root).
std::string clean_relative_path(std::string_view path);

} // namespace jeedep
