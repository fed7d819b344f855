#include "jeedep/location.hpp"

#include <algorithm>
#include <vector>

namespace jeedep {

bool SourceLocation::valid() const
{
    if (line < 1 || column < 1) return false;
    if (path.find('\\') != std::string::npos) return false;
    std::size_t start = 0;
    while (start <= path.size()) {
        auto end = path.find('/', start);
        if (end == std::string::npos) end = path.size();
        if (path.compare(start, end - start, "..") == 0 && end - start == 2) return false;
        start = end + 1;
    }
    return true;
}

std::string SourceLocation::str() const
{
    return path + ":" + std::to_string(line) + ":" + std::to_string(column);
}

TextLocator::TextLocator(std::string_view text, SourceLocation origin) : origin_(std::move(origin))
{
    for (std::size_t i = 0; i < text.size(); ++i)
        if (text[i] == '\n') line_starts_.push_back(i + 1);
}

SourceLocation TextLocator::at(std::size_t offset) const
{
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    SourceLocation out = origin_;
    if (it == line_starts_.begin()) {
        out.column += static_cast<int>(offset);
    } else {
        out.line += static_cast<int>(it - line_starts_.begin());
        out.column = 1 + static_cast<int>(offset - *(it - 1));
    }
    return out;
}

std::string clean_relative_path(std::string_view path)
{
    std::vector<std::string> parts;
    std::string segment;
    auto flush = [&] {
        if (segment.empty() || segment == ".") {
        } else if (segment == "..") {
            if (!parts.empty()) parts.pop_back();
        } else {
            parts.push_back(segment);
        }
        segment.clear();
    };
    for (char c : path) {
        if (c == '/' || c == '\\')
            flush();
        else
            segment += c;
    }
    flush();

    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += '/';
        out += p;
    }
    return out;
}

} // namespace jeedep
