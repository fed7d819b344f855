#include "jeedep/origin.hpp"

#include <algorithm>
#include <array>

namespace jeedep {

std::string_view to_string(TemplateNodeKind kind)
{
    static constexpr std::array<std::string_view, 10> names = {
        "Scriptlet", "Declaration", "Expression", "UseBean", "GetProperty",
        "SetProperty", "CustomTag", "Directive", "RawMarkup", "Comment",
    };
    return names[static_cast<std::size_t>(kind)];
}

void OriginMap::add(OriginEntry entry)
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), entry.lowered_line,
                               [](const OriginEntry& e, int line) { return e.lowered_line < line; });
    if (it != entries_.end() && it->lowered_line == entry.lowered_line)
        *it = std::move(entry);
    else
        entries_.insert(it, std::move(entry));
}

std::optional<OriginLookup> OriginMap::map(Position lowered) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), lowered.line,
                               [](const OriginEntry& e, int line) { return e.lowered_line < line; });
    if (it == entries_.end() || it->lowered_line != lowered.line) return std::nullopt;
    OriginLookup out{it->template_location, it->node};
    if (it->verbatim && lowered.column >= it->lowered_column)
        out.location.column += lowered.column - it->lowered_column;
    return out;
}

} // namespace jeedep
