#include "jeedep/template.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>

namespace jeedep {

const TemplateAttribute* TemplateNode::attribute(std::string_view key) const
{
    for (const auto& a : attributes) {
        if (a.name.size() != key.size()) continue;
        bool same = std::equal(a.name.begin(), a.name.end(), key.begin(), [](char x, char y) {
            return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
        });
        if (same) return &a;
    }
    return nullptr;
}

bool TemplateNode::is_code() const
{
    return kind == TemplateNodeKind::Scriptlet || kind == TemplateNodeKind::Declaration ||
           kind == TemplateNodeKind::Expression;
}

std::string TemplatePage::masked_text() const
{
    std::string out = text;
    for (const auto& n : nodes) {
        if (!n.is_code() && n.kind != TemplateNodeKind::Comment) continue;
        for (std::size_t i = n.offset; i < n.offset + n.length; ++i)
            if (out[i] != '\n') out[i] = '\x01';
    }
    return out;
}

SourceLocation TemplatePage::location_at(std::size_t offset) const
{
    int line = 1;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            line_start = i + 1;
        }
    }
    return SourceLocation{path, line, static_cast<int>(offset - line_start) + 1};
}

bool TemplatePage::multilanguage() const
{
    return std::any_of(nodes.begin(), nodes.end(), [](const TemplateNode& n) { return n.is_code(); });
}

namespace {

bool name_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == ':';
}

class TemplateParser {
public:
    TemplateParser(std::string_view text, std::string_view path) : text_(text)
    {
        page_.path = std::string(path);
        page_.text = std::string(text);
        line_starts_.push_back(0);
        for (std::size_t i = 0; i < text.size(); ++i)
            if (text[i] == '\n') line_starts_.push_back(i + 1);
        collect_prefixes();
    }

    TemplatePage run()
    {
        std::size_t pos = 0;
        std::size_t raw_start = 0;
        while (pos < text_.size()) {
            if (text_[pos] != '<') {
                ++pos;
                continue;
            }
            auto node = match(pos);
            if (!node) {
                ++pos;
                continue;
            }
            flush_raw(raw_start, pos);
            pos = node->offset + node->length;
            raw_start = pos;
            page_.nodes.push_back(std::move(*node));
        }
        flush_raw(raw_start, text_.size());
        return std::move(page_);
    }

private:
    SourceLocation loc(std::size_t offset) const
    {
        auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
        std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
        return SourceLocation{page_.path, static_cast<int>(line),
                              static_cast<int>(offset - line_starts_[line - 1]) + 1};
    }

    bool starts(std::size_t pos, std::string_view s) const { return text_.substr(pos, s.size()) == s; }

    void collect_prefixes()
    {
        static const std::regex directive(R"(<%@\s*taglib\b[^%]*?prefix\s*=\s*["']([^"']+)["'])");
        static const std::regex xml(R"(<jsp:directive\.taglib\b[^>]*?prefix\s*=\s*["']([^"']+)["'])");
        const std::string text(text_);
        for (const auto* re : {&directive, &xml})
            for (std::sregex_iterator it(text.begin(), text.end(), *re), end; it != end; ++it)
                page_.taglib_prefixes.insert((*it)[1].str());
    }

    void flush_raw(std::size_t from, std::size_t to)
    {
        if (to <= from) return;
        TemplateNode n;
        n.kind = TemplateNodeKind::RawMarkup;
        n.body = std::string(text_.substr(from, to - from));
        n.location = n.body_location = loc(from);
        n.offset = from;
        n.length = to - from;
        page_.nodes.push_back(std::move(n));
    }

    TemplateNode code_node(TemplateNodeKind kind, std::size_t start, std::size_t body_start, std::string_view close,
                           const char* what)
    {
        auto end = text_.find(close, body_start);
        if (end == std::string_view::npos) throw UnterminatedConstruct(std::string("unterminated ") + what, loc(start));
        TemplateNode n;
        n.kind = kind;
        n.body = std::string(text_.substr(body_start, end - body_start));
        n.location = loc(start);
        n.body_location = loc(body_start);
        n.offset = start;
        n.length = end + close.size() - start;
        return n;
    }

    std::optional<TemplateNode> match(std::size_t pos)
    {
        if (starts(pos, "<%--")) return code_node(TemplateNodeKind::Comment, pos, pos + 4, "--%>", "JSP comment");
        if (starts(pos, "<%@")) return directive(pos);
        if (starts(pos, "<%!")) return code_node(TemplateNodeKind::Declaration, pos, pos + 3, "%>", "declaration");
        if (starts(pos, "<%=")) return code_node(TemplateNodeKind::Expression, pos, pos + 3, "%>", "expression");
        if (starts(pos, "<%")) return code_node(TemplateNodeKind::Scriptlet, pos, pos + 2, "%>", "scriptlet");

        const bool closing = starts(pos, "</");
        std::size_t name_start = pos + (closing ? 2 : 1);
        std::size_t name_end = name_start;
        while (name_end < text_.size() && name_char(text_[name_end])) ++name_end;
        std::string name(text_.substr(name_start, name_end - name_start));
        auto colon = name.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == name.size()) return std::nullopt;
        std::string prefix = name.substr(0, colon);
        std::string local = name.substr(colon + 1);

        if (prefix == "jsp") {
            if (!closing) {
                if (local == "scriptlet")
                    return xml_code(TemplateNodeKind::Scriptlet, pos, name_end, "</jsp:scriptlet>");
                if (local == "expression")
                    return xml_code(TemplateNodeKind::Expression, pos, name_end, "</jsp:expression>");
                if (local == "declaration")
                    return xml_code(TemplateNodeKind::Declaration, pos, name_end, "</jsp:declaration>");
                if (local.rfind("directive.", 0) == 0) {
                    auto n = tag(pos, name_end, TemplateNodeKind::Directive, name, false);
                    if (n) n->name = local.substr(10);
                    return n;
                }
            }
            if (local == "useBean") return tag(pos, name_end, TemplateNodeKind::UseBean, name, closing);
            if (local == "getProperty") return tag(pos, name_end, TemplateNodeKind::GetProperty, name, closing);
            if (local == "setProperty") return tag(pos, name_end, TemplateNodeKind::SetProperty, name, closing);
            return std::nullopt;
        }
        if (page_.taglib_prefixes.count(prefix)) return tag(pos, name_end, TemplateNodeKind::CustomTag, name, closing);
        return std::nullopt;
    }

    std::optional<TemplateNode> xml_code(TemplateNodeKind kind, std::size_t start, std::size_t name_end,
                                         std::string_view close)
    {
        auto gt = text_.find('>', name_end);
        if (gt == std::string_view::npos) return std::nullopt;
        if (text_[gt - 1] == '/') {  // empty element
            TemplateNode n;
            n.kind = kind;
            n.location = n.body_location = loc(start);
            n.offset = start;
            n.length = gt + 1 - start;
            return n;
        }
        return code_node(kind, start, gt + 1, close, "JSP XML code element");
    }

    // Reads a quoted attribute value starting at the quote; "<% ... %>"
    // inside the value is skipped over. Returns the offset past the closing
    // quote.
    std::optional<std::size_t> quoted(std::size_t q) const
    {
        const char quote = text_[q];
        std::size_t i = q + 1;
        while (i < text_.size()) {
            if (starts(i, "<%")) {
                auto end = text_.find("%>", i + 2);
                if (end == std::string_view::npos) return std::nullopt;
                i = end + 2;
                continue;
            }
            if (text_[i] == quote) return i + 1;
            ++i;
        }
        return std::nullopt;
    }

    void skip_space(std::size_t& i) const
    {
        while (i < text_.size() && std::isspace(static_cast<unsigned char>(text_[i]))) ++i;
    }

    // Parses attributes up to the end of a tag. `end_token` is ">" for tags
    // and "%>" for directives. Returns the offset past the end, or nullopt
    // for malformed input.
    std::optional<std::size_t> attributes(std::size_t i, TemplateNode& n, std::string_view end_token)
    {
        for (;;) {
            skip_space(i);
            if (i >= text_.size()) return std::nullopt;
            if (starts(i, end_token)) return i + end_token.size();
            if (end_token == ">" && starts(i, "/>")) {
                n.self_closing = true;
                return i + 2;
            }
            std::size_t name_start = i;
            while (i < text_.size() && name_char(text_[i])) ++i;
            if (i == name_start) return std::nullopt;
            TemplateAttribute a;
            a.name = std::string(text_.substr(name_start, i - name_start));
            skip_space(i);
            if (i >= text_.size() || text_[i] != '=') return std::nullopt;
            ++i;
            skip_space(i);
            if (i >= text_.size() || (text_[i] != '"' && text_[i] != '\'')) return std::nullopt;
            auto end = quoted(i);
            if (!end) return std::nullopt;
            a.location = loc(i);
            a.value_offset = i + 1;
            a.value = std::string(text_.substr(i + 1, *end - i - 2));
            n.attributes.push_back(std::move(a));
            i = *end;
        }
    }

    std::optional<TemplateNode> tag(std::size_t start, std::size_t name_end, TemplateNodeKind kind,
                                    const std::string& name, bool closing)
    {
        TemplateNode n;
        n.kind = kind;
        n.name = name;
        n.closing = closing;
        n.location = n.body_location = loc(start);
        n.offset = start;
        std::optional<std::size_t> end;
        if (closing) {
            std::size_t i = name_end;
            skip_space(i);
            if (i < text_.size() && text_[i] == '>') end = i + 1;
        } else {
            end = attributes(name_end, n, ">");
        }
        if (!end) return std::nullopt;
        n.length = *end - start;
        return n;
    }

    std::optional<TemplateNode> directive(std::size_t start)
    {
        std::size_t i = start + 3;
        skip_space(i);
        std::size_t name_start = i;
        while (i < text_.size() && std::isalpha(static_cast<unsigned char>(text_[i]))) ++i;
        TemplateNode n;
        n.kind = TemplateNodeKind::Directive;
        n.name = std::string(text_.substr(name_start, i - name_start));
        n.location = n.body_location = loc(start);
        n.offset = start;
        auto end = attributes(i, n, "%>");
        if (!end) {
            auto close = text_.find("%>", start);
            if (close == std::string_view::npos) throw UnterminatedConstruct("unterminated directive", loc(start));
            n.attributes.clear();
            end = close + 2;
        }
        n.length = *end - start;
        return n;
    }

    std::string_view text_;
    std::vector<std::size_t> line_starts_;
    TemplatePage page_;
};

} // namespace

TemplatePage parse_template(std::string_view text, std::string_view path)
{
    return TemplateParser(text, path).run();
}

} // namespace jeedep
