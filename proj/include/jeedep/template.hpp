#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jeedep/location.hpp"
#include "jeedep/origin.hpp"

namespace jeedep {

struct TemplateAttribute {
    std::string name;
    std::string value;        // raw text between the quotes
    SourceLocation location;  // the opening quote
    std::size_t value_offset = 0;  // byte offset of the value in the page
};

// One segment of a page. Nodes are stored in file order, do not overlap and
// together cover the whole file.
//   Scriptlet/Declaration/Expression/Comment  body = code or comment text
//   Directive   name = "page", "include" or "taglib"
//   CustomTag   name = "prefix:tag"
//   UseBean/GetProperty/SetProperty  name = "jsp:useBean" etc.
//   RawMarkup   body = the text itself
struct TemplateNode {
    TemplateNodeKind kind = TemplateNodeKind::RawMarkup;
    std::string name;
    std::vector<TemplateAttribute> attributes;
    std::string body;
    SourceLocation location;       // first character of the node
    SourceLocation body_location;  // first character of `body`
    std::size_t offset = 0;
    std::size_t length = 0;
    bool closing = false;       // "</prefix:tag>" or "</jsp:useBean>"
    bool self_closing = false;  // "<prefix:tag ... />"

    const TemplateAttribute* attribute(std::string_view name) const;
    bool is_code() const;  // scriptlet, declaration or expression
};

struct TemplatePage {
    std::string path;  // project-relative
    std::string text;
    std::vector<TemplateNode> nodes;
    std::set<std::string> taglib_prefixes;

    // Page text with code and comment nodes blanked ('\x01', newlines kept),
    // so markup scanners cannot see inside them.
    std::string masked_text() const;
    // Line/column of a byte offset.
    SourceLocation location_at(std::size_t offset) const;
    bool multilanguage() const;  // has at least one code node
};

class UnterminatedConstruct : public std::runtime_error {
public:
    UnterminatedConstruct(const std::string& what, SourceLocation where)
        : std::runtime_error(what + " at " + where.str()), location_(std::move(where))
    {
    }
    const SourceLocation& location() const { return location_; }

private:
    SourceLocation location_;
};

// Segments a page. Throws UnterminatedConstruct for "<%" without "%>" and
// similar unclosed code constructs; unrecognized markup is RawMarkup.
TemplatePage parse_template(std::string_view text, std::string_view path);

} // namespace jeedep
