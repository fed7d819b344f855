#include "jeedep/lowering.hpp"

#include <cctype>
#include <cstdio>
#include <set>

#include "jeedep/oo_frontend.hpp"

namespace jeedep {

namespace {

constexpr std::string_view kIndent = "        ";
constexpr std::string_view kDefaultTagType = "javax.servlet.jsp.tagext.Tag";

std::string hex_escape(unsigned char c)
{
    char buf[8];
    std::snprintf(buf, sizeof buf, "_%04x", c);
    return buf;
}

std::string java_string(std::string_view text)
{
    std::string out = "\"";
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        switch (ch) {
        case '\\': out += "\\\\"; break;
        case '"': out += "\\\""; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += ch;
            }
        }
    }
    return out + "\"";
}

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    for (;;) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(start));
            return lines;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
}

std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// A request-time attribute value "<%= expr %>", if that is what `value` is.
std::optional<std::string> runtime_expression(std::string_view value)
{
    std::string v = trim(value);
    if (v.size() >= 5 && v.rfind("<%=", 0) == 0 && v.compare(v.size() - 2, 2, "%>") == 0)
        return trim(std::string_view(v).substr(3, v.size() - 5));
    return std::nullopt;
}

std::string identifier_part(std::string_view s)
{
    std::string out;
    for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return out;
}

class Generator {
public:
    Generator(const TemplatePage& page, const std::set<std::size_t>& degraded, const LoweringOptions& options,
              Diagnostics& diags, LoweredUnit& out)
        : page_(page), degraded_(degraded), options_(options), diags_(diags), out_(out)
    {
    }

    // Lowered line -> index of the node that produced it (npos for
    // generated scaffolding).
    std::vector<std::size_t> run()
    {
        const SourceLocation page_loc{page_.path, 1, 1};
        for (std::size_t i = 0; i < page_.nodes.size(); ++i) {
            const auto& n = page_.nodes[i];
            if (n.kind != TemplateNodeKind::Directive || n.name != "page") continue;
            const auto* imports = n.attribute("import");
            if (!imports) continue;
            for (auto part : split_commas(imports->value))
                line("import " + part + ";", imports->location, TemplateNodeKind::Directive, i);
        }
        for (const char* imp : {"javax.servlet.*", "javax.servlet.http.*", "javax.servlet.jsp.*"})
            line(std::string("import ") + imp + ";", page_loc, std::nullopt);
        line("public final class " + out_.class_name + " extends org.apache.jasper.runtime.HttpJspBase {", page_loc,
             std::nullopt);

        for (std::size_t i = 0; i < page_.nodes.size(); ++i) {
            const auto& n = page_.nodes[i];
            if (n.kind == TemplateNodeKind::Declaration && !degraded_.count(i)) verbatim("", n, i, "");
        }

        line("    public void service(HttpServletRequest request, HttpServletResponse response)", page_loc,
             std::nullopt);
        line("            throws java.io.IOException, ServletException {", page_loc, std::nullopt);
        for (const char* decl : {"PageContext pageContext = null;", "HttpSession session = null;",
                                 "ServletContext application = null;", "ServletConfig config = null;",
                                 "JspWriter out = null;", "Object page = this;"})
            line(std::string(kIndent) + decl, page_loc, std::nullopt);

        for (std::size_t i = 0; i < page_.nodes.size(); ++i) lower_node(i);

        for (const auto& open : open_tags_)
            diags_.warn("unclosed-custom-tag", "custom tag " + open.name + " is never closed", open.location);
        line("    }", page_loc, std::nullopt);
        line("}", page_loc, std::nullopt);
        return line_nodes_;
    }

private:
    struct OpenTag {
        std::string name;
        std::string var;
        SourceLocation location;
    };

    static std::vector<std::string> split_commas(std::string_view s)
    {
        std::vector<std::string> out;
        std::size_t start = 0;
        for (;;) {
            auto comma = s.find(',', start);
            std::string part = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
            if (!part.empty()) out.push_back(part);
            if (comma == std::string_view::npos) return out;
            start = comma + 1;
        }
    }

    void line(const std::string& text, const SourceLocation& origin, std::optional<TemplateNodeKind> node,
              std::size_t node_index = std::string::npos, bool verbatim = false, int lowered_column = 1)
    {
        out_.source += text;
        out_.source += '\n';
        out_.origins.add(OriginEntry{next_line_, lowered_column, origin, node, verbatim});
        line_nodes_.push_back(node_index);
        ++next_line_;
    }

    // Copies code keeping its columns: `lead` precedes the first line and
    // `tail` follows the last one.
    void verbatim(const std::string& lead, const TemplateNode& n, std::size_t index, const std::string& tail)
    {
        auto lines = split_lines(n.body);
        for (std::size_t k = 0; k < lines.size(); ++k) {
            std::string text(kIndent);
            if (k == 0) text += lead;
            const int column = static_cast<int>(text.size()) + 1;
            text += lines[k];
            if (k + 1 == lines.size()) text += tail;
            SourceLocation origin = n.body_location;
            if (k > 0) {
                origin.line += static_cast<int>(k);
                origin.column = 1;
            }
            line(text, origin, n.kind, index, true, column);
        }
    }

    void write_raw(std::string_view text, const SourceLocation& where, std::size_t index)
    {
        line(std::string(kIndent) + "out.write(" + java_string(text) + ");", where, TemplateNodeKind::RawMarkup, index);
    }

    std::string value_expression(const TemplateAttribute& a) const
    {
        if (auto e = runtime_expression(a.value)) return *e;
        return java_string(a.value);
    }

    void lower_node(std::size_t i)
    {
        const auto& n = page_.nodes[i];
        if (degraded_.count(i)) {
            write_raw(std::string_view(page_.text).substr(n.offset, n.length), n.location, i);
            return;
        }
        switch (n.kind) {
        case TemplateNodeKind::RawMarkup: write_raw(n.body, n.location, i); break;
        case TemplateNodeKind::Scriptlet: verbatim("", n, i, ""); break;
        case TemplateNodeKind::Expression:
            if (trim(n.body).empty()) break;
            verbatim("out.print(", n, i, ");");
            break;
        case TemplateNodeKind::UseBean: use_bean(n, i); break;
        case TemplateNodeKind::GetProperty: get_property(n, i); break;
        case TemplateNodeKind::SetProperty: set_property(n, i); break;
        case TemplateNodeKind::CustomTag: custom_tag(n, i); break;
        case TemplateNodeKind::Declaration:  // lowered at class level
        case TemplateNodeKind::Directive:
        case TemplateNodeKind::Comment: break;
        }
    }

    void use_bean(const TemplateNode& n, std::size_t i)
    {
        if (n.closing) return;
        const auto* id = n.attribute("id");
        const auto* cls = n.attribute("class");
        const auto* type = n.attribute("type");
        if (!type) type = n.attribute("beanName");
        if (!id || (!cls && !type)) {
            diags_.warn("malformed-action", "jsp:useBean needs id and class or type", n.location);
            return;
        }
        const std::string declared = type ? type->value : cls->value;
        if (cls) {
            line(std::string(kIndent) + declared + " " + id->value + " = new " + cls->value + "();", cls->location,
                 n.kind, i);
        } else {
            line(std::string(kIndent) + declared + " " + id->value + " = (" + declared + ") pageContext.getAttribute(" +
                     java_string(id->value) + ");",
                 type->location, n.kind, i);
        }
    }

    void get_property(const TemplateNode& n, std::size_t i)
    {
        if (n.closing) return;
        const auto* name = n.attribute("name");
        const auto* prop = n.attribute("property");
        if (!name || !prop) {
            diags_.warn("malformed-action", "jsp:getProperty needs name and property", n.location);
            return;
        }
        line(std::string(kIndent) + "out.print(" + name->value + ".get" + capitalize_property(prop->value) + "());",
             prop->location, n.kind, i);
    }

    void set_property(const TemplateNode& n, std::size_t i)
    {
        if (n.closing) return;
        const auto* name = n.attribute("name");
        const auto* prop = n.attribute("property");
        if (!name || !prop) {
            diags_.warn("malformed-action", "jsp:setProperty needs name and property", n.location);
            return;
        }
        if (prop->value == "*") {
            diags_.info("wildcard-property", "jsp:setProperty property=\"*\" sets no specific property", n.location);
            return;
        }
        std::string value;
        if (const auto* v = n.attribute("value"))
            value = value_expression(*v);
        else if (const auto* p = n.attribute("param"))
            value = "request.getParameter(" + java_string(p->value) + ")";
        else
            value = "request.getParameter(" + java_string(prop->value) + ")";
        line(std::string(kIndent) + name->value + ".set" + capitalize_property(prop->value) + "(" + value + ");",
             prop->location, n.kind, i);
    }

    void custom_tag(const TemplateNode& n, std::size_t i)
    {
        if (n.closing) {
            for (auto it = open_tags_.rbegin(); it != open_tags_.rend(); ++it) {
                if (it->name != n.name) continue;
                line(std::string(kIndent) + it->var + ".doEndTag();", n.location, n.kind, i);
                open_tags_.erase(std::next(it).base());
                return;
            }
            diags_.warn("unmatched-closing-tag", "closing tag </" + n.name + "> has no matching open tag", n.location);
            return;
        }
        auto colon = n.name.find(':');
        std::string prefix = n.name.substr(0, colon);
        std::string local = n.name.substr(colon + 1);
        std::string type(kDefaultTagType);
        if (options_.tag_handler)
            if (auto h = options_.tag_handler(prefix, local)) type = *h;
        std::string base = "_jspx_th_" + identifier_part(prefix) + "_" + identifier_part(local);
        std::string var = base + "_" + std::to_string(counters_[base]++);

        line(std::string(kIndent) + type + " " + var + " = new " + type + "();", n.location, n.kind, i);
        for (const auto& a : n.attributes)
            line(std::string(kIndent) + var + ".set" + capitalize_property(a.name) + "(" + value_expression(a) + ");",
                 a.location, n.kind, i);
        line(std::string(kIndent) + var + ".doStartTag();", n.location, n.kind, i);
        if (n.self_closing)
            line(std::string(kIndent) + var + ".doEndTag();", n.location, n.kind, i);
        else
            open_tags_.push_back(OpenTag{n.name, var, n.location});
    }

    const TemplatePage& page_;
    const std::set<std::size_t>& degraded_;
    const LoweringOptions& options_;
    Diagnostics& diags_;
    LoweredUnit& out_;
    int next_line_ = 1;
    std::vector<std::size_t> line_nodes_;
    std::vector<OpenTag> open_tags_;
    std::map<std::string, int> counters_;
};

// The code node to degrade for a structural error on `line`.
std::optional<std::size_t> culprit(const TemplatePage& page, const std::vector<std::size_t>& line_nodes, int line,
                                   const std::set<std::size_t>& degraded)
{
    auto usable = [&](std::size_t idx) {
        return idx != std::string::npos && page.nodes[idx].is_code() && !degraded.count(idx);
    };
    const int count = static_cast<int>(line_nodes.size());
    const int at = std::clamp(line, 1, count) - 1;
    for (int k = at; k >= 0; --k)
        if (usable(line_nodes[k])) return line_nodes[k];
    for (int k = at + 1; k < count; ++k)
        if (usable(line_nodes[k])) return line_nodes[k];
    return std::nullopt;
}

} // namespace

void LoweredUnit::bind()
{
    context.page = page;
    context.page_location = SourceLocation{page_path, 1, 1};
    context.origins = &origins;
}

std::string capitalize_property(std::string_view property)
{
    std::string out(property);
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

std::string synthetic_class_name(std::string_view web_path)
{
    while (!web_path.empty() && web_path.front() == '/') web_path.remove_prefix(1);
    const auto last_dot = web_path.rfind('.');
    const auto last_slash = web_path.rfind('/');
    const bool has_ext = last_dot != std::string_view::npos &&
                         (last_slash == std::string_view::npos || last_dot > last_slash);
    std::string out;
    for (std::size_t i = 0; i < web_path.size(); ++i) {
        auto c = static_cast<unsigned char>(web_path[i]);
        if (c == '/' || (has_ext && i == last_dot))
            out += '_';
        else if (std::isalnum(c))
            out += static_cast<char>(c);
        else
            out += hex_escape(c);
    }
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) out.insert(out.begin(), '_');
    return out;
}

Entity server_page_entity(std::string_view page_path, std::string_view web_path)
{
    return make_entity(EntityKind::ServerPage, std::string(web_path), page_path,
                       SourceLocation{std::string(page_path), 1, 1});
}

LoweredUnit lower_page(const TemplatePage& page, std::string_view web_path, Diagnostics& diags,
                       const LoweringOptions& options)
{
    std::set<std::size_t> degraded;
    for (;;) {
        LoweredUnit out;
        out.page_path = page.path;
        out.web_path = std::string(web_path);
        out.class_name = synthetic_class_name(web_path);
        out.page = server_page_entity(page.path, web_path).id;

        Diagnostics local;
        Generator gen(page, degraded, options, local, out);
        auto line_nodes = gen.run();

        Diagnostics parse_diags;
        try {
            out.unit = parse_unit(out.source, page.path, parse_diags);
        } catch (const SyntaxError& e) {
            auto node = culprit(page, line_nodes, e.position().line, degraded);
            if (!node) throw;  // generated scaffolding itself failed to parse
            degraded.insert(*node);
            diags.warn("lowering-degraded",
                       std::string(to_string(page.nodes[*node].kind)) + " does not parse (" + e.what() +
                           "); written as raw text",
                       page.nodes[*node].location);
            continue;
        }
        diags.append(local);
        for (auto d : parse_diags.all()) {
            if (auto hit = out.origins.map(Position{d.location.line, d.location.column})) d.location = hit->location;
            diags.report(d.severity, d.code, d.message, d.location);
        }
        out.bind();
        return out;
    }
}

void register_page(DependencyGraph& graph, const LoweredUnit& lowered)
{
    Entity page = server_page_entity(lowered.page_path, lowered.web_path);
    graph.add_entity(page);
    graph.add_entity(make_entity(EntityKind::ClassUnit, lowered.class_name, lowered.page_path,
                                 SourceLocation{lowered.page_path, 1, 1}, page.id, true));
}

} // namespace jeedep
