#include "jeedep/el.hpp"

#include <cctype>
#include <set>

#include "jeedep/lowering.hpp"

namespace jeedep {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_part(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

class ElParser {
public:
    explicit ElParser(std::string_view s) : s_(s) {}

    bool parse(ElExpression& out)
    {
        ws();
        if (!ident(out.base)) return false;
        for (;;) {
            ws();
            if (at_end()) return true;
            if (s_[i_] != '.') return false;
            ++i_;
            ws();
            ElSegment seg;
            if (!ident(seg.name)) return false;
            ws();
            if (!at_end() && s_[i_] == '(') {
                ++i_;
                seg.call = true;
                if (!arguments(seg.args)) return false;
            }
            out.segments.push_back(std::move(seg));
        }
    }

private:
    bool at_end() const { return i_ >= s_.size(); }
    void ws()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool ident(std::string& out)
    {
        if (at_end() || !ident_start(s_[i_])) return false;
        std::size_t start = i_;
        while (!at_end() && ident_part(s_[i_])) ++i_;
        out = std::string(s_.substr(start, i_ - start));
        return true;
    }

    bool literal(std::string& out)
    {
        std::size_t start = i_;
        char c = s_[i_];
        if (c == '\'' || c == '"') {
            ++i_;
            while (!at_end() && s_[i_] != c) i_ += s_[i_] == '\\' ? 2 : 1;
            if (at_end()) return false;
            ++i_;
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
            ++i_;
            while (!at_end() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
            if (c == '-' && i_ == start + 1) return false;
        } else {
            std::string word;
            if (!ident(word) || (word != "true" && word != "false" && word != "null")) return false;
        }
        out = std::string(s_.substr(start, i_ - start));
        return true;
    }

    bool arguments(std::vector<std::string>& args)
    {
        ws();
        if (!at_end() && s_[i_] == ')') {
            ++i_;
            return true;
        }
        for (;;) {
            ws();
            std::string arg;
            if (at_end() || !literal(arg)) return false;
            args.push_back(std::move(arg));
            ws();
            if (at_end()) return false;
            if (s_[i_] == ')') {
                ++i_;
                return true;
            }
            if (s_[i_] != ',') return false;
            ++i_;
        }
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

bool is_scope_object(std::string_view name)
{
    return name == "pageScope" || name == "requestScope" || name == "sessionScope" || name == "applicationScope";
}

} // namespace

ElExpression parse_el(std::string_view text)
{
    ElExpression out;
    out.raw = std::string(text);
    if (text.size() < 3 || (text[0] != '$' && text[0] != '#') || text[1] != '{' || text.back() != '}') return out;
    out.sigil = text[0];
    ElExpression tree;
    tree.raw = out.raw;
    tree.sigil = out.sigil;
    if (!ElParser(text.substr(2, text.size() - 3)).parse(tree)) return out;
    tree.parsed = true;
    return tree;
}

std::string render(const ElExpression& expr)
{
    if (!expr.parsed) return expr.raw;
    std::string out{expr.sigil};
    out += '{';
    out += expr.base;
    for (const auto& seg : expr.segments) {
        out += '.';
        out += seg.name;
        if (!seg.call) continue;
        out += '(';
        for (std::size_t i = 0; i < seg.args.size(); ++i) {
            if (i) out += ", ";
            out += seg.args[i];
        }
        out += ')';
    }
    out += '}';
    return out;
}

std::vector<ElSite> find_el(std::string_view text, const SourceLocation& origin, Diagnostics& diags)
{
    std::vector<ElSite> out;
    std::size_t pos = 0;
    const TextLocator locate(text, origin);
    while (pos + 1 < text.size()) {
        if ((text[pos] != '$' && text[pos] != '#') || text[pos + 1] != '{' || (pos > 0 && text[pos - 1] == '\\')) {
            ++pos;
            continue;
        }
        const SourceLocation at = locate.at(pos);
        std::size_t i = pos + 2;
        char quote = 0;
        for (; i < text.size(); ++i) {
            char c = text[i];
            if (quote) {
                if (c == '\\') ++i;
                else if (c == quote) quote = 0;
            } else if (c == '\'' || c == '"') {
                quote = c;
            } else if (c == '}') {
                break;
            }
        }
        if (i >= text.size()) {
            diags.warn("unterminated-el", "expression is not closed", at);
            pos += 2;
            continue;
        }
        ElSite site;
        site.offset = pos;
        site.length = i + 1 - pos;
        site.location = at;
        site.expr = parse_el(text.substr(pos, site.length));
        out.push_back(std::move(site));
        pos = i + 1;
    }
    return out;
}

bool is_el_implicit_object(std::string_view name)
{
    static const std::set<std::string, std::less<>> names = {
        "pageContext", "pageScope", "requestScope",  "sessionScope", "applicationScope", "param",
        "paramValues", "header",    "headerValues",  "cookie",       "initParam",        "facesContext",
        "view",        "component", "cc",            "flash",
    };
    return names.count(name) != 0;
}

void resolve_el(const ElSite& site, const BeanScope& scope, const ProjectIndex& index, const EntityId& source,
                DependencyGraph& graph, Diagnostics& diags)
{
    const ElExpression& e = site.expr;
    if (!e.parsed) {
        diags.info("unparsed-el", "expression outside the supported grammar: " + e.raw, site.location);
        return;
    }
    std::string base = e.base;
    std::size_t first = 0;
    // sessionScope.cart.total names the bean "cart".
    if (is_scope_object(base) && !e.segments.empty() && !e.segments[0].call) {
        base = e.segments[0].name;
        first = 1;
    } else if (is_el_implicit_object(base)) {
        return;
    }
    auto bound = scope.find(base);
    if (bound == scope.end()) {
        diags.warn("unknown-el-base", "'" + base + "' is not a known bean in " + e.raw, site.location);
        return;
    }

    const std::string note = render(e);
    auto edge = [&](const EntityId& target) {
        graph.add_relationship(Relationship{source, target, RelationKind::ElAccess,
                                            Provenance{Analyzer::LiteralEl, site.location, note}});
    };
    auto next_type = [&](const ProjectIndex::ClassInfo& owner, const std::string& type) -> std::string {
        auto q = index.resolve_type(type, *owner.unit, &owner);
        return q ? *q : std::string();
    };

    std::string current = bound->second;
    for (std::size_t i = first; i < e.segments.size(); ++i) {
        const ElSegment& seg = e.segments[i];
        if (current.empty() || !index.find_class(current)) {
            if (i == first)
                diags.warn("unknown-el-base", "bean class " + bound->second + " of '" + base + "' is not in the project",
                           site.location);
            return;
        }
        std::vector<ProjectIndex::MethodRef> refs;
        if (seg.call) {
            refs = index.find_methods(current, seg.name, seg.args.size());
        } else {
            refs = index.find_methods(current, "get" + capitalize_property(seg.name), 0);
            if (refs.empty()) refs = index.find_methods(current, "is" + capitalize_property(seg.name), 0);
        }
        if (!refs.empty()) {
            edge(refs.front().id);
            current = next_type(*refs.front().owner, refs.front().method->return_type);
            continue;
        }
        if (!seg.call) {
            if (auto field = index.find_field(current, seg.name)) {
                edge(field->id);
                current = next_type(*field->owner, field->field->type_name);
                continue;
            }
        }
        diags.warn("unresolved-el-member", current + " has no " + (seg.call ? "method " : "property ") + seg.name,
                   site.location);
        return;
    }
}

} // namespace jeedep
