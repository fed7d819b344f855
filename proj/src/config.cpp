#include "jeedep/config.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "jeedep/url.hpp"

namespace jeedep {

namespace pt = boost::property_tree;

namespace {

std::string local_name(const std::string& key)
{
    auto colon = key.find(':');
    return colon == std::string::npos ? key : key.substr(colon + 1);
}

std::string trimmed(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Children whose local name (namespace prefix ignored) is one of `names`.
std::vector<const pt::ptree*> children(const pt::ptree& node, std::initializer_list<std::string_view> names)
{
    std::vector<const pt::ptree*> out;
    for (const auto& [key, child] : node) {
        std::string n = local_name(key);
        if (std::find(names.begin(), names.end(), n) != names.end()) out.push_back(&child);
    }
    return out;
}

std::string text_of(const pt::ptree& node, std::initializer_list<std::string_view> names)
{
    auto found = children(node, names);
    return found.empty() ? std::string{} : trimmed(found.front()->data());
}

pt::ptree read_document(std::string_view text, std::string_view path)
{
    pt::ptree doc;
    std::istringstream in{std::string(text)};
    try {
        pt::read_xml(in, doc, pt::xml_parser::trim_whitespace | pt::xml_parser::no_comments);
    } catch (const pt::xml_parser_error& e) {
        throw XmlError(e.message(), SourceLocation{std::string(path), std::max(1, static_cast<int>(e.line())), 1});
    }
    return doc;
}

const pt::ptree* find_root(const pt::ptree& doc, std::initializer_list<std::string_view> roots)
{
    auto found = children(doc, roots);
    return found.empty() ? nullptr : found.front();
}

// Line/column of the n-th start tag named `element` (any namespace prefix).
class ElementLocator {
public:
    ElementLocator(std::string_view text, std::string_view path) : text_(text), path_(path) {}

    SourceLocation nth(const std::string& element, std::size_t n) const
    {
        std::regex re("<([A-Za-z_][\\w.-]*:)?" + element + "[\\s>/]");
        std::size_t seen = 0;
        for (std::cregex_iterator it(text_.data(), text_.data() + text_.size(), re), end; it != end; ++it) {
            if (in_comment(static_cast<std::size_t>(it->position()))) continue;
            if (seen++ == n) return at(static_cast<std::size_t>(it->position()));
        }
        return SourceLocation{std::string(path_), 1, 1};
    }

    // Location of `value` as element content ("> value <") at or after `from`.
    SourceLocation content(const std::string& value, const SourceLocation& from) const
    {
        std::size_t start = offset_of(from);
        for (auto pos = text_.find(value, start); pos != std::string_view::npos; pos = text_.find(value, pos + 1)) {
            std::size_t b = pos;
            while (b > 0 && std::isspace(static_cast<unsigned char>(text_[b - 1]))) --b;
            std::size_t e = pos + value.size();
            while (e < text_.size() && std::isspace(static_cast<unsigned char>(text_[e]))) ++e;
            if (b > 0 && text_[b - 1] == '>' && e < text_.size() && text_[e] == '<') return at(pos);
        }
        return from;
    }

private:
    bool in_comment(std::size_t pos) const
    {
        auto open = text_.rfind("<!--", pos);
        if (open == std::string_view::npos) return false;
        auto close = text_.find("-->", open);
        return close == std::string_view::npos || close > pos;
    }

    std::size_t offset_of(const SourceLocation& loc) const
    {
        int line = 1;
        std::size_t i = 0;
        while (i < text_.size() && line < loc.line) {
            if (text_[i] == '\n') ++line;
            ++i;
        }
        return i + static_cast<std::size_t>(loc.column - 1);
    }

    SourceLocation at(std::size_t offset) const
    {
        int line = 1;
        std::size_t line_start = 0;
        for (std::size_t i = 0; i < offset; ++i)
            if (text_[i] == '\n') {
                ++line;
                line_start = i + 1;
            }
        return SourceLocation{std::string(path_), line, static_cast<int>(offset - line_start) + 1};
    }

    std::string_view text_;
    std::string_view path_;
};

const pt::ptree* parse_root(std::string_view text, std::string_view path, std::initializer_list<std::string_view> roots,
                            pt::ptree& doc)
{
    doc = read_document(text, path);
    const pt::ptree* root = find_root(doc, roots);
    if (!root) {
        bool empty = std::none_of(doc.begin(), doc.end(), [](const auto& kv) { return kv.first != "<xmlcomment>"; });
        if (!empty)
            throw XmlError("unexpected root element; expected " + std::string(*roots.begin()),
                           SourceLocation{std::string(path), 1, 1});
    }
    return root;
}

} // namespace

const TagAttributeSpec* TagSpec::attribute(std::string_view attr) const
{
    for (const auto& a : attributes)
        if (a.name == attr) return &a;
    return nullptr;
}

const TagSpec* TagLibrary::find(std::string_view tag) const
{
    for (const auto& t : tags)
        if (t.name == tag) return &t;
    return nullptr;
}

Entity config_file_entity(std::string_view path)
{
    return make_entity(EntityKind::ConfigFile, std::string(path), path, SourceLocation{std::string(path), 1, 1});
}

WebXml parse_web_xml(std::string_view text, std::string_view path, DependencyGraph& graph, Diagnostics& diags)
{
    WebXml out;
    out.path = std::string(path);
    out.config = graph.add_entity(config_file_entity(path));
    if (std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
        return out;

    pt::ptree doc;
    const pt::ptree* root = parse_root(text, path, {"web-app"}, doc);
    if (!root) return out;
    ElementLocator locate(text, path);

    std::size_t servlet_index = 0;
    for (const auto* s : children(*root, {"servlet"})) {
        ServletDecl d;
        d.name = text_of(*s, {"servlet-name"});
        d.class_name = text_of(*s, {"servlet-class"});
        d.jsp_file = text_of(*s, {"jsp-file"});
        d.location = locate.nth("servlet", servlet_index++);
        if (d.name.empty()) {
            diags.warn("descriptor-incomplete", "servlet without servlet-name", d.location);
            continue;
        }
        out.servlets.push_back(std::move(d));
    }

    std::size_t mapping_index = 0;
    std::set<std::string> seen;
    for (const auto* m : children(*root, {"servlet-mapping"})) {
        SourceLocation where = locate.nth("servlet-mapping", mapping_index++);
        std::string servlet = text_of(*m, {"servlet-name"});
        for (const auto* p : children(*m, {"url-pattern"})) {
            std::string pattern = trimmed(p->data());
            SourceLocation value_at = locate.content(pattern, where);
            if (!seen.insert(pattern).second) {
                diags.warn("duplicate-url-pattern", "url-pattern " + pattern + " mapped again; first mapping kept",
                           value_at);
                continue;
            }
            out.mappings.push_back(ServletMappingDecl{pattern, servlet, value_at});
        }
    }

    for (const auto* w : children(*root, {"welcome-file-list"}))
        for (const auto* f : children(*w, {"welcome-file"})) out.welcome_files.push_back(trimmed(f->data()));

    auto read_taglibs = [&](const pt::ptree& parent) {
        for (const auto* t : children(parent, {"taglib"})) {
            std::string uri = text_of(*t, {"taglib-uri"});
            std::string location = text_of(*t, {"taglib-location"});
            if (!uri.empty() && !location.empty()) out.taglib_locations.emplace(uri, location);
        }
    };
    read_taglibs(*root);
    for (const auto* jc : children(*root, {"jsp-config"})) read_taglibs(*jc);

    for (const auto* r : children(*root, {"ejb-ref", "ejb-local-ref"})) {
        EjbRefDecl ref;
        ref.name = text_of(*r, {"ejb-ref-name"});
        ref.link = text_of(*r, {"ejb-link"});
        ref.type = text_of(*r, {"remote", "local", "home", "local-home"});
        if (!ref.name.empty()) out.ejb_refs.push_back(std::move(ref));
    }

    for (const char* ignored : {"filter", "listener"})
        if (!children(*root, {ignored}).empty())
            diags.info("descriptor-element-ignored", std::string(ignored) + " elements are not analyzed",
                       locate.nth(ignored, 0));
    return out;
}

TagLibrary parse_tld(std::string_view text, std::string_view path, DependencyGraph& graph, Diagnostics& diags)
{
    TagLibrary lib;
    lib.path = std::string(path);
    lib.config = graph.add_entity(config_file_entity(path));

    pt::ptree doc;
    const pt::ptree* root = parse_root(text, path, {"taglib"}, doc);
    if (!root) return lib;
    ElementLocator locate(text, path);
    lib.uri = text_of(*root, {"uri"});

    std::size_t index = 0;
    for (const auto* t : children(*root, {"tag"})) {
        TagSpec spec;
        spec.location = locate.nth("tag", index++);
        spec.name = text_of(*t, {"name"});
        spec.handler = text_of(*t, {"tag-class", "tagclass"});
        if (spec.name.empty()) {
            diags.warn("descriptor-incomplete", "tag without a name", spec.location);
            continue;
        }
        for (const auto* a : children(*t, {"attribute"})) {
            TagAttributeSpec attr;
            attr.name = text_of(*a, {"name"});
            std::string required = text_of(*a, {"required"});
            std::transform(required.begin(), required.end(), required.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            attr.required = required == "true" || required == "yes";
            if (attr.name.empty()) continue;
            if (spec.attribute(attr.name)) {
                diags.warn("duplicate-tag-attribute", "attribute " + attr.name + " declared twice on " + spec.name,
                           spec.location);
                continue;
            }
            spec.attributes.push_back(std::move(attr));
        }
        if (lib.find(spec.name)) {
            diags.warn("duplicate-tag", "tag " + spec.name + " declared twice; first kept", spec.location);
            continue;
        }
        Entity def = make_entity(EntityKind::TagDefinition, lib.path + "#" + spec.name, path, spec.location,
                                 lib.config);
        spec.definition = graph.add_entity(def);
        lib.tags.push_back(std::move(spec));
    }
    return lib;
}

std::map<std::string, std::string> parse_ejb_jar(std::string_view text, std::string_view path, DependencyGraph& graph,
                                                 Diagnostics& diags)
{
    graph.add_entity(config_file_entity(path));
    std::map<std::string, std::string> out;
    pt::ptree doc;
    const pt::ptree* root = parse_root(text, path, {"ejb-jar"}, doc);
    if (!root) return out;
    for (const auto* beans : children(*root, {"enterprise-beans"})) {
        for (const auto* b : children(*beans, {"session", "entity", "message-driven"})) {
            std::string name = text_of(*b, {"ejb-name"});
            std::string cls = text_of(*b, {"ejb-class"});
            if (name.empty() || cls.empty()) continue;
            if (!out.emplace(name, cls).second)
                diags.warn("duplicate-ejb-name", "ejb-name " + name + " declared twice; first kept",
                           SourceLocation{std::string(path), 1, 1});
        }
    }
    return out;
}

std::map<std::string, std::string> parse_faces_config(std::string_view text, std::string_view path,
                                                      DependencyGraph& graph, Diagnostics& diags)
{
    graph.add_entity(config_file_entity(path));
    std::map<std::string, std::string> out;
    pt::ptree doc;
    const pt::ptree* root = parse_root(text, path, {"faces-config"}, doc);
    if (!root) return out;
    for (const auto* b : children(*root, {"managed-bean"})) {
        std::string name = text_of(*b, {"managed-bean-name"});
        std::string cls = text_of(*b, {"managed-bean-class"});
        if (name.empty() || cls.empty()) continue;
        if (!out.emplace(name, cls).second)
            diags.warn("duplicate-bean", "managed bean " + name + " declared twice; first kept",
                       SourceLocation{std::string(path), 1, 1});
    }
    return out;
}

AnnotationFacts collect_annotations(const ProjectIndex& index, Diagnostics& diags)
{
    AnnotationFacts facts;
    for (const auto& [qualified, cls] : index.classes()) {
        if (cls.synthetic) continue;
        const std::string simple = cls.decl->name;
        for (const auto& ann : cls.decl->annotations) {
            const std::string kind = ann.simple_name();
            SourceLocation where{cls.defining_path, ann.pos.line, ann.pos.column};
            auto literal = [&](std::string_view key) -> std::optional<std::vector<std::string>> {
                auto it = ann.arguments.find(std::string(key));
                if (it == ann.arguments.end()) return std::vector<std::string>{};
                if (!it->second.literal_only) {
                    diags.warn("non-literal-annotation",
                               "@" + kind + " " + std::string(key) + " is not a string literal; skipped", where);
                    return std::nullopt;
                }
                return it->second.literals;
            };
            if (kind == "WebServlet") {
                facts.servlet_classes.insert(qualified);
                for (const char* key : {"value", "urlPatterns"})
                    if (auto values = literal(key))
                        for (const auto& p : *values) facts.url_patterns.push_back({p, qualified, where});
            } else if (kind == "Stateless" || kind == "Stateful" || kind == "MessageDriven" || kind == "Singleton") {
                auto names = literal("name");
                std::string name = names && !names->empty() ? names->front() : simple;
                facts.ejb_names.emplace(name, qualified);
            } else if (kind == "ManagedBean" || kind == "Named") {
                auto names = literal(kind == "Named" ? "value" : "name");
                std::string name = names && !names->empty() ? names->front() : simple;
                if (name == simple && !name.empty())
                    name[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(name[0])));
                facts.named_beans.emplace(name, qualified);
            }
        }
    }
    return facts;
}

// ---- mapping -----------------------------------------------------------

bool UrlMappingTable::add(const std::string& pattern, UrlTarget target)
{
    target.pattern = pattern;
    return patterns_.emplace(pattern, std::move(target)).second;
}

std::optional<UrlTarget> UrlMappingTable::match(std::string_view path) const
{
    const std::string p(path);
    if (auto it = patterns_.find(p); it != patterns_.end() && p != "/") return it->second;

    // Longest "/prefix/*".
    const UrlTarget* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& [pattern, target] : patterns_) {
        if (pattern.size() < 2 || pattern.compare(pattern.size() - 2, 2, "/*") != 0) continue;
        std::string prefix = pattern.substr(0, pattern.size() - 2);
        bool hit = p == prefix || (p.size() > prefix.size() && p.compare(0, prefix.size(), prefix) == 0 &&
                                   p[prefix.size()] == '/');
        if (hit && (!best || prefix.size() >= best_len)) {
            best = &target;
            best_len = prefix.size();
        }
    }
    if (best) return *best;

    auto slash = p.rfind('/');
    auto dot = p.rfind('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        if (auto it = patterns_.find("*" + p.substr(dot)); it != patterns_.end()) return it->second;
    return std::nullopt;
}

std::optional<UrlTarget> UrlMappingTable::lookup(std::string_view path) const
{
    if (auto hit = match(path)) return hit;
    if (!path.empty() && path.back() == '/') {
        static const std::vector<std::string> defaults = {"index.html", "index.htm", "index.jsp"};
        for (const auto& w : welcome_.empty() ? defaults : welcome_)
            if (auto hit = match(std::string(path) + w)) return hit;
    }
    if (auto it = patterns_.find("/"); it != patterns_.end()) return it->second;
    return std::nullopt;
}

const TagLibrary* ConfigModel::resolve_taglib(std::string_view uri, std::string_view page_web_path) const
{
    for (const auto& lib : libraries)
        if (!lib.uri.empty() && lib.uri == uri) return &lib;
    auto by_path = [&](std::string_view location) -> const TagLibrary* {
        auto normalized = normalize_url(location, page_web_path);
        if (!normalized) return nullptr;
        for (const auto& lib : libraries)
            if (!lib.web_path.empty() && lib.web_path == *normalized) return &lib;
        return nullptr;
    };
    for (const auto& wx : web_xmls)
        if (auto it = wx.taglib_locations.find(std::string(uri)); it != wx.taglib_locations.end())
            if (const auto* lib = by_path(it->second)) return lib;
    return by_path(uri);
}

std::set<std::string> ConfigModel::descriptor_servlets() const
{
    std::set<std::string> out;
    for (const auto& wx : web_xmls)
        for (const auto& s : wx.servlets)
            if (!s.class_name.empty()) out.insert(s.class_name);
    return out;
}

UrlMappingTable build_mapping(const ConfigModel& config, const ProjectIndex& index, const std::vector<PageRef>& pages,
                              Diagnostics& diags)
{
    UrlMappingTable table;
    std::map<std::string, EntityId> page_ids;
    for (const auto& p : pages) page_ids.emplace(p.web_path, p.entity);

    auto class_target = [&](const std::string& cls, UrlTarget::Source source) {
        UrlTarget t;
        t.name = cls;
        t.source = source;
        if (const auto* info = index.find_class(cls)) t.entity = info->id;
        return t;
    };

    std::vector<std::string> welcome;
    for (const auto& wx : config.web_xmls) {
        std::map<std::string, const ServletDecl*> servlets;
        for (const auto& s : wx.servlets) servlets.emplace(s.name, &s);
        for (const auto& m : wx.mappings) {
            auto it = servlets.find(m.servlet);
            if (it == servlets.end()) {
                diags.warn("unknown-servlet", "servlet-mapping names undeclared servlet " + m.servlet, m.location);
                continue;
            }
            UrlTarget target;
            if (!it->second->jsp_file.empty()) {
                std::string web = *normalize_url(it->second->jsp_file, "/");
                target.name = web;
                target.source = UrlTarget::Source::Descriptor;
                if (auto p = page_ids.find(web); p != page_ids.end()) target.entity = p->second;
            } else {
                target = class_target(it->second->class_name, UrlTarget::Source::Descriptor);
            }
            if (!table.add(m.pattern, target))
                diags.warn("duplicate-url-pattern", "url-pattern " + m.pattern + " already mapped; first kept",
                           m.location);
        }
        for (const auto& w : wx.welcome_files) welcome.push_back(w);
    }
    for (const auto& a : config.annotations.url_patterns) {
        if (!table.add(a.pattern, class_target(a.class_name, UrlTarget::Source::Annotation)))
            diags.warn("mapping-conflict",
                       "url-pattern " + a.pattern + " from @WebServlet on " + a.class_name +
                           " is already mapped by a descriptor; descriptor wins",
                       a.location);
    }
    for (const auto& p : pages) {
        UrlTarget t;
        t.name = p.web_path;
        t.entity = p.entity;
        t.source = UrlTarget::Source::PagePath;
        table.add(p.web_path, t);
    }
    table.set_welcome_files(std::move(welcome));

    for (const auto& lib : config.libraries) {
        for (const auto& tag : lib.tags) {
            if (!lib.uri.empty()) table.tag_to_handler.emplace(std::make_pair(lib.uri, tag.name), tag);
            if (!lib.web_path.empty()) table.tag_to_handler.emplace(std::make_pair(lib.web_path, tag.name), tag);
        }
    }
    return table;
}

} // namespace jeedep
