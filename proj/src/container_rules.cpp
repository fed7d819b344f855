#include "jeedep/container_rules.hpp"

#include <algorithm>
#include <cctype>

#include "java_walk.hpp"
#include "jeedep/lowering.hpp"

namespace jeedep {

namespace {

// Methods named `name` (any arity) in the nearest class of the chain that
// declares one.
std::vector<ProjectIndex::MethodRef> declared(const ProjectIndex& index, std::string_view qualified,
                                              std::string_view name)
{
    std::vector<ProjectIndex::MethodRef> out;
    for (const auto* cls : index.chain(qualified)) {
        for (const auto& m : cls->decl->methods)
            if (m.name == name && !m.is_constructor) out.push_back({cls, &m, index.method_id(*cls, m)});
        if (!out.empty()) break;
    }
    return out;
}

// A method the class only inherits from a library base; the container still
// calls it on the instance, so it becomes a node under the class.
EntityId inherited_method(const ProjectIndex& index, const ProjectIndex::ClassInfo& cls, std::string_view name,
                          std::size_t arity, DependencyGraph& graph)
{
    return graph.add_entity(make_entity(EntityKind::MethodUnit, method_entity_name(cls.qualified, name, arity),
                                        cls.defining_path, index.locate(cls, cls.decl->pos), cls.id, true),
                            Analyzer::ContainerRules);
}

EntityId callback(const ProjectIndex& index, const ProjectIndex::ClassInfo& cls, std::string_view name,
                  std::size_t arity, DependencyGraph& graph, Diagnostics& diags)
{
    auto found = index.find_methods(cls.qualified, name, arity);
    if (!found.empty()) return found.front().id;
    diags.info("inherited-callback",
               cls.qualified + " inherits " + std::string(name) + "/" + std::to_string(arity) +
                   "; modeled as a synthetic method",
               index.locate(cls, cls.decl->pos));
    return inherited_method(index, cls, name, arity, graph);
}

bool has_annotation(const MethodDecl& m, std::string_view simple)
{
    return std::any_of(m.annotations.begin(), m.annotations.end(),
                       [&](const AnnotationUse& a) { return a.simple_name() == simple; });
}

} // namespace

Entity container_entity(std::string_view name)
{
    return make_entity(EntityKind::Container, std::string(name), "", SourceLocation{"", 1, 1});
}

const std::set<std::string, std::less<>>& servlet_bases()
{
    static const std::set<std::string, std::less<>> bases = {"HttpServlet", "GenericServlet", "Servlet"};
    return bases;
}

const std::set<std::string, std::less<>>& tag_handler_bases()
{
    static const std::set<std::string, std::less<>> bases = {"Tag",     "TagSupport",         "BodyTagSupport",
                                                             "BodyTag", "SimpleTagSupport",   "SimpleTag",
                                                             "IterationTag"};
    return bases;
}

std::map<std::string, std::string> taglib_bindings(const TemplatePage& page)
{
    std::map<std::string, std::string> out;
    for (const auto& node : page.nodes) {
        if (node.kind != TemplateNodeKind::Directive || node.name != "taglib") continue;
        const auto* prefix = node.attribute("prefix");
        const auto* uri = node.attribute("uri");
        if (!uri) uri = node.attribute("tagdir");
        if (prefix && uri) out.emplace(prefix->value, uri->value);
    }
    return out;
}

std::vector<TagUse> find_tag_uses(const TemplatePage& page, const EntityId& page_id, std::string_view web_path,
                                  const ConfigModel& config, Diagnostics& diags)
{
    std::vector<TagUse> uses;
    const auto bindings = taglib_bindings(page);
    for (const auto& node : page.nodes) {
        if (node.kind != TemplateNodeKind::CustomTag || node.closing) continue;
        auto colon = node.name.find(':');
        const std::string prefix = node.name.substr(0, colon);
        const std::string local = colon == std::string::npos ? node.name : node.name.substr(colon + 1);

        auto bound = bindings.find(prefix);
        const TagLibrary* lib = bound == bindings.end() ? nullptr : config.resolve_taglib(bound->second, web_path);
        if (!lib) {
            diags.info("unbound-tag-prefix",
                       "<" + node.name + "> uses prefix '" + prefix + "' with no tag library in the project",
                       node.location);
            continue;
        }
        const TagSpec* spec = lib->find(local);
        if (!spec) {
            diags.warn("unknown-tag", "<" + node.name + "> is not declared in " + lib->path, node.location);
            continue;
        }

        TagUse use{page_id, std::string(web_path), node.name, spec, node.attributes, node.location};
        for (const auto& a : node.attributes)
            if (!spec->attribute(a.name))
                diags.warn("unknown-tag-attribute", "<" + node.name + "> has no attribute '" + a.name + "'",
                           a.location);
        for (const auto& declared_attr : spec->attributes)
            if (declared_attr.required && !node.attribute(declared_attr.name))
                diags.warn("MissingRequiredAttribute",
                           "<" + node.name + "> lacks required attribute '" + declared_attr.name + "'", node.location);
        uses.push_back(std::move(use));
    }
    return uses;
}

std::string setter_name(std::string_view attribute) { return "set" + capitalize_property(attribute); }

void emit_tag_lifecycle_edges(const TagUse& use, const ProjectIndex& index, DependencyGraph& graph,
                              Diagnostics& diags)
{
    const std::string& handler = use.spec->handler;
    const auto* cls = index.find_class(handler);
    if (cls && !index.inherits_from(cls->qualified, tag_handler_bases())) {
        diags.warn("not-a-tag-handler", handler + " handles <" + use.tag + "> but extends no tag base; no callbacks",
                   use.location);
        return;
    }

    auto emit = [&](std::string_view method, std::size_t arity, RelationKind kind, const SourceLocation& at,
                    std::string note) {
        Provenance evidence{Analyzer::ContainerRules, at, std::move(note)};
        if (cls) {
            graph.add_relationship(
                Relationship{use.page, callback(index, *cls, method, arity, graph, diags), kind, evidence});
        } else {
            graph.add_dangling(use.page, method_entity_name(handler, method, arity), kind, evidence);
        }
    };

    if (!cls)
        diags.warn("unresolved-tag-handler", "handler " + handler + " of <" + use.tag + "> is not in the project",
                   use.location);
    for (const auto& a : use.attributes) {
        if (!use.spec->attribute(a.name)) continue;
        emit(setter_name(a.name), 1, RelationKind::AttributeSetter, a.location, "<" + use.tag + "> " + a.name);
    }
    emit("doStartTag", 0, RelationKind::LifecycleCallback, use.location, "<" + use.tag + "> doStartTag");
    emit("doEndTag", 0, RelationKind::LifecycleCallback, use.location, "<" + use.tag + "> doEndTag");
}

void emit_servlet_lifecycle_edges(const ProjectIndex& index, const ConfigModel& config,
                                  const std::vector<EntityId>& lowered_pages, DependencyGraph& graph,
                                  Diagnostics& diags)
{
    const std::set<std::string> declared_in_xml = config.descriptor_servlets();
    bool any = !lowered_pages.empty();
    std::vector<Relationship> edges;

    for (const auto& [name, cls] : index.classes()) {
        if (cls.synthetic || cls.decl->kind != ClassDecl::Kind::Class) continue;
        const bool inherits = index.inherits_from(name, servlet_bases());
        const bool annotated = config.annotations.servlet_classes.count(name) != 0;
        if (!inherits && !annotated) {
            if (declared_in_xml.count(name))
                diags.warn("servlet-base-unknown",
                           name + " is declared as a servlet but extends no servlet base; no callbacks",
                           index.locate(cls, cls.decl->pos));
            continue;
        }
        any = true;
        auto emit_to = [&](const EntityId& target, const SourceLocation& at, const std::string& note) {
            edges.push_back(Relationship{{}, target, RelationKind::LifecycleCallback,
                                         Provenance{Analyzer::ContainerRules, at, note}});
        };
        auto emit_declared = [&](std::string_view method) {
            auto refs = declared(index, name, method);
            for (const auto& r : refs)
                emit_to(r.id, index.locate(*r.owner, r.method->pos), "servlet " + std::string(method));
            return !refs.empty();
        };
        // The container always calls init and service; missing ones are inherited.
        if (!emit_declared("init"))
            emit_to(callback(index, cls, "init", 1, graph, diags), index.locate(cls, cls.decl->pos), "servlet init");
        if (!emit_declared("service"))
            emit_to(callback(index, cls, "service", 2, graph, diags), index.locate(cls, cls.decl->pos),
                    "servlet service");
        for (std::string_view m : {"doGet", "doPost", "doPut", "doDelete", "doHead", "doOptions", "doTrace",
                                   "destroy"})
            emit_declared(m);
    }
    if (!any) return;

    const EntityId web = graph.add_entity(container_entity(kWebContainer));
    for (auto& e : edges) {
        e.source = web;
        graph.add_relationship(e);
    }
    for (const auto& page : lowered_pages) {
        const Entity* p = graph.find(page);
        if (!p) continue;
        graph.add_relationship(Relationship{web, page, RelationKind::LifecycleCallback,
                                            Provenance{Analyzer::ContainerRules, p->location, "page service"}});
    }
}

void emit_ejb_lifecycle_edges(const ProjectIndex& index, const ConfigModel& config, DependencyGraph& graph,
                              Diagnostics& diags)
{
    std::vector<Relationship> edges;
    std::set<std::string> seen;
    auto visit = [&](const std::string& qualified, bool descriptor) {
        if (!seen.insert(qualified).second) return;
        const auto* cls = index.find_class(qualified);
        if (!cls) {
            if (descriptor)
                diags.warn("unresolved-ejb-class", "enterprise bean class " + qualified + " is not in the project");
            return;
        }
        for (const auto* c : index.chain(qualified)) {
            for (const auto& m : c->decl->methods) {
                const bool named = descriptor && (m.name == "ejbCreate" || m.name == "ejbPostCreate" ||
                                                  m.name == "ejbRemove");
                const bool annotated = has_annotation(m, "PostConstruct") || has_annotation(m, "PreDestroy");
                if (!named && !annotated) continue;
                edges.push_back(Relationship{{}, index.method_id(*c, m), RelationKind::LifecycleCallback,
                                             Provenance{Analyzer::ContainerRules, index.locate(*c, m.pos),
                                                        "ejb " + m.name}});
            }
        }
    };
    for (const auto& [bean, cls] : config.ejb_classes) visit(cls, true);
    for (const auto& [bean, cls] : config.annotations.ejb_names) visit(cls, false);
    if (edges.empty()) return;

    const EntityId ejb = graph.add_entity(container_entity(kEjbContainer));
    for (auto& e : edges) {
        e.source = ejb;
        graph.add_relationship(e);
    }
}

std::string ejb_reference(std::string_view name)
{
    constexpr std::string_view env = "java:comp/env/";
    if (name.substr(0, env.size()) == env) name.remove_prefix(env.size());
    for (std::string_view portable : {"java:global/", "java:app/", "java:module/"}) {
        if (name.substr(0, portable.size()) != portable) continue;
        name.remove_prefix(portable.size());
        auto slash = name.rfind('/');
        if (slash != std::string_view::npos) name.remove_prefix(slash + 1);
        name = name.substr(0, name.find('!'));
        return name.empty() ? std::string() : "ejb/" + std::string(name);
    }
    if (name.substr(0, 4) != "ejb/" || name.size() == 4) return {};
    return std::string(name);
}

void emit_jndi_edges(const ProjectIndex& index, const ConfigModel& config, DependencyGraph& graph,
                     Diagnostics& diags)
{
    auto bean_class = [&](const std::string& ref) -> std::string {
        std::string bean = ref.substr(4);
        for (const auto& wx : config.web_xmls)
            for (const auto& r : wx.ejb_refs)
                if (r.name == ref && !r.link.empty()) {
                    bean = r.link.substr(r.link.find('#') == std::string::npos ? 0 : r.link.find('#') + 1);
                    break;
                }
        if (auto it = config.ejb_classes.find(bean); it != config.ejb_classes.end()) return it->second;
        if (auto it = config.annotations.ejb_names.find(bean); it != config.annotations.ejb_names.end())
            return it->second;
        std::string match;
        for (const auto& [q, cls] : index.classes()) {
            if (cls.synthetic || cls.decl->name != bean) continue;
            if (!match.empty()) return {};  // ambiguous simple name
            match = q;
        }
        return match;
    };

    for (const auto& [name, cls] : index.classes()) {
        java::walk_class(*cls.decl, [&](const Expr& e, const java::Scope&, const java::Member& member) {
            if (e.kind != Expr::Kind::Call || e.text != "lookup" || e.arity() != 1) return;
            const Expr& arg = e.arg(0);
            const EntityId source = cls.synthetic                      ? cls.synthetic->page
                                    : member.method ? index.method_id(cls, *member.method)
                                                    : cls.id;
            if (arg.kind != Expr::Kind::StringLit) {
                diags.warn("dynamic-lookup", "lookup argument is not a string literal; no edge",
                           index.locate(cls, arg.pos));
                return;
            }
            const SourceLocation at = index.locate(cls, arg.pos);
            const std::string ref = ejb_reference(arg.text);
            if (ref.empty()) {
                diags.info("non-ejb-lookup", "lookup of '" + arg.text + "' is not an enterprise bean", at);
                return;
            }
            Provenance evidence{Analyzer::ContainerRules, at, arg.text};
            const std::string target = bean_class(ref);
            if (const auto* info = target.empty() ? nullptr : index.find_class(target)) {
                graph.add_relationship(Relationship{source, info->id, RelationKind::JndiLookup, evidence});
                return;
            }
            diags.warn("unresolved-jndi", "no bean class for " + ref, at);
            graph.add_dangling(source, ref, RelationKind::JndiLookup, evidence);
        });
    }
}

} // namespace jeedep
