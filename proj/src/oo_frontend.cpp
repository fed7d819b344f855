#include "jeedep/oo_frontend.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "java_walk.hpp"

namespace jeedep {

namespace {

const std::set<std::string, std::less<>> kWriterTypes = {"PrintWriter", "JspWriter", "Writer",
                                                         "ServletOutputStream", "PrintStream", "BodyContent"};
const std::set<std::string, std::less<>> kWriteMethods = {"print", "println", "write"};
const std::set<std::string, std::less<>> kWriterGetters = {"getWriter", "getOut", "getOutputStream",
                                                           "getEnclosingWriter"};
const std::set<std::string, std::less<>> kPrimitiveTypes = {"int",   "long",   "short",   "byte", "char",
                                                            "float", "double", "boolean", "void", "var"};

std::size_t array_dims(std::string_view type)
{
    std::size_t dims = 0;
    for (auto pos = type.find("[]"); pos != std::string_view::npos; pos = type.find("[]", pos + 2)) ++dims;
    return dims;
}

} // namespace

std::string erase_type(std::string_view type_name)
{
    std::string out;
    int depth = 0;
    for (char c : type_name) {
        if (c == '<') ++depth;
        else if (c == '>') depth = std::max(0, depth - 1);
        else if (depth == 0 && c != '[' && c != ']' && !std::isspace(static_cast<unsigned char>(c)))
            out += c;
    }
    while (out.size() >= 3 && out.compare(out.size() - 3, 3, "...") == 0) out.resize(out.size() - 3);
    return out;
}

std::string simple_type_name(std::string_view type_name)
{
    std::string erased = erase_type(type_name);
    auto dot = erased.rfind('.');
    return dot == std::string::npos ? erased : erased.substr(dot + 1);
}

bool is_writer_type(std::string_view type_name) { return kWriterTypes.count(simple_type_name(type_name)) != 0; }

std::string method_entity_name(std::string_view class_name, std::string_view method, std::size_t arity)
{
    return std::string(class_name) + "." + std::string(method) + "/" + std::to_string(arity);
}

std::string field_entity_name(std::string_view class_name, std::string_view field)
{
    return std::string(class_name) + "." + std::string(field);
}

// ---- write sites -------------------------------------------------------

bool StringWriteSite::has_hole() const
{
    return std::any_of(fragments.begin(), fragments.end(), [](const WriteFragment& f) { return f.hole; });
}

const WriteFragment* StringWriteSite::fragment_at(std::size_t offset) const
{
    std::size_t at = 0;
    for (const auto& f : fragments) {
        std::size_t len = f.hole ? kHoleMarker.size() : f.text.size();
        if (offset >= at && offset < at + len) return f.hole ? nullptr : &f;
        at += len;
    }
    return nullptr;
}

namespace {

void flatten_concat(const Expr& e, std::vector<WriteFragment>& out)
{
    if (e.kind == Expr::Kind::Binary && e.text == "+") {
        flatten_concat(e.operands[0], out);
        flatten_concat(e.operands[1], out);
        return;
    }
    if (e.kind == Expr::Kind::StringLit || e.kind == Expr::Kind::CharLit) {
        out.push_back(WriteFragment{false, e.text, e.pos});
        return;
    }
    if (!out.empty() && out.back().hole) return;  // adjacent holes merge
    out.push_back(WriteFragment{true, {}, e.pos});
}

bool is_writer_receiver(const Expr& r, const java::Scope& scope, const ClassDecl& cls)
{
    if (r.kind == Expr::Kind::Name) {
        if (const std::string* type = scope.lookup(r.text)) return r.text == "out" || is_writer_type(*type);
        for (const auto& f : cls.fields)
            if (f.name == r.text) return r.text == "out" || is_writer_type(f.type_name);
        return r.text == "out";
    }
    if (r.kind == Expr::Kind::Call) return kWriterGetters.count(r.text) && r.arity() == 0;
    return false;
}

} // namespace

std::vector<StringWriteSite> collect_string_writes(const OoCompilationUnit& unit)
{
    std::vector<StringWriteSite> sites;
    for (const auto& cls : unit.classes) {
        std::string qualified = unit.qualify(cls);
        java::walk_class(cls, [&](const Expr& e, const java::Scope& scope, const java::Member& member) {
            if (e.kind != Expr::Kind::Call || !kWriteMethods.count(e.text) || e.arity() != 1 || !e.receiver()) return;
            if (!is_writer_receiver(*e.receiver(), scope, cls)) return;
            std::vector<WriteFragment> fragments;
            flatten_concat(e.arg(0), fragments);
            if (std::all_of(fragments.begin(), fragments.end(), [](const WriteFragment& f) { return f.hole; })) return;
            StringWriteSite site;
            site.path = unit.path;
            site.class_name = qualified;
            if (member.method) {
                site.method_name = member.method->name;
                site.method_arity = member.method->arity();
            }
            for (const auto& f : fragments) site.text += f.hole ? std::string(kHoleMarker) : f.text;
            site.fragments = std::move(fragments);
            site.pos = e.pos;
            sites.push_back(std::move(site));
        });
    }
    return sites;
}

// ---- project index -----------------------------------------------------

ProjectIndex::ProjectIndex(std::span<const OoUnitInput> inputs)
{
    for (const auto& input : inputs) {
        for (const auto& cls : input.unit->classes) {
            ClassInfo info;
            info.qualified = input.unit->qualify(cls);
            info.decl = &cls;
            info.unit = input.unit;
            info.synthetic = input.synthetic;
            info.defining_path = input.unit->path;
            info.id = EntityId::derive(EntityKind::ClassUnit, info.qualified, info.defining_path);
            classes_.try_emplace(info.qualified, std::move(info));
        }
    }
}

const ProjectIndex::ClassInfo* ProjectIndex::find_class(std::string_view qualified) const
{
    auto it = classes_.find(std::string(qualified));
    return it == classes_.end() ? nullptr : &it->second;
}

const ProjectIndex::ClassInfo* ProjectIndex::outer_of(const ClassInfo& cls) const
{
    if (cls.decl->outer.empty()) return nullptr;
    const std::string& pkg = cls.unit->package_name;
    return find_class(pkg.empty() ? cls.decl->outer : pkg + "." + cls.decl->outer);
}

std::optional<std::string> ProjectIndex::resolve_type(std::string_view name, const OoCompilationUnit& unit,
                                                      const ClassInfo* context) const
{
    const std::string type = erase_type(name);
    if (type.empty() || kPrimitiveTypes.count(type)) return std::nullopt;

    auto dot = type.find('.');
    if (dot != std::string::npos) {
        if (find_class(type)) return type;
        // Outer.Inner written relative to the current scope
        if (auto head = resolve_type(type.substr(0, dot), unit, context)) {
            std::string candidate = *head + type.substr(dot);
            if (find_class(candidate)) return candidate;
        }
        return std::nullopt;
    }

    for (const ClassInfo* ctx = context; ctx; ctx = outer_of(*ctx)) {
        if (ctx->decl->name == type) return ctx->qualified;
        if (find_class(ctx->qualified + "." + type)) return ctx->qualified + "." + type;
    }
    for (const auto& imp : unit.imports) {
        if (imp.is_static) continue;
        const auto& n = imp.name;
        if (n.size() > type.size() && n.compare(n.size() - type.size(), type.size(), type) == 0 &&
            n[n.size() - type.size() - 1] == '.' && find_class(n))
            return n;
    }
    const std::string& pkg = unit.package_name;
    std::string same = pkg.empty() ? type : pkg + "." + type;
    if (find_class(same)) return same;
    for (const auto& imp : unit.imports) {
        if (imp.is_static || imp.name.size() < 2 || imp.name.compare(imp.name.size() - 2, 2, ".*") != 0) continue;
        std::string candidate = imp.name.substr(0, imp.name.size() - 1) + type;
        if (find_class(candidate)) return candidate;
    }
    return std::nullopt;
}

std::vector<const ProjectIndex::ClassInfo*> ProjectIndex::chain(std::string_view qualified) const
{
    std::vector<const ClassInfo*> out;
    std::set<std::string, std::less<>> seen;
    const ClassInfo* cur = find_class(qualified);
    while (cur && seen.insert(cur->qualified).second) {
        out.push_back(cur);
        if (!cur->decl->superclass) break;
        auto next = resolve_type(*cur->decl->superclass, *cur->unit, outer_of(*cur));
        cur = next ? find_class(*next) : nullptr;
    }
    return out;
}

std::vector<ProjectIndex::MethodRef> ProjectIndex::find_methods(std::string_view qualified, std::string_view name,
                                                                std::size_t arity) const
{
    auto collect = [&](const ClassInfo* cls, std::vector<MethodRef>& out) {
        for (const auto& m : cls->decl->methods)
            if (!m.is_constructor && m.name == name && m.arity() == arity)
                out.push_back(MethodRef{cls, &m, method_id(*cls, m)});
    };
    for (const ClassInfo* cls : chain(qualified)) {
        std::vector<MethodRef> found;
        collect(cls, found);
        if (!found.empty()) return found;
    }
    // Interface methods (abstract receivers).
    std::deque<const ClassInfo*> queue;
    std::set<std::string, std::less<>> seen;
    for (const ClassInfo* cls : chain(qualified)) queue.push_back(cls);
    while (!queue.empty()) {
        const ClassInfo* cls = queue.front();
        queue.pop_front();
        for (const auto& iface : cls->decl->interfaces) {
            auto q = resolve_type(iface, *cls->unit, outer_of(*cls));
            if (!q || !seen.insert(*q).second) continue;
            const ClassInfo* target = find_class(*q);
            std::vector<MethodRef> found;
            collect(target, found);
            if (!found.empty()) return found;
            queue.push_back(target);
        }
    }
    return {};
}

std::vector<ProjectIndex::MethodRef> ProjectIndex::methods_named(std::string_view name, std::size_t arity) const
{
    std::vector<MethodRef> out;
    for (const auto& [q, cls] : classes_) {
        if (cls.synthetic) continue;
        for (const auto& m : cls.decl->methods)
            if (!m.is_constructor && m.name == name && m.arity() == arity)
                out.push_back(MethodRef{&cls, &m, method_id(cls, m)});
    }
    return out;
}

std::optional<ProjectIndex::FieldRef> ProjectIndex::find_field(std::string_view qualified, std::string_view name) const
{
    for (const ClassInfo* cls : chain(qualified))
        for (const auto& f : cls->decl->fields)
            if (f.name == name) return FieldRef{cls, &f, field_id(*cls, f)};
    return std::nullopt;
}

bool ProjectIndex::inherits_from(std::string_view qualified, const std::set<std::string, std::less<>>& bases) const
{
    std::deque<const ClassInfo*> queue;
    std::set<std::string, std::less<>> seen;
    if (const ClassInfo* start = find_class(qualified)) queue.push_back(start);
    while (!queue.empty()) {
        const ClassInfo* cls = queue.front();
        queue.pop_front();
        if (!seen.insert(cls->qualified).second) continue;
        std::vector<std::string> supers = cls->decl->interfaces;
        if (cls->decl->superclass) supers.push_back(*cls->decl->superclass);
        for (const auto& s : supers) {
            if (bases.count(simple_type_name(s))) return true;
            if (auto q = resolve_type(s, *cls->unit, outer_of(*cls)))
                if (const ClassInfo* next = find_class(*q)) queue.push_back(next);
        }
    }
    return false;
}

std::optional<std::string> ProjectIndex::external_base(std::string_view qualified) const
{
    auto classes = chain(qualified);
    if (classes.empty()) return std::nullopt;
    const ClassInfo* last = classes.back();
    if (!last->decl->superclass) return std::nullopt;
    if (resolve_type(*last->decl->superclass, *last->unit, outer_of(*last))) return std::nullopt;  // cycle
    return erase_type(*last->decl->superclass);
}

std::string ProjectIndex::method_name(const ClassInfo& owner, const MethodDecl& method) const
{
    bool overloaded = false;
    for (const auto& m : owner.decl->methods)
        if (&m != &method && m.name == method.name && m.arity() == method.arity()) overloaded = true;
    if (!overloaded) return method_entity_name(owner.qualified, method.name, method.arity());
    std::string name = owner.qualified + "." + method.name + "(";
    for (std::size_t i = 0; i < method.params.size(); ++i) {
        if (i) name += ",";
        name += simple_type_name(method.params[i].type_name);
        for (std::size_t d = array_dims(method.params[i].type_name); d > 0; --d) name += "[]";
    }
    return name + ")";
}

EntityId ProjectIndex::method_id(const ClassInfo& owner, const MethodDecl& method) const
{
    return EntityId::derive(EntityKind::MethodUnit, method_name(owner, method), owner.defining_path);
}

EntityId ProjectIndex::field_id(const ClassInfo& owner, const FieldDecl& field) const
{
    return EntityId::derive(EntityKind::FieldUnit, field_entity_name(owner.qualified, field.name),
                            owner.defining_path);
}

SourceLocation ProjectIndex::locate(const ClassInfo& cls, Position pos) const
{
    if (cls.synthetic) {
        if (cls.synthetic->origins)
            if (auto hit = cls.synthetic->origins->map(pos)) return hit->location;
        return cls.synthetic->page_location;
    }
    return SourceLocation{cls.defining_path, pos.line, pos.column};
}

// ---- entities ----------------------------------------------------------

void add_class_entities(const ProjectIndex& index, const ProjectIndex::ClassInfo& cls, DependencyGraph& graph)
{
    std::optional<EntityId> parent;
    if (cls.synthetic) {
        parent = cls.synthetic->page;
    } else if (!cls.decl->outer.empty()) {
        const std::string& pkg = cls.unit->package_name;
        const auto* outer = index.find_class(pkg.empty() ? cls.decl->outer : pkg + "." + cls.decl->outer);
        if (outer) {
            add_class_entities(index, *outer, graph);
            parent = outer->id;
        }
    } else if (!cls.unit->package_name.empty()) {
        parent = graph.add_entity(
            make_entity(EntityKind::Package, cls.unit->package_name, "", SourceLocation{"", 1, 1}));
    }

    const bool synthetic = cls.synthetic != nullptr;
    SourceLocation where = synthetic ? cls.synthetic->page_location : index.locate(cls, cls.decl->pos);
    Entity class_entity = make_entity(EntityKind::ClassUnit, cls.qualified, cls.defining_path, where, parent, synthetic);
    graph.add_entity(class_entity);

    for (const auto& m : cls.decl->methods) {
        Entity e = make_entity(EntityKind::MethodUnit, index.method_name(cls, m), cls.defining_path,
                               index.locate(cls, m.pos), cls.id, synthetic);
        graph.add_entity(e);
    }
    for (const auto& f : cls.decl->fields) {
        Entity e = make_entity(EntityKind::FieldUnit, field_entity_name(cls.qualified, f.name), cls.defining_path,
                               index.locate(cls, f.pos), cls.id, synthetic);
        graph.add_entity(e);
    }
}

// ---- edges -------------------------------------------------------------

namespace {

struct TypeRef {
    enum class Kind { Project, External, Unknown };
    Kind kind = Kind::Unknown;
    std::string name;          // qualified for project types, erased simple name otherwise
    std::size_t dims = 0;      // array dimensions
    bool is_static = false;    // a type name used as a receiver

    static TypeRef unknown() { return {}; }
    static TypeRef external(std::string n, std::size_t d = 0) { return {Kind::External, std::move(n), d, false}; }
};

class Extractor {
public:
    Extractor(const ProjectIndex& index, DependencyGraph& graph, const OoOptions& options, Diagnostics& diags)
        : index_(index), graph_(graph), options_(options), diags_(diags)
    {
    }

    void run(const ProjectIndex::ClassInfo& cls)
    {
        cls_ = &cls;
        emit_inheritance();
        java::walk_class(*cls.decl, [this](const Expr& e, const java::Scope& scope, const java::Member& member) {
            scope_ = &scope;
            member_ = &member;
            visit(e);
        });
    }

private:
    // ---- attribution

    EntityId source() const
    {
        if (cls_->synthetic) return cls_->synthetic->page;
        if (member_ && member_->method) return index_.method_id(*cls_, *member_->method);
        return cls_->id;
    }

    Analyzer analyzer() const { return cls_->synthetic ? Analyzer::JspLowering : Analyzer::OoFrontend; }

    // False for statements produced by custom-tag lowering.
    bool attributable(Position pos) const
    {
        if (!cls_->synthetic || !cls_->synthetic->origins) return true;
        auto hit = cls_->synthetic->origins->map(pos);
        return !hit || hit->node != TemplateNodeKind::CustomTag;
    }

    void edge(const EntityId& target, RelationKind kind, Position pos, std::string note)
    {
        graph_.add_relationship(
            Relationship{source(), target, kind, Provenance{analyzer(), index_.locate(*cls_, pos), std::move(note)}});
    }

    void external_edge(const std::string& name, RelationKind kind, Position pos)
    {
        if (options_.externals != ExternalPolicy::Placeholder) return;
        graph_.add_dangling(source(), name, kind, Provenance{analyzer(), index_.locate(*cls_, pos), "external"});
    }

    // ---- inheritance

    void emit_inheritance()
    {
        const ClassDecl& decl = *cls_->decl;
        const ProjectIndex::ClassInfo* ctx = outer();
        auto link = [&](const std::string& name, RelationKind kind) {
            if (auto q = index_.resolve_type(name, *cls_->unit, ctx)) {
                graph_.add_relationship(Relationship{cls_->id, index_.find_class(*q)->id, kind,
                                                     Provenance{analyzer(), index_.locate(*cls_, decl.pos), name}});
            } else if (options_.externals == ExternalPolicy::Placeholder) {
                graph_.add_dangling(cls_->id, erase_type(name), kind,
                                    Provenance{analyzer(), index_.locate(*cls_, decl.pos), "external"});
            }
        };
        if (decl.superclass) link(*decl.superclass, RelationKind::Extends);
        const RelationKind iface_kind =
            decl.kind == ClassDecl::Kind::Interface ? RelationKind::Extends : RelationKind::Implements;
        for (const auto& i : decl.interfaces) link(i, iface_kind);
    }

    const ProjectIndex::ClassInfo* outer() const
    {
        if (cls_->decl->outer.empty()) return nullptr;
        const std::string& pkg = cls_->unit->package_name;
        return index_.find_class(pkg.empty() ? cls_->decl->outer : pkg + "." + cls_->decl->outer);
    }

    // ---- typing

    TypeRef declared(const std::string& type, const ProjectIndex::ClassInfo& context) const
    {
        std::size_t dims = array_dims(type);
        if (erase_type(type) == "var") return TypeRef::unknown();
        if (auto q = index_.resolve_type(type, *context.unit, &context))
            return TypeRef{TypeRef::Kind::Project, *q, dims, false};
        return TypeRef::external(simple_type_name(type), dims);
    }

    std::optional<ProjectIndex::FieldRef> field_in_scope(std::string_view name) const
    {
        for (const auto* ctx = cls_; ctx;) {
            if (auto f = index_.find_field(ctx->qualified, name)) return f;
            if (ctx->decl->outer.empty()) break;
            const std::string& pkg = ctx->unit->package_name;
            ctx = index_.find_class(pkg.empty() ? ctx->decl->outer : pkg + "." + ctx->decl->outer);
        }
        return std::nullopt;
    }

    static std::string dotted(const Expr& e)
    {
        if (e.kind == Expr::Kind::Name) return e.text;
        if (e.kind == Expr::Kind::FieldAccess) {
            std::string head = dotted(e.operands.front());
            return head.empty() ? head : head + "." + e.text;
        }
        return {};
    }

    TypeRef type_of(const Expr& e) const
    {
        using K = Expr::Kind;
        switch (e.kind) {
        case K::StringLit: return TypeRef::external("String");
        case K::CharLit:
        case K::NumberLit:
        case K::BoolLit: return TypeRef::external("primitive");
        case K::This: return TypeRef{TypeRef::Kind::Project, cls_->qualified, 0, false};
        case K::Super:
            if (cls_->decl->superclass) return declared(*cls_->decl->superclass, *cls_);
            return TypeRef::external("Object");
        case K::Name: {
            if (const std::string* t = scope_->lookup(e.text)) return declared(*t, *cls_);
            if (auto f = field_in_scope(e.text)) return declared(f->field->type_name, *f->owner);
            if (auto q = index_.resolve_type(e.text, *cls_->unit, cls_)) {
                return TypeRef{TypeRef::Kind::Project, *q, 0, true};
            }
            if (!e.text.empty() && std::isupper(static_cast<unsigned char>(e.text[0]))) {
                TypeRef t = TypeRef::external(e.text);
                t.is_static = true;
                return t;
            }
            return TypeRef::unknown();
        }
        case K::FieldAccess: {
            const Expr& target = e.operands.front();
            if (!is_variable(target)) {
                std::string path = dotted(e);
                if (!path.empty())
                    if (auto q = index_.resolve_type(path, *cls_->unit, cls_))
                        return TypeRef{TypeRef::Kind::Project, *q, 0, true};
            }
            TypeRef base = type_of(target);
            if (base.dims > 0 && e.text == "length") return TypeRef::external("primitive");
            if (base.kind == TypeRef::Kind::Project && base.dims == 0) {
                if (auto f = index_.find_field(base.name, e.text)) return declared(f->field->type_name, *f->owner);
                if (base.is_static && index_.find_class(base.name + "." + e.text))
                    return TypeRef{TypeRef::Kind::Project, base.name + "." + e.text, 0, true};
            }
            if (base.kind == TypeRef::Kind::Unknown) return base;
            return TypeRef::external("?");
        }
        case K::Call: {
            auto targets = call_targets(e);
            if (targets.empty()) {
                const Expr* r = e.receiver();
                if (r && type_of(*r).kind == TypeRef::Kind::Unknown) return TypeRef::unknown();
                return TypeRef::external("?");
            }
            const auto& m = targets.front();
            return declared(m.method->return_type, *m.owner);
        }
        case K::New: return declared(e.text, *cls_);
        case K::NewArray: {
            TypeRef t = declared(e.text, *cls_);
            t.dims += std::max<std::size_t>(1, e.operands.size());
            return t;
        }
        case K::Cast: return declared(e.text, *cls_);
        case K::Conditional: return type_of(e.operands[1]);
        case K::Assign: return type_of(e.operands[0]);
        case K::Index: {
            TypeRef t = type_of(e.operands[0]);
            if (t.dims > 0) --t.dims;
            return t;
        }
        case K::Binary:
            if (e.text == "+" && (type_of(e.operands[0]).name == "String" || type_of(e.operands[1]).name == "String"))
                return TypeRef::external("String");
            return TypeRef::external("primitive");
        default: return TypeRef::external("?");
        }
    }

    bool is_variable(const Expr& e) const
    {
        if (e.kind == Expr::Kind::Name) return scope_->lookup(e.text) || field_in_scope(e.text);
        if (e.kind == Expr::Kind::FieldAccess) return is_variable(e.operands.front());
        return true;
    }

    // Project methods a call may reach. Empty when the target is external or
    // unknown.
    std::vector<ProjectIndex::MethodRef> call_targets(const Expr& call) const
    {
        const std::size_t arity = call.arity();
        const Expr* r = call.receiver();
        if (!r) {
            if (call.text == "this" || call.text == "super") return {};
            for (const auto* ctx = cls_; ctx;) {
                auto found = index_.find_methods(ctx->qualified, call.text, arity);
                if (!found.empty()) return found;
                if (ctx->decl->outer.empty()) break;
                const std::string& pkg = ctx->unit->package_name;
                ctx = index_.find_class(pkg.empty() ? ctx->decl->outer : pkg + "." + ctx->decl->outer);
            }
            return {};
        }
        TypeRef t = type_of(*r);
        if (t.kind == TypeRef::Kind::Project && t.dims == 0) return index_.find_methods(t.name, call.text, arity);
        return {};
    }

    // ---- visiting

    void visit(const Expr& e)
    {
        if (!attributable(e.pos)) return;
        switch (e.kind) {
        case Expr::Kind::Call: visit_call(e); break;
        case Expr::Kind::New:
            if (auto q = index_.resolve_type(e.text, *cls_->unit, cls_))
                edge(index_.find_class(*q)->id, RelationKind::Instantiates, e.pos, "new " + e.text);
            else
                external_edge(erase_type(e.text), RelationKind::Instantiates, e.pos);
            break;
        case Expr::Kind::Name:
            if (!scope_->lookup(e.text))
                if (auto f = field_in_scope(e.text)) edge(f->id, RelationKind::AccessesField, e.pos, e.text);
            break;
        case Expr::Kind::FieldAccess: {
            TypeRef base = type_of(e.operands.front());
            if (base.kind == TypeRef::Kind::Project && base.dims == 0)
                if (auto f = index_.find_field(base.name, e.text))
                    edge(f->id, RelationKind::AccessesField, e.pos, e.text);
            break;
        }
        default: break;
        }
    }

    void visit_call(const Expr& call)
    {
        const std::size_t arity = call.arity();
        const Expr* r = call.receiver();
        const std::string note = call.text + "/" + std::to_string(arity);

        if (!r && (call.text == "this" || call.text == "super")) {
            const ProjectIndex::ClassInfo* owner = cls_;
            if (call.text == "super") {
                auto chain = index_.chain(cls_->qualified);
                owner = chain.size() > 1 ? chain[1] : nullptr;
            }
            if (!owner) return;
            for (const auto& m : owner->decl->methods)
                if (m.is_constructor && m.arity() == arity)
                    edge(index_.method_id(*owner, m), RelationKind::Calls, call.pos, note);
            return;
        }

        auto targets = call_targets(call);
        if (!targets.empty()) {
            if (targets.size() > 1) ambiguous(call, targets.size());
            for (const auto& t : targets) edge(t.id, RelationKind::Calls, call.pos, note);
            return;
        }
        TypeRef t = r ? type_of(*r) : TypeRef::external("?");
        if (!r) {
            // Unqualified call that matches nothing in scope: an inherited
            // framework method.
            std::string base = index_.external_base(cls_->qualified).value_or("?");
            external_edge(simple_type_name(base) + "." + note, RelationKind::Calls, call.pos);
            return;
        }
        if (t.kind == TypeRef::Kind::Unknown) {
            auto candidates = index_.methods_named(call.text, arity);
            if (candidates.size() > 1) ambiguous(call, candidates.size());
            for (const auto& c : candidates) edge(c.id, RelationKind::Calls, call.pos, note);
            if (candidates.empty()) external_edge("?." + note, RelationKind::Calls, call.pos);
            return;
        }
        std::string owner = t.name;
        if (t.kind == TypeRef::Kind::Project)
            owner = t.dims > 0 ? "Object" : index_.external_base(t.name).value_or("Object");
        external_edge(simple_type_name(owner) + "." + note, RelationKind::Calls, call.pos);
    }

    void ambiguous(const Expr& call, std::size_t count)
    {
        diags_.warn("ambiguous-call",
                    "call " + call.text + "/" + std::to_string(call.arity()) + " matches " + std::to_string(count) +
                        " project methods; edges emitted to each",
                    index_.locate(*cls_, call.pos));
    }

    const ProjectIndex& index_;
    DependencyGraph& graph_;
    const OoOptions& options_;
    Diagnostics& diags_;
    const ProjectIndex::ClassInfo* cls_ = nullptr;
    const java::Scope* scope_ = nullptr;
    const java::Member* member_ = nullptr;
};

} // namespace

void extract_oo_graph(std::span<const OoUnitInput> inputs, const ProjectIndex& index, DependencyGraph& graph,
                      const OoOptions& options, Diagnostics& diags)
{
    std::set<std::string> seen;
    for (const auto& input : inputs) {
        for (const auto& cls : input.unit->classes) {
            const std::string qualified = input.unit->qualify(cls);
            const auto* info = index.find_class(qualified);
            if (!info || info->decl != &cls) {
                diags.warn("duplicate-class", "class " + qualified + " is declared more than once; later copy ignored",
                           SourceLocation{input.unit->path, cls.pos.line, cls.pos.column});
                continue;
            }
            add_class_entities(index, *info, graph);
        }
    }
    Extractor extractor(index, graph, options, diags);
    for (const auto& [qualified, info] : index.classes()) extractor.run(info);
}

} // namespace jeedep
