#include "jeedep/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace jeedep {

namespace {

constexpr std::array<std::string_view, 10> kEntityKindNames = {
    "Package", "ClassUnit",     "MethodUnit", "FieldUnit", "ServerPage",
    "ConfigFile", "TagDefinition", "HtmlPage", "Container", "UnresolvedTarget",
};

constexpr std::array<std::string_view, 14> kRelationKindNames = {
    "Contains",     "Calls",    "Instantiates", "Extends",           "Implements",
    "AccessesField", "Includes", "ForwardsTo",   "LinksTo",           "ErrorPage",
    "LifecycleCallback", "AttributeSetter", "ElAccess", "JndiLookup",
};

constexpr std::array<std::string_view, 6> kAnalyzerNames = {
    "OoFrontend", "JspLowering", "TagExtractor", "ContainerRules", "LiteralEl", "ConfigLayer",
};

template <typename Enum, std::size_t N>
std::optional<Enum> parse_enum(const std::array<std::string_view, N>& names, std::string_view text)
{
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == text) return static_cast<Enum>(i);
    return std::nullopt;
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t hash = 1469598103934665603ULL)
{
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t value)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

// Required parent kinds; an entity kind absent here may have any parent.
bool parent_kind_allowed(EntityKind child, EntityKind parent)
{
    switch (child) {
    case EntityKind::MethodUnit:
    case EntityKind::FieldUnit:
        return parent == EntityKind::ClassUnit;
    case EntityKind::TagDefinition:
        return parent == EntityKind::ConfigFile;
    case EntityKind::ClassUnit:
        return parent == EntityKind::Package || parent == EntityKind::ClassUnit || parent == EntityKind::ServerPage;
    default:
        return true;
    }
}

bool parent_required(EntityKind kind)
{
    return kind == EntityKind::MethodUnit || kind == EntityKind::FieldUnit || kind == EntityKind::TagDefinition;
}

Analyzer infer_contains_analyzer(const Entity& child)
{
    switch (child.kind) {
    case EntityKind::TagDefinition:
    case EntityKind::ConfigFile:
        return Analyzer::ConfigLayer;
    case EntityKind::Container:
        return Analyzer::ContainerRules;
    default:
        return child.synthetic ? Analyzer::JspLowering : Analyzer::OoFrontend;
    }
}

void check_parent(const DependencyGraph& graph, const Entity& entity)
{
    if (!entity.parent) {
        if (parent_required(entity.kind))
            throw GraphError(GraphError::Code::ParentMissing,
                             std::string(to_string(entity.kind)) + " '" + entity.name + "' requires a parent");
        return;
    }
    const Entity* parent = graph.find(*entity.parent);
    if (!parent)
        throw GraphError(GraphError::Code::ParentMissing,
                         "parent of '" + entity.name + "' is not in the graph: " + entity.parent->str());
    if (!parent_kind_allowed(entity.kind, parent->kind))
        throw GraphError(GraphError::Code::KindViolation,
                         std::string(to_string(entity.kind)) + " '" + entity.name + "' cannot be contained by " +
                             std::string(to_string(parent->kind)) + " '" + parent->name + "'");
}

} // namespace

std::string_view to_string(EntityKind kind) { return kEntityKindNames[static_cast<std::size_t>(kind)]; }
std::string_view to_string(RelationKind kind) { return kRelationKindNames[static_cast<std::size_t>(kind)]; }
std::string_view to_string(Analyzer analyzer) { return kAnalyzerNames[static_cast<std::size_t>(analyzer)]; }

std::optional<EntityKind> parse_entity_kind(std::string_view text)
{
    return parse_enum<EntityKind>(kEntityKindNames, text);
}
std::optional<RelationKind> parse_relation_kind(std::string_view text)
{
    return parse_enum<RelationKind>(kRelationKindNames, text);
}
std::optional<Analyzer> parse_analyzer(std::string_view text) { return parse_enum<Analyzer>(kAnalyzerNames, text); }

EntityId EntityId::derive(EntityKind kind, std::string_view name, std::string_view defining_path)
{
    std::uint64_t h = fnv1a(to_string(kind));
    h = fnv1a(std::string_view("\x1f", 1), h);
    h = fnv1a(name, h);
    h = fnv1a(std::string_view("\x1f", 1), h);
    h = fnv1a(defining_path, h);
    return EntityId(hex64(h));
}

Entity make_entity(EntityKind kind, std::string name, std::string_view defining_path, SourceLocation location,
                   std::optional<EntityId> parent, bool synthetic)
{
    Entity e;
    e.id = EntityId::derive(kind, name, defining_path);
    e.kind = kind;
    e.name = std::move(name);
    e.parent = std::move(parent);
    e.location = std::move(location);
    e.synthetic = synthetic;
    return e;
}

RelationshipKey key_of(const Relationship& rel)
{
    return RelationshipKey{rel.source, rel.target, rel.kind, rel.evidence.location};
}

void DependencyGraph::require_unsealed() const
{
    if (sealed_) throw GraphError(GraphError::Code::Sealed, "graph is sealed");
}

void DependencyGraph::index(const Entity& entity)
{
    by_name_[{entity.kind, entity.name}].insert(entity.id);
}

EntityId DependencyGraph::add_entity(const Entity& entity)
{
    return add_entity(entity, infer_contains_analyzer(entity));
}

EntityId DependencyGraph::add_entity(const Entity& entity, Analyzer contains_by)
{
    require_unsealed();
    if (auto it = entities_.find(entity.id); it != entities_.end()) {
        if (it->second == entity) return entity.id;
        throw GraphError(GraphError::Code::DuplicateDivergent,
                         "entity " + entity.id.str() + " ('" + entity.name + "') re-added with different fields");
    }
    if (entity.parent && *entity.parent == entity.id)
        throw GraphError(GraphError::Code::ParentMissing, "entity '" + entity.name + "' lists itself as parent");
    check_parent(*this, entity);

    entities_.emplace(entity.id, entity);
    index(entity);
    if (entity.parent) {
        Relationship contains;
        contains.source = *entity.parent;
        contains.target = entity.id;
        contains.kind = RelationKind::Contains;
        contains.evidence = Provenance{contains_by, entity.location, {}};
        relationships_.try_emplace(key_of(contains), contains);
    }
    return entity.id;
}

void DependencyGraph::add_relationship(const Relationship& rel)
{
    require_unsealed();
    relationships_.try_emplace(key_of(rel), rel);
}

EntityId DependencyGraph::add_dangling(const EntityId& source, std::string_view target_name, RelationKind kind,
                                       Provenance evidence)
{
    require_unsealed();
    EntityId target = EntityId::derive(EntityKind::UnresolvedTarget, target_name, "");
    dangling_names_.try_emplace(target, std::string(target_name));
    add_relationship(Relationship{source, target, kind, std::move(evidence)});
    return target;
}

SealReport DependencyGraph::seal(UnresolvedPolicy policy)
{
    if (sealed_) throw GraphError(GraphError::Code::AlreadySealed, "graph is already sealed");

    SealReport report;
    std::vector<RelationshipKey> to_drop;
    std::set<EntityId> placeholders;

    for (const auto& [key, rel] : relationships_) {
        const bool source_ok = contains(rel.source) || placeholders.count(rel.source);
        const bool target_ok = contains(rel.target) || placeholders.count(rel.target);
        if (source_ok && target_ok) continue;
        ++report.unresolved;
        if (policy == UnresolvedPolicy::Drop) {
            to_drop.push_back(key);
            continue;
        }
        for (const EntityId* endpoint : {&rel.source, &rel.target}) {
            if (contains(*endpoint) || placeholders.count(*endpoint)) continue;
            placeholders.insert(*endpoint);
        }
    }

    for (const auto& key : to_drop) {
        auto it = relationships_.find(key);
        report.dropped.push_back(it->second);
        relationships_.erase(it);
    }

    for (const auto& id : placeholders) {
        Entity e;
        e.id = id;
        e.kind = EntityKind::UnresolvedTarget;
        auto named = dangling_names_.find(id);
        e.name = named != dangling_names_.end() ? named->second : id.str();
        e.location = SourceLocation{"", 1, 1};
        entities_.emplace(id, e);
        index(e);
        report.placeholders.push_back(id);
    }

    dangling_names_.clear();
    sealed_ = true;
    return report;
}

const Entity* DependencyGraph::find(const EntityId& id) const
{
    auto it = entities_.find(id);
    return it == entities_.end() ? nullptr : &it->second;
}

std::vector<EntityId> DependencyGraph::lookup(EntityKind kind, std::string_view name) const
{
    auto it = by_name_.find({kind, std::string(name)});
    if (it == by_name_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

std::optional<EntityId> DependencyGraph::lookup_one(EntityKind kind, std::string_view name) const
{
    auto it = by_name_.find({kind, std::string(name)});
    if (it == by_name_.end() || it->second.empty()) return std::nullopt;
    return *it->second.begin();
}

std::vector<Relationship> DependencyGraph::relationships_of_kind(RelationKind kind) const
{
    std::vector<Relationship> out;
    for (const auto& [key, rel] : relationships_)
        if (rel.kind == kind) out.push_back(rel);
    return out;
}

std::vector<Relationship> DependencyGraph::outgoing(const EntityId& source) const
{
    std::vector<Relationship> out;
    for (auto it = relationships_.lower_bound(RelationshipKey{source, EntityId{}, RelationKind::Contains, {}});
         it != relationships_.end() && it->first.source == source; ++it)
        out.push_back(it->second);
    return out;
}

std::vector<Relationship> DependencyGraph::incoming(const EntityId& target) const
{
    std::vector<Relationship> out;
    for (const auto& [key, rel] : relationships_)
        if (rel.target == target) out.push_back(rel);
    return out;
}

DependencyGraph DependencyGraph::restore(std::vector<Entity> entities, std::vector<Relationship> relationships,
                                         GraphMeta meta)
{
    DependencyGraph graph;
    graph.meta_ = std::move(meta);

    std::map<EntityId, Entity> pending;
    for (auto& e : entities) {
        if (e.id.empty()) throw GraphError(GraphError::Code::Schema, "entity without id");
        if (!pending.emplace(e.id, e).second)
            throw GraphError(GraphError::Code::DuplicateDivergent, "duplicate entity id " + e.id.str());
    }

    // Insert parents before children; a pass that makes no progress means a
    // missing parent or a containment cycle.
    while (!pending.empty()) {
        bool progressed = false;
        for (auto it = pending.begin(); it != pending.end();) {
            const Entity& e = it->second;
            if (e.parent && !graph.contains(*e.parent) && pending.count(*e.parent)) {
                ++it;
                continue;
            }
            check_parent(graph, e);
            graph.entities_.emplace(e.id, e);
            graph.index(e);
            it = pending.erase(it);
            progressed = true;
        }
        if (!progressed)
            throw GraphError(GraphError::Code::Schema, "containment cycle among " + std::to_string(pending.size()) +
                                                           " entities");
    }

    for (auto& rel : relationships) {
        if (!graph.contains(rel.source) || !graph.contains(rel.target))
            throw GraphError(GraphError::Code::Schema, "relationship endpoint missing: " + rel.source.str() + " -> " +
                                                           rel.target.str());
        if (!graph.relationships_.try_emplace(key_of(rel), rel).second)
            throw GraphError(GraphError::Code::Schema, "duplicate relationship " + rel.source.str() + " -> " +
                                                           rel.target.str());
    }
    graph.sealed_ = true;
    return graph;
}

bool DependencyGraph::operator==(const DependencyGraph& other) const
{
    return sealed_ == other.sealed_ && meta_ == other.meta_ && entities_ == other.entities_ &&
           relationships_ == other.relationships_;
}

std::vector<EntityId> ancestors(const DependencyGraph& graph, const EntityId& id)
{
    std::vector<EntityId> chain;
    std::set<EntityId> seen{id};
    const Entity* current = graph.find(id);
    while (current && current->parent) {
        if (!seen.insert(*current->parent).second)
            throw GraphError(GraphError::Code::Schema, "containment cycle through " + current->parent->str());
        chain.push_back(*current->parent);
        current = graph.find(*current->parent);
    }
    return chain;
}

double improvement_ratio(std::size_t size_a, std::size_t size_b)
{
    if (size_a == 0) return size_b == 0 ? 0.0 : 1.0;
    return (static_cast<double>(size_b) - static_cast<double>(size_a)) / static_cast<double>(size_a);
}

double StoreDelta::improvement() const { return improvement_ratio(size_a, size_b); }

long StoreDelta::improvement_percent() const { return std::lround(improvement() * 100.0); }

std::string describe(const DependencyGraph& graph, const Relationship& rel)
{
    auto name_of = [&](const EntityId& id) {
        const Entity* e = graph.find(id);
        return e ? e->name : id.str();
    };
    return name_of(rel.source) + " -> " + name_of(rel.target) + " " + std::string(to_string(rel.kind)) + " @" +
           rel.evidence.location.str();
}

GraphDelta diff(const DependencyGraph& a, const DependencyGraph& b)
{
    GraphDelta delta;
    delta.entities.size_a = a.entity_count();
    delta.entities.size_b = b.entity_count();
    for (const auto& [id, e] : a.entities()) {
        if (b.contains(id))
            ++delta.entities.common;
        else
            delta.entities.only_in_a.push_back(std::string(to_string(e.kind)) + " " + e.name);
    }
    for (const auto& [id, e] : b.entities())
        if (!a.contains(id)) delta.entities.only_in_b.push_back(std::string(to_string(e.kind)) + " " + e.name);

    delta.relationships.size_a = a.relationship_count();
    delta.relationships.size_b = b.relationship_count();
    for (const auto& [key, rel] : a.relationships()) {
        if (b.relationships().count(key))
            ++delta.relationships.common;
        else
            delta.relationships.only_in_a.push_back(describe(a, rel));
    }
    for (const auto& [key, rel] : b.relationships())
        if (!a.relationships().count(key)) delta.relationships.only_in_b.push_back(describe(b, rel));
    return delta;
}

} // namespace jeedep
