#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jeedep/location.hpp"

namespace jeedep {

enum class EntityKind {
    Package,
    ClassUnit,
    MethodUnit,
    FieldUnit,
    ServerPage,
    ConfigFile,
    TagDefinition,
    HtmlPage,
    Container,         // pseudo-entity for a runtime container (web, ejb)
    UnresolvedTarget,  // placeholder for a dependency target that could not be found
};

enum class RelationKind {
    Contains,
    Calls,
    Instantiates,
    Extends,
    Implements,
    AccessesField,
    Includes,
    ForwardsTo,
    LinksTo,
    ErrorPage,
    LifecycleCallback,
    AttributeSetter,
    ElAccess,
    JndiLookup,
};

enum class Analyzer { OoFrontend, JspLowering, TagExtractor, ContainerRules, LiteralEl, ConfigLayer };

std::string_view to_string(EntityKind kind);
std::string_view to_string(RelationKind kind);
std::string_view to_string(Analyzer analyzer);
std::optional<EntityKind> parse_entity_kind(std::string_view text);
std::optional<RelationKind> parse_relation_kind(std::string_view text);
std::optional<Analyzer> parse_analyzer(std::string_view text);

// Content-derived identifier: a hash of (kind, qualified name, defining path).
class EntityId {
public:
    EntityId() = default;
    explicit EntityId(std::string value) : value_(std::move(value)) {}

    static EntityId derive(EntityKind kind, std::string_view name, std::string_view defining_path);

    const std::string& str() const { return value_; }
    bool empty() const { return value_.empty(); }

    auto operator<=>(const EntityId&) const = default;
    bool operator==(const EntityId&) const = default;

private:
    std::string value_;
};

struct Entity {
    EntityId id;
    EntityKind kind = EntityKind::Package;
    std::string name;
    std::optional<EntityId> parent;
    SourceLocation location;
    bool synthetic = false;

    bool operator==(const Entity&) const = default;
};

// Builds an entity whose id is derived from kind, name and defining path.
// Packages, containers and placeholders pass an empty defining path.
Entity make_entity(EntityKind kind, std::string name, std::string_view defining_path, SourceLocation location,
                   std::optional<EntityId> parent = std::nullopt, bool synthetic = false);

struct Provenance {
    Analyzer analyzer = Analyzer::OoFrontend;
    SourceLocation location;
    std::string note;

    bool operator==(const Provenance&) const = default;
};

struct Relationship {
    EntityId source;
    EntityId target;
    RelationKind kind = RelationKind::Calls;
    Provenance evidence;

    bool operator==(const Relationship&) const = default;
};

// Identity of an edge. Two relationships with equal keys are the same edge.
struct RelationshipKey {
    EntityId source;
    EntityId target;
    RelationKind kind;
    SourceLocation location;

    auto operator<=>(const RelationshipKey&) const = default;
    bool operator==(const RelationshipKey&) const = default;
};

RelationshipKey key_of(const Relationship& rel);

enum class UnresolvedPolicy { Drop, Placeholder };

struct SealReport {
    std::size_t unresolved = 0;              // edges that had a missing endpoint
    std::vector<Relationship> dropped;       // removed under the drop policy
    std::vector<EntityId> placeholders;      // UnresolvedTarget entities created
};

struct GraphMeta {
    std::string tool_version;
    std::string project_root_hash;

    bool operator==(const GraphMeta&) const = default;
};

class GraphError : public std::runtime_error {
public:
    enum class Code { DuplicateDivergent, ParentMissing, KindViolation, Sealed, AlreadySealed, NotSealed, Schema, Io };

    GraphError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

// The dependency model: entity store, relationship store and containment.
// Mutation is single-writer; once sealed the graph is read-only.
class DependencyGraph {
public:
    using EntityMap = std::map<EntityId, Entity>;
    using RelationshipMap = std::map<RelationshipKey, Relationship>;

    // Adds an entity (and the Contains edge from its parent). Re-adding an
    // identical entity returns the existing id.
    EntityId add_entity(const Entity& entity);
    // Same, with an explicit analyzer recorded on the Contains edge.
    EntityId add_entity(const Entity& entity, Analyzer contains_by);

    // Records an edge; duplicates (same key) collapse to the first one.
    // Endpoints are checked at seal time.
    void add_relationship(const Relationship& rel);

    // Records an edge to a target that is known only by name. If no entity
    // with the derived placeholder id exists at seal time, the unresolved
    // policy applies and the placeholder carries `target_name`.
    EntityId add_dangling(const EntityId& source, std::string_view target_name, RelationKind kind, Provenance evidence);

    SealReport seal(UnresolvedPolicy policy = UnresolvedPolicy::Placeholder);
    bool sealed() const { return sealed_; }

    const Entity* find(const EntityId& id) const;
    bool contains(const EntityId& id) const { return entities_.count(id) != 0; }
    // All entities of `kind` named `name`, in id order.
    std::vector<EntityId> lookup(EntityKind kind, std::string_view name) const;
    std::optional<EntityId> lookup_one(EntityKind kind, std::string_view name) const;

    const EntityMap& entities() const { return entities_; }
    const RelationshipMap& relationships() const { return relationships_; }
    std::vector<Relationship> relationships_of_kind(RelationKind kind) const;
    std::vector<Relationship> outgoing(const EntityId& source) const;
    std::vector<Relationship> incoming(const EntityId& target) const;

    std::size_t entity_count() const { return entities_.size(); }
    std::size_t relationship_count() const { return relationships_.size(); }

    const GraphMeta& meta() const { return meta_; }
    void set_meta(GraphMeta meta) { meta_ = std::move(meta); }

    // Rebuilds a sealed graph from stored parts, validating every invariant
    // the builder enforces. Used by deserialization.
    static DependencyGraph restore(std::vector<Entity> entities, std::vector<Relationship> relationships,
                                   GraphMeta meta);

    bool operator==(const DependencyGraph& other) const;

private:
    void require_unsealed() const;
    void index(const Entity& entity);

    EntityMap entities_;
    RelationshipMap relationships_;
    std::map<std::pair<EntityKind, std::string>, std::set<EntityId>> by_name_;
    std::map<EntityId, std::string> dangling_names_;
    GraphMeta meta_;
    bool sealed_ = false;
};

// Entity ids along the parent chain, nearest first. Throws GraphError if the
// chain revisits an entity.
std::vector<EntityId> ancestors(const DependencyGraph& graph, const EntityId& id);

struct StoreDelta {
    std::size_t size_a = 0;
    std::size_t size_b = 0;
    std::size_t common = 0;
    std::vector<std::string> only_in_a;
    std::vector<std::string> only_in_b;

    // (|b| - |a|) / |a|; when |a| is zero the ratio is 1 if b is non-empty.
    double improvement() const;
    long improvement_percent() const;
    bool empty() const { return only_in_a.empty() && only_in_b.empty(); }
};

struct GraphDelta {
    StoreDelta entities;
    StoreDelta relationships;

    bool empty() const { return entities.empty() && relationships.empty(); }
};

double improvement_ratio(std::size_t size_a, std::size_t size_b);

GraphDelta diff(const DependencyGraph& a, const DependencyGraph& b);

// "source -> target Kind @path:line:col" using entity names where known.
std::string describe(const DependencyGraph& graph, const Relationship& rel);

} // namespace jeedep
