#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jeedep/diagnostics.hpp"
#include "jeedep/graph.hpp"
#include "jeedep/java_ast.hpp"
#include "jeedep/origin.hpp"

namespace jeedep {

// Parses a Java compilation unit restricted to the supported subset.
// Unsupported statements inside method bodies are skipped one statement at a
// time with an "unsupported-statement" diagnostic. Throws SyntaxError when
// the class/method structure itself is malformed, or when there is no type.
OoCompilationUnit parse_unit(std::string_view source, std::string_view path, Diagnostics& diags);

// Marker standing for a non-literal fragment of a concatenated write argument.
inline constexpr std::string_view kHoleMarker = "\xE2\x9F\xA8hole\xE2\x9F\xA9";  // ⟨hole⟩

struct WriteFragment {
    bool hole = false;
    std::string text;  // decoded literal text; empty for holes
    Position pos;      // literal: opening quote; hole: start of the expression
};

// A write to the response output stream whose argument contains at least one
// string literal.
struct StringWriteSite {
    std::string path;
    std::string class_name;  // qualified
    std::string method_name;
    std::size_t method_arity = 0;
    std::string text;  // literals joined, non-literal runs replaced by kHoleMarker
    std::vector<WriteFragment> fragments;
    Position pos;  // the call

    bool has_hole() const;
    // The literal fragment covering byte `offset` of `text`, if any.
    const WriteFragment* fragment_at(std::size_t offset) const;
};

std::vector<StringWriteSite> collect_string_writes(const OoCompilationUnit& unit);

// Type names treated as response writers when a receiver is declared with them.
bool is_writer_type(std::string_view type_name);

enum class ExternalPolicy { Ignore, Placeholder };

struct OoOptions {
    ExternalPolicy externals = ExternalPolicy::Ignore;
};

// A parsed unit plus, for lowered pages, the context that re-attributes its
// edges to the page.
struct OoUnitInput {
    const OoCompilationUnit* unit = nullptr;
    const SyntheticContext* synthetic = nullptr;
};

std::string method_entity_name(std::string_view class_name, std::string_view method, std::size_t arity);
std::string field_entity_name(std::string_view class_name, std::string_view field);

// Project-wide symbol table over parsed classes.
class ProjectIndex {
public:
    struct ClassInfo {
        std::string qualified;
        const ClassDecl* decl = nullptr;
        const OoCompilationUnit* unit = nullptr;
        const SyntheticContext* synthetic = nullptr;
        std::string defining_path;
        EntityId id;
    };

    struct MethodRef {
        const ClassInfo* owner = nullptr;
        const MethodDecl* method = nullptr;
        EntityId id;
    };

    struct FieldRef {
        const ClassInfo* owner = nullptr;
        const FieldDecl* field = nullptr;
        EntityId id;
    };

    explicit ProjectIndex(std::span<const OoUnitInput> inputs);

    const ClassInfo* find_class(std::string_view qualified) const;
    const std::map<std::string, ClassInfo>& classes() const { return classes_; }

    // Resolves a type name as written in `unit` (within `context`, may be
    // null) to a project class. Generic arguments and array suffixes are
    // ignored.
    std::optional<std::string> resolve_type(std::string_view name, const OoCompilationUnit& unit,
                                            const ClassInfo* context) const;

    // Methods named `name` with `arity` parameters, searching the class and
    // then its project superclasses; the nearest class with a match wins.
    std::vector<MethodRef> find_methods(std::string_view qualified, std::string_view name, std::size_t arity) const;
    // Every non-synthetic project method with that name and arity.
    std::vector<MethodRef> methods_named(std::string_view name, std::size_t arity) const;
    std::optional<FieldRef> find_field(std::string_view qualified, std::string_view name) const;

    // Project superclass chain starting at `qualified` itself.
    std::vector<const ClassInfo*> chain(std::string_view qualified) const;
    // True when the class or a project ancestor names any of `bases` (by
    // simple name) as superclass or interface.
    bool inherits_from(std::string_view qualified, const std::set<std::string, std::less<>>& bases) const;
    // First non-project type reached when walking superclasses, if any.
    std::optional<std::string> external_base(std::string_view qualified) const;

    // "pkg.Class.m/N"; same-arity overloads within one class are spelled with
    // their erased parameter types instead, "pkg.Class.m(int,String)".
    std::string method_name(const ClassInfo& owner, const MethodDecl& method) const;
    EntityId method_id(const ClassInfo& owner, const MethodDecl& method) const;
    EntityId field_id(const ClassInfo& owner, const FieldDecl& field) const;

    // Maps a position in `cls` to a project location (template location for
    // lowered units).
    SourceLocation locate(const ClassInfo& cls, Position pos) const;

private:
    const ClassInfo* outer_of(const ClassInfo& cls) const;

    std::map<std::string, ClassInfo> classes_;
};

// Adds Package/ClassUnit/MethodUnit/FieldUnit entities for one class. For
// lowered pages the class is parented by the page entity and marked
// synthetic. Idempotent.
void add_class_entities(const ProjectIndex& index, const ProjectIndex::ClassInfo& cls, DependencyGraph& graph);

// Adds entities for every unit plus Extends, Implements, Calls,
// Instantiates and AccessesField edges. Edges from lowered units are emitted
// from the page entity with template locations; statements that came from
// custom-tag lowering are left to the container rules.
void extract_oo_graph(std::span<const OoUnitInput> inputs, const ProjectIndex& index, DependencyGraph& graph,
                      const OoOptions& options, Diagnostics& diags);

// Simple helpers shared by analyzers.
std::string simple_type_name(std::string_view type_name);
std::string erase_type(std::string_view type_name);  // drops generics and array suffixes

} // namespace jeedep
