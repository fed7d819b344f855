#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jeedep/diagnostics.hpp"
#include "jeedep/graph.hpp"
#include "jeedep/oo_frontend.hpp"

namespace jeedep {

class XmlError : public std::runtime_error {
public:
    XmlError(const std::string& what, SourceLocation where)
        : std::runtime_error(what), location_(std::move(where))
    {
    }
    const SourceLocation& location() const { return location_; }

private:
    SourceLocation location_;
};

struct TagAttributeSpec {
    std::string name;
    bool required = false;
};

struct TagSpec {
    std::string name;
    std::string handler;  // dotted class name
    std::vector<TagAttributeSpec> attributes;
    SourceLocation location;  // the <tag> element
    EntityId definition;      // TagDefinition entity

    const TagAttributeSpec* attribute(std::string_view name) const;
};

struct TagLibrary {
    std::string path;      // project-relative
    std::string web_path;  // "/WEB-INF/tlds/x.tld" when under the web root, else empty
    std::string uri;       // <uri>, may be empty
    std::vector<TagSpec> tags;
    EntityId config;

    const TagSpec* find(std::string_view tag) const;
};

struct ServletDecl {
    std::string name;
    std::string class_name;  // servlet-class, or empty
    std::string jsp_file;    // jsp-file, or empty
    SourceLocation location;
};

struct ServletMappingDecl {
    std::string pattern;
    std::string servlet;
    SourceLocation location;  // the url-pattern value
};

struct EjbRefDecl {
    std::string name;  // "ejb/Hello"
    std::string link;  // ejb-link, may be empty
    std::string type;  // remote/local interface or home, may be empty
};

struct WebXml {
    std::string path;
    EntityId config;
    std::vector<ServletDecl> servlets;
    std::vector<ServletMappingDecl> mappings;
    std::vector<std::string> welcome_files;
    std::map<std::string, std::string> taglib_locations;  // taglib-uri -> taglib-location
    std::vector<EjbRefDecl> ejb_refs;
};

// ConfigFile entity for a descriptor.
Entity config_file_entity(std::string_view path);

// Each parser adds the ConfigFile entity (also when parsing then fails with
// XmlError).
WebXml parse_web_xml(std::string_view text, std::string_view path, DependencyGraph& graph, Diagnostics& diags);
TagLibrary parse_tld(std::string_view text, std::string_view path, DependencyGraph& graph, Diagnostics& diags);
// ejb-name -> ejb-class.
std::map<std::string, std::string> parse_ejb_jar(std::string_view text, std::string_view path,
                                                 DependencyGraph& graph, Diagnostics& diags);
// managed-bean-name -> managed-bean-class.
std::map<std::string, std::string> parse_faces_config(std::string_view text, std::string_view path,
                                                      DependencyGraph& graph, Diagnostics& diags);

struct AnnotatedServlet {
    std::string pattern;
    std::string class_name;  // qualified
    SourceLocation location;
};

struct AnnotationFacts {
    std::vector<AnnotatedServlet> url_patterns;
    std::set<std::string> servlet_classes;            // carry the web-servlet annotation
    std::map<std::string, std::string> ejb_names;     // bean name -> class
    std::map<std::string, std::string> named_beans;   // EL name -> class
};

AnnotationFacts collect_annotations(const ProjectIndex& index, Diagnostics& diags);

// What a URL resolves to.
struct UrlTarget {
    enum class Source { Descriptor, Annotation, PagePath };
    std::string name;                // class or web path
    std::optional<EntityId> entity;  // absent when the class is not in the project
    Source source = Source::PagePath;
    std::string pattern;             // the pattern that matched
};

class UrlMappingTable {
public:
    // Adds a pattern; returns false (and keeps the existing entry) when the
    // pattern is already present.
    bool add(const std::string& pattern, UrlTarget target);
    void set_welcome_files(std::vector<std::string> files) { welcome_ = std::move(files); }

    // Looks up a normalized path ("/dir/x.jsp"). Precedence: exact pattern,
    // then the longest "/prefix/*", then "*.ext"; a path ending in '/' tries
    // the welcome files; "/" as a pattern is the final fallback.
    std::optional<UrlTarget> lookup(std::string_view path) const;

    const std::map<std::string, UrlTarget>& patterns() const { return patterns_; }

    // (taglib uri or TLD web path, tag name) -> spec
    std::map<std::pair<std::string, std::string>, TagSpec> tag_to_handler;

private:
    std::optional<UrlTarget> match(std::string_view path) const;

    std::map<std::string, UrlTarget> patterns_;
    std::vector<std::string> welcome_;
};

struct PageRef {
    std::string web_path;
    EntityId entity;
};

// Everything read from descriptors and annotations.
struct ConfigModel {
    std::vector<WebXml> web_xmls;
    std::vector<TagLibrary> libraries;
    std::map<std::string, std::string> ejb_classes;  // ejb-name -> class (descriptor)
    std::map<std::string, std::string> beans;        // EL-visible bean name -> class
    AnnotationFacts annotations;

    // Binds a taglib directive uri (as written in `page_web_path`) to a TLD:
    // the TLD's <uri>, then a web.xml taglib-location, then the TLD path.
    const TagLibrary* resolve_taglib(std::string_view uri, std::string_view page_web_path) const;
    // Servlet classes declared in any web.xml.
    std::set<std::string> descriptor_servlets() const;
};

// Merges descriptor mappings, annotation mappings and page paths.
// Descriptor entries win over annotations (with a diagnostic).
UrlMappingTable build_mapping(const ConfigModel& config, const ProjectIndex& index, const std::vector<PageRef>& pages,
                              Diagnostics& diags);

} // namespace jeedep
