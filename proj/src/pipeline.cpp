#include "jeedep/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "jeedep/config.hpp"
#include "jeedep/container_rules.hpp"
#include "jeedep/el.hpp"
#include "jeedep/lowering.hpp"
#include "jeedep/template.hpp"
#include "jeedep/url.hpp"

namespace jeedep {

namespace fs = std::filesystem;

namespace {

enum class FileKind { Source, Template, Html, WebXml, Tld, EjbJar, FacesConfig };

std::optional<FileKind> classify(const fs::path& p)
{
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    const std::string name = p.filename().string();
    if (ext == ".java") return FileKind::Source;
    if (ext == ".jsp" || ext == ".jspf" || ext == ".jspx") return FileKind::Template;
    if (ext == ".html" || ext == ".htm") return FileKind::Html;
    if (ext == ".tld") return FileKind::Tld;
    if (name == "web.xml") return FileKind::WebXml;
    if (name == "ejb-jar.xml") return FileKind::EjbJar;
    if (name == "faces-config.xml") return FileKind::FacesConfig;
    return std::nullopt;
}

struct ProjectFile {
    std::string path;  // project-relative
    FileKind kind;
    std::string text;
};

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 14695981039346656037ull)
{
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::vector<ProjectFile> collect_files(const AnalysisConfig& config, Diagnostics& diags)
{
    std::error_code ec;
    if (!fs::is_directory(config.root, ec)) throw IoError("not a readable directory: " + config.root.string());

    std::optional<fs::path> skip;
    if (config.dump_lowered) skip = fs::weakly_canonical(*config.dump_lowered, ec);

    std::vector<ProjectFile> files;
    fs::recursive_directory_iterator it(config.root, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw IoError("cannot list " + config.root.string() + ": " + ec.message());
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) {
            diags.warn("io-error", "cannot list entry: " + ec.message());
            break;
        }
        const fs::path& p = it->path();
        if (it->is_directory(ec)) {
            const std::string name = p.filename().string();
            if ((!name.empty() && name[0] == '.') || (skip && fs::weakly_canonical(p, ec) == *skip))
                it.disable_recursion_pending();
            continue;
        }
        if (!it->is_regular_file(ec)) continue;
        auto kind = classify(p);
        if (!kind) continue;
        const std::string rel = clean_relative_path(fs::relative(p, config.root, ec).generic_string());
        std::ifstream in(p, std::ios::binary);
        if (!in) {
            diags.warn("io-error", "cannot read file", SourceLocation{rel, 1, 1});
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        files.push_back({rel, *kind, buf.str()});
    }
    std::sort(files.begin(), files.end(), [](const ProjectFile& a, const ProjectFile& b) { return a.path < b.path; });
    return files;
}

// Shallowest directory holding WEB-INF, else the project root.
std::string detect_web_root(const fs::path& root)
{
    std::error_code ec;
    std::optional<std::string> best;
    for (fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec), end;
         it != end; it.increment(ec)) {
        if (ec) break;
        if (!it->is_directory(ec)) continue;
        const std::string name = it->path().filename().string();
        if (!name.empty() && name[0] == '.') {
            it.disable_recursion_pending();
            continue;
        }
        if (name != "WEB-INF") continue;
        std::string dir = clean_relative_path(fs::relative(it->path().parent_path(), root, ec).generic_string());
        auto depth = [](const std::string& s) { return s.empty() ? 0 : std::count(s.begin(), s.end(), '/') + 1; };
        if (!best || depth(dir) < depth(*best) || (depth(dir) == depth(*best) && dir < *best)) best = dir;
        it.disable_recursion_pending();
    }
    return best.value_or("");
}

template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& body)
{
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) body(i);
        });
    for (auto& th : pool) th.join();
}

struct SourceWork {
    const ProjectFile* file = nullptr;
    std::optional<OoCompilationUnit> unit;
    Diagnostics diags;
};

struct PageWork {
    const ProjectFile* file = nullptr;
    std::string web_path;
    std::optional<TemplatePage> page;
    std::optional<LoweredUnit> lowered;
    Diagnostics diags;
};

void parse_source(SourceWork& w)
{
    try {
        w.unit = parse_unit(w.file->text, w.file->path, w.diags);
    } catch (const SyntaxError& e) {
        w.diags.report(Severity::Error, "syntax-error", e.what(),
                       SourceLocation{w.file->path, e.position().line, e.position().column});
    } catch (const std::exception& e) {
        w.diags.report(Severity::Error, "syntax-error", e.what(), SourceLocation{w.file->path, 1, 1});
    }
}

void parse_page(PageWork& w, const ConfigModel& config)
{
    try {
        w.page = parse_template(w.file->text, w.file->path);
    } catch (const UnterminatedConstruct& e) {
        w.diags.report(Severity::Error, "template-error", e.what(), e.location());
        return;
    }
    const auto bindings = taglib_bindings(*w.page);
    LoweringOptions options;
    options.tag_handler = [&](std::string_view prefix, std::string_view name) -> std::optional<std::string> {
        auto it = bindings.find(std::string(prefix));
        if (it == bindings.end()) return std::nullopt;
        const TagLibrary* lib = config.resolve_taglib(it->second, w.web_path);
        const TagSpec* spec = lib ? lib->find(name) : nullptr;
        if (!spec || spec->handler.empty()) return std::nullopt;
        return spec->handler;
    };
    try {
        w.lowered = lower_page(*w.page, w.web_path, w.diags, options);
    } catch (const std::exception& e) {
        w.diags.report(Severity::Error, "lowering-failed", e.what(), SourceLocation{w.file->path, 1, 1});
    }
}

void report_seal(const DependencyGraph& graph, const SealReport& seal, Diagnostics& diags)
{
    for (const auto& rel : seal.dropped)
        diags.warn("unresolved-dropped", "dropped " + describe(graph, rel), rel.evidence.location);
    for (const auto& id : seal.placeholders) {
        const Entity* e = graph.find(id);
        diags.info("unresolved-placeholder", "placeholder for " + (e ? e->name : id.str()));
    }
}

// Pages using a handler, keyed by the handler and each of its project bases.
using HandlerUses = std::map<std::string, std::set<std::pair<EntityId, std::string>>>;

std::string servlet_base(const UrlMappingTable& mapping, const std::string& qualified)
{
    for (const auto& [pattern, target] : mapping.patterns())
        if (target.name == qualified && target.source != UrlTarget::Source::PagePath && !pattern.empty() &&
            pattern[0] == '/' && pattern.find('*') == std::string::npos)
            return pattern;
    return "/";
}

} // namespace

std::string_view to_string(AnalysisMode mode) { return mode == AnalysisMode::Full ? "full" : "baseline"; }

std::optional<AnalysisMode> parse_analysis_mode(std::string_view text)
{
    if (text == "full") return AnalysisMode::Full;
    if (text == "baseline") return AnalysisMode::Baseline;
    return std::nullopt;
}

std::string project_hash(const std::vector<std::pair<std::string, std::string>>& files)
{
    auto sorted = files;
    std::sort(sorted.begin(), sorted.end());
    std::uint64_t h = fnv1a("");
    for (const auto& [path, content] : sorted) {
        h = fnv1a(path, h);
        h = fnv1a(std::string_view("\x1f", 1), h);
        h = fnv1a(hex(fnv1a(content)), h);
        h = fnv1a(std::string_view("\x1e", 1), h);
    }
    return hex(h);
}

AnalysisResult analyze(const AnalysisConfig& config)
{
    AnalysisResult result;
    result.mode = config.mode;
    Diagnostics& diags = result.diagnostics;
    DependencyGraph& graph = result.graph;
    const bool full = config.mode == AnalysisMode::Full;

    const std::vector<ProjectFile> files = collect_files(config, diags);
    result.web_root = config.web_root ? clean_relative_path(*config.web_root) : detect_web_root(config.root);
    {
        std::vector<std::pair<std::string, std::string>> hashed;
        for (const auto& f : files) hashed.emplace_back(f.path, f.text);
        graph.set_meta(GraphMeta{std::string(kToolVersion), project_hash(hashed)});
    }

    // Descriptors first: lowering needs the tag handlers they declare.
    ConfigModel model;
    for (const auto& f : files) {
        try {
            switch (f.kind) {
            case FileKind::WebXml: model.web_xmls.push_back(parse_web_xml(f.text, f.path, graph, diags)); break;
            case FileKind::Tld: {
                TagLibrary lib = parse_tld(f.text, f.path, graph, diags);
                lib.web_path = web_path_of(f.path, result.web_root);
                model.libraries.push_back(std::move(lib));
                break;
            }
            case FileKind::EjbJar: model.ejb_classes.merge(parse_ejb_jar(f.text, f.path, graph, diags)); break;
            case FileKind::FacesConfig: model.beans.merge(parse_faces_config(f.text, f.path, graph, diags)); break;
            default: break;
            }
        } catch (const XmlError& e) {
            diags.report(Severity::Error, "xml-error", e.what(), e.location());
        }
    }

    std::vector<SourceWork> sources;
    std::vector<PageWork> pages;
    std::vector<const ProjectFile*> html;
    for (const auto& f : files) {
        if (f.kind == FileKind::Source) {
            sources.emplace_back().file = &f;
        } else if (full && f.kind == FileKind::Template) {
            auto& w = pages.emplace_back();
            w.file = &f;
            w.web_path = web_path_of(f.path, result.web_root);
        } else if (full && f.kind == FileKind::Html) {
            html.push_back(&f);
        }
    }
    parallel_for(sources.size() + pages.size(), config.threads, [&](std::size_t i) {
        if (i < sources.size())
            parse_source(sources[i]);
        else
            parse_page(pages[i - sources.size()], model);
    });
    for (auto& w : sources) diags.append(w.diags);
    for (auto& w : pages) diags.append(w.diags);

    // From here on the lowered units stay put; contexts point into them.
    std::vector<LoweredUnit> lowered;
    lowered.reserve(pages.size());
    std::vector<const PageWork*> lowered_from;
    for (auto& w : pages)
        if (w.lowered) {
            lowered.push_back(std::move(*w.lowered));
            lowered_from.push_back(&w);
        }
    for (auto& l : lowered) l.bind();

    std::vector<OoUnitInput> inputs;
    for (const auto& w : sources)
        if (w.unit) inputs.push_back({&*w.unit, nullptr});
    for (const auto& l : lowered) inputs.push_back({&l.unit, &l.context});
    ProjectIndex index(inputs);

    std::vector<PageRef> page_refs;
    for (const auto& w : pages) {
        EntityId id = graph.add_entity(server_page_entity(w.file->path, w.web_path));
        page_refs.push_back({w.web_path, id});
    }
    for (const auto& l : lowered) register_page(graph, l);
    std::vector<std::pair<const ProjectFile*, EntityId>> html_ids;
    for (const auto* f : html) {
        const std::string web = web_path_of(f->path, result.web_root);
        EntityId id = graph.add_entity(make_entity(EntityKind::HtmlPage, web, f->path, SourceLocation{f->path, 1, 1}));
        page_refs.push_back({web, id});
        html_ids.emplace_back(f, id);
    }

    OoOptions oo;
    oo.externals = config.externals;
    extract_oo_graph(inputs, index, graph, oo, diags);

    if (full) {
        model.annotations = collect_annotations(index, diags);
        for (const auto& [name, cls] : model.annotations.named_beans) model.beans.emplace(name, cls);
        const UrlMappingTable mapping = build_mapping(model, index, page_refs, diags);

        // Container services.
        std::vector<TagUse> uses;
        for (const auto& w : pages) {
            if (!w.page) continue;
            auto found = find_tag_uses(*w.page, server_page_entity(w.file->path, w.web_path).id, w.web_path, model,
                                       diags);
            uses.insert(uses.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
        }
        HandlerUses handler_uses;
        for (const auto& use : uses) {
            emit_tag_lifecycle_edges(use, index, graph, diags);
            for (const auto* cls : index.chain(use.spec->handler))
                handler_uses[cls->qualified].emplace(use.page, use.web_path);
        }
        std::vector<EntityId> lowered_pages;
        for (const auto& l : lowered) lowered_pages.push_back(l.page);
        emit_servlet_lifecycle_edges(index, model, lowered_pages, graph, diags);
        emit_ejb_lifecycle_edges(index, model, graph, diags);
        emit_jndi_edges(index, model, graph, diags);

        // Markup tags and output-stream literals.
        std::vector<TagHit> hits;
        auto add_hits = [&](std::vector<TagHit>&& more) {
            hits.insert(hits.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
        };
        for (const auto& w : pages) {
            if (!w.page) continue;
            add_hits(scan_markup(w.page->masked_text(), SourceLocation{w.file->path, 1, 1},
                                 server_page_entity(w.file->path, w.web_path).id, w.web_path, config.tag_rules, diags));
        }
        for (const auto& [f, id] : html_ids)
            add_hits(scan_markup(f->text, SourceLocation{f->path, 1, 1}, id, web_path_of(f->path, result.web_root),
                                 config.tag_rules, diags));
        for (const auto& w : sources) {
            if (!w.unit) continue;
            for (const auto& site : collect_string_writes(*w.unit)) {
                const auto* cls = index.find_class(site.class_name);
                if (!cls || cls->unit != &*w.unit) continue;
                if (index.inherits_from(cls->qualified, tag_handler_bases())) {
                    auto used = handler_uses.find(cls->qualified);
                    if (used != handler_uses.end()) {
                        for (const auto& [page, web] : used->second) add_hits(scan_write_sites({site}, page, web, diags));
                        continue;
                    }
                    add_hits(scan_write_sites({site}, cls->id, "/", diags));
                    continue;
                }
                EntityId owner = cls->id;
                for (const auto& m : cls->decl->methods)
                    if (m.name == site.method_name && m.arity() == site.method_arity) {
                        owner = index.method_id(*cls, m);
                        break;
                    }
                add_hits(scan_write_sites({site}, owner, servlet_base(mapping, cls->qualified), diags));
            }
        }
        resolve_hits(hits, mapping, graph, diags);

        // Expression language.
        for (std::size_t i = 0; i < lowered.size(); ++i) {
            const PageWork& w = *lowered_from[i];
            BeanScope scope;
            for (const auto& [name, cls] : model.beans)
                if (index.find_class(cls)) scope[name] = cls;
            for (const auto& node : w.page->nodes) {
                if (node.kind != TemplateNodeKind::UseBean || node.closing) continue;
                const auto* id = node.attribute("id");
                const auto* cls = node.attribute("class");
                if (!cls) cls = node.attribute("type");
                if (!id || !cls) continue;
                if (auto q = index.resolve_type(cls->value, lowered[i].unit, nullptr)) scope[id->value] = *q;
                else scope[id->value] = cls->value;
            }
            for (const auto& site : find_el(w.page->masked_text(), SourceLocation{w.file->path, 1, 1}, diags))
                resolve_el(site, scope, index, lowered[i].page, graph, diags);
        }
    }

    result.seal = graph.seal(config.unresolved);
    report_seal(graph, result.seal, diags);

    if (full) {
        std::vector<LiteralSite> literals = source_literals(index);
        for (const auto& w : pages) {
            if (!w.page) continue;
            for (const auto& q : quoted_attribute_values(w.page->masked_text(), SourceLocation{w.file->path, 1, 1},
                                                         result.diagnostics))
                literals.push_back({LiteralKind::Attribute, q.open, q.close});
        }
        Diagnostics ignored;  // malformed markup was already reported by the tag scan
        for (const auto& [f, id] : html_ids)
            for (const auto& q : quoted_attribute_values(f->text, SourceLocation{f->path, 1, 1}, ignored))
                literals.push_back({LiteralKind::Attribute, q.open, q.close});
        result.literals = classify_literals(literals, graph);
    }

    result.pages.server_pages = pages.size();
    result.pages.html_pages = html.size();
    for (const auto& w : pages)
        if (w.page && w.page->multilanguage()) {
            ++result.pages.multilanguage;
            result.multilanguage_pages.push_back(w.web_path);
        }

    if (config.dump_lowered) {
        std::error_code ec;
        fs::create_directories(*config.dump_lowered, ec);
        for (const auto& l : lowered) {
            std::ofstream out(*config.dump_lowered / (l.class_name + ".java"), std::ios::binary);
            if (!out) {
                diags.warn("io-error", "cannot write lowered source for " + l.web_path);
                continue;
            }
            out << l.source;
        }
    }
    return result;
}

std::string report_json(const AnalysisResult& r)
{
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["tool_version"] = kToolVersion;
    doc["mode"] = to_string(r.mode);
    doc["project_root_hash"] = r.graph.meta().project_root_hash;
    doc["web_root"] = r.web_root;

    std::map<std::string, std::size_t> entity_kinds;
    std::map<std::string, std::size_t> relation_kinds;
    for (const auto& [id, e] : r.graph.entities()) ++entity_kinds[std::string(to_string(e.kind))];
    for (const auto& [key, rel] : r.graph.relationships()) ++relation_kinds[std::string(to_string(rel.kind))];
    doc["counts"] = {{"entities", r.graph.entity_count()},
                     {"relationships", r.graph.relationship_count()},
                     {"entities_by_kind", entity_kinds},
                     {"relationships_by_kind", relation_kinds}};

    doc["pages"] = {{"server_pages", r.pages.server_pages},
                    {"html_pages", r.pages.html_pages},
                    {"multilanguage", r.pages.multilanguage},
                    {"multilanguage_ratio", format_ratio(r.pages.multilanguage, r.pages.total())},
                    {"multilanguage_pages", r.multilanguage_pages}};

    auto counts = [](const LiteralCounts& c) {
        return ordered_json{{"total", c.total}, {"dependency_bearing", c.bearing},
                            {"ratio", format_ratio(c.bearing, c.total)}};
    };
    ordered_json literals = counts(r.literals.all);
    literals["by_kind"] = ordered_json::object();
    for (const auto& [k, c] : r.literals.by_kind) literals["by_kind"][k] = counts(c);
    literals["by_file"] = ordered_json::object();
    for (const auto& [f, c] : r.literals.by_file) literals["by_file"][f] = counts(c);
    doc["literals"] = literals;

    doc["seal"] = {{"unresolved", r.seal.unresolved},
                   {"dropped", r.seal.dropped.size()},
                   {"placeholders", r.seal.placeholders.size()}};

    ordered_json diags = ordered_json::array();
    for (const auto& d : r.diagnostics.sorted()) {
        ordered_json item = {{"severity", to_string(d.severity)}, {"code", d.code}, {"message", d.message}};
        if (!d.location.path.empty() || d.location != SourceLocation{})
            item["location"] = {{"path", d.location.path}, {"line", d.location.line}, {"column", d.location.column}};
        diags.push_back(std::move(item));
    }
    doc["diagnostics"] = std::move(diags);
    return doc.dump(2) + "\n";
}

std::string report_summary(const AnalysisResult& r)
{
    std::size_t warnings = 0;
    for (const auto& d : r.diagnostics.all())
        if (d.severity != Severity::Info) ++warnings;
    std::ostringstream out;
    out << "mode=" << to_string(r.mode) << " entities=" << r.graph.entity_count()
        << " relationships=" << r.graph.relationship_count() << " pages=" << r.pages.total()
        << " multilanguage=" << format_ratio(r.pages.multilanguage, r.pages.total())
        << " literals=" << format_ratio(r.literals.all.bearing, r.literals.all.total)
        << " diagnostics=" << r.diagnostics.size() << " (" << warnings << " warnings/errors)";
    return out.str();
}

} // namespace jeedep
