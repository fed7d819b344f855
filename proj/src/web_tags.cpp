#include "jeedep/web_tags.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include <json.hpp>

#include "jeedep/url.hpp"

namespace jeedep {

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool tag_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == ':' || c == '_' || c == '-' || c == '.';
}

bool is_dynamic(std::string_view value)
{
    return value.find('\x01') != std::string_view::npos || value.find("<%") != std::string_view::npos ||
           value.find(kHoleMarker) != std::string_view::npos;
}

bool is_el(std::string_view value)
{
    return value.find("${") != std::string_view::npos || value.find("#{") != std::string_view::npos;
}

struct RawAttribute {
    std::string name;  // lower case
    std::string value;
    std::size_t value_offset = 0;  // first character of the value
    std::size_t quote_offset = 0;  // opening quote (== value_offset when unquoted)
};

// Parses "name=value" pairs from `pos` until `end_token`. Returns the offset
// after the tag, or npos when the tag never closes.
std::size_t read_attributes(std::string_view text, std::size_t pos, std::string_view end_token,
                            std::vector<RawAttribute>& out)
{
    auto space = [&](std::size_t i) { return std::isspace(static_cast<unsigned char>(text[i])); };
    std::size_t i = pos;
    while (i < text.size()) {
        while (i < text.size() && space(i)) ++i;
        if (i >= text.size()) break;
        if (text.substr(i, end_token.size()) == end_token) return i + end_token.size();
        if (text[i] == '/' && end_token == ">" && i + 1 < text.size() && text[i + 1] == '>') return i + 2;
        std::size_t name_start = i;
        while (i < text.size() && !space(i) && text[i] != '=' && text[i] != '>' && text[i] != '/' &&
               text.substr(i, end_token.size()) != end_token)
            ++i;
        if (i == name_start) {
            ++i;  // stray character
            continue;
        }
        RawAttribute a;
        a.name = lower(text.substr(name_start, i - name_start));
        std::size_t j = i;
        while (j < text.size() && space(j)) ++j;
        if (j >= text.size() || text[j] != '=') {
            out.push_back(std::move(a));  // boolean attribute
            continue;
        }
        ++j;
        while (j < text.size() && space(j)) ++j;
        if (j >= text.size()) break;
        if (text[j] == '"' || text[j] == '\'') {
            auto close = text.find(text[j], j + 1);
            if (close == std::string_view::npos) return std::string_view::npos;
            a.quote_offset = j;
            a.value_offset = j + 1;
            a.value = std::string(text.substr(j + 1, close - j - 1));
            i = close + 1;
        } else {
            std::size_t v = j;
            while (v < text.size() && !space(v) && text[v] != '>') ++v;
            a.quote_offset = a.value_offset = j;
            a.value = std::string(text.substr(j, v - j));
            i = v;
        }
        out.push_back(std::move(a));
    }
    return std::string_view::npos;
}

struct RawTag {
    std::string name;  // lower case; "%@page" for directives
    std::size_t offset = 0;
    std::vector<RawAttribute> attributes;
};

// Calls `on_tag` for every start tag (and directive) in `text`.
template <typename F>
void for_each_tag(std::string_view text, const TextLocator& locate, Diagnostics& diags, F&& on_tag)
{
    std::size_t pos = 0;
    while ((pos = text.find('<', pos)) != std::string_view::npos) {
        if (text.substr(pos, 4) == "<!--") {
            auto end = text.find("-->", pos + 4);
            if (end == std::string_view::npos) return;
            pos = end + 3;
            continue;
        }
        RawTag tag;
        tag.offset = pos;
        std::size_t i = pos + 1;
        std::string_view end_token = ">";
        if (text.substr(pos, 3) == "<%@") {
            i = pos + 3;
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            std::size_t start = i;
            while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
            tag.name = "%@" + lower(text.substr(start, i - start));
            end_token = "%>";
        } else {
            std::size_t start = i;
            while (i < text.size() && tag_char(text[i])) ++i;
            if (i == start || !std::isalpha(static_cast<unsigned char>(text[start]))) {
                ++pos;
                continue;
            }
            tag.name = lower(text.substr(start, i - start));
        }
        std::size_t end = read_attributes(text, i, end_token, tag.attributes);
        if (end == std::string_view::npos) {
            diags.warn("malformed-markup", "tag <" + tag.name + "> is not closed; skipped",
                       locate.at(pos));
            pos = i;
            continue;
        }
        on_tag(tag);
        pos = end;
    }
}

} // namespace

const std::vector<TagRule>& builtin_tag_rules()
{
    static const std::vector<TagRule> rules = {
        {"form", "action", RelationKind::ForwardsTo},
        {"jsp:include", "page", RelationKind::Includes},
        {"%@include", "file", RelationKind::Includes},
        {"jsp:directive.include", "file", RelationKind::Includes},
        {"jsp:forward", "page", RelationKind::ForwardsTo},
        {"%@page", "errorPage", RelationKind::ErrorPage},
        {"jsp:directive.page", "errorPage", RelationKind::ErrorPage},
        {"a", "href", RelationKind::LinksTo},
        {"c:redirect", "url", RelationKind::ForwardsTo},
        {"c:url", "value", RelationKind::LinksTo},
    };
    return rules;
}

std::vector<TagRule> merge_tag_rules(std::string_view json_text)
{
    std::vector<TagRule> rules = builtin_tag_rules();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("tag rules: ") + e.what());
    }
    if (!doc.is_array()) throw std::invalid_argument("tag rules: expected an array");
    for (const auto& row : doc) {
        if (!row.is_object() || !row.contains("tag") || !row.contains("attribute") || !row.contains("kind") ||
            !row["tag"].is_string() || !row["attribute"].is_string() || !row["kind"].is_string())
            throw std::invalid_argument("tag rules: each row needs string tag, attribute and kind");
        auto kind = parse_relation_kind(row["kind"].get<std::string>());
        if (!kind || *kind == RelationKind::Contains)
            throw std::invalid_argument("tag rules: unknown kind " + row["kind"].get<std::string>());
        TagRule rule{row["tag"].get<std::string>(), row["attribute"].get<std::string>(), *kind};
        auto same = std::find_if(rules.begin(), rules.end(), [&](const TagRule& r) {
            return lower(r.tag) == lower(rule.tag) && lower(r.attribute) == lower(rule.attribute);
        });
        if (same != rules.end())
            same->kind = rule.kind;
        else
            rules.push_back(std::move(rule));
    }
    return rules;
}

std::vector<TagHit> scan_markup(std::string_view text, const SourceLocation& origin, const EntityId& container,
                                std::string_view base, const std::vector<TagRule>& rules, Diagnostics& diags)
{
    std::vector<TagHit> hits;
    const TextLocator locate(text, origin);
    for_each_tag(text, locate, diags, [&](const RawTag& tag) {
        for (const auto& rule : rules) {
            if (lower(rule.tag) != tag.name) continue;
            const std::string attr = lower(rule.attribute);
            for (const auto& a : tag.attributes) {
                if (a.name != attr) continue;
                TagHit hit;
                hit.rule = rule;
                hit.raw = a.value;
                hit.location = locate.at(a.quote_offset);
                hit.container = container;
                hit.base = std::string(base);
                hit.dynamic = is_dynamic(a.value);
                hit.expression_language = !hit.dynamic && is_el(a.value);
                hit.note = rule.tag + " " + rule.attribute;
                if (hit.dynamic)
                    diags.warn("dynamic-url", hit.note + " value is computed at run time; not resolved",
                               hit.location);
                if (tag.name == "form")
                    for (const auto& m : tag.attributes)
                        if (m.name == "method") hit.note += " (method=" + lower(m.value) + ")";
                hits.push_back(std::move(hit));
            }
        }
    });
    return hits;
}

std::vector<TagHit> scan_write_sites(const std::vector<StringWriteSite>& sites, const EntityId& owner,
                                     std::string_view base, Diagnostics& diags)
{
    static const std::vector<TagRule> stream_rules = {builtin_tag_rules()[0], builtin_tag_rules()[7]};
    std::vector<TagHit> hits;
    for (const auto& site : sites) {
        SourceLocation call{site.path, site.pos.line, site.pos.column};
        for_each_tag(site.text, TextLocator(site.text, call), diags, [&](const RawTag& tag) {
            for (const auto& rule : stream_rules) {
                if (rule.tag != tag.name) continue;
                for (const auto& a : tag.attributes) {
                    if (a.name != rule.attribute) continue;
                    TagHit hit;
                    hit.rule = rule;
                    hit.raw = a.value;
                    hit.container = owner;
                    hit.base = std::string(base);
                    hit.note = rule.tag + " " + rule.attribute + " (output stream)";
                    const WriteFragment* frag = site.fragment_at(a.value_offset);
                    if (!frag) frag = site.fragment_at(a.quote_offset);
                    hit.location = frag ? SourceLocation{site.path, frag->pos.line, frag->pos.column} : call;
                    hit.dynamic = is_dynamic(a.value);
                    hit.expression_language = !hit.dynamic && is_el(a.value);
                    if (hit.dynamic)
                        diags.warn("dynamic-url",
                                   rule.tag + " " + rule.attribute + " value is computed at run time; not resolved",
                                   hit.location);
                    hits.push_back(std::move(hit));
                }
            }
        });
    }
    return hits;
}

std::vector<QuotedValue> quoted_attribute_values(std::string_view text, const SourceLocation& origin,
                                                 Diagnostics& diags)
{
    std::vector<QuotedValue> out;
    const TextLocator locate(text, origin);
    for_each_tag(text, locate, diags, [&](const RawTag& tag) {
        for (const auto& a : tag.attributes) {
            if (a.quote_offset == a.value_offset) continue;  // unquoted or boolean
            out.push_back({locate.at(a.quote_offset), locate.at(a.value_offset + a.value.size())});
        }
    });
    return out;
}

void resolve_hits(const std::vector<TagHit>& hits, const UrlMappingTable& mapping, DependencyGraph& graph,
                  Diagnostics& diags)
{
    for (const auto& hit : hits) {
        if (hit.expression_language || hit.dynamic) continue;  // EL analyzer / reported by the scanner
        if (is_external_url(hit.raw)) {
            diags.info("external-url", hit.note + " points outside the application: " + hit.raw, hit.location);
            continue;
        }
        auto path = normalize_url(hit.raw, hit.base);
        if (!path) continue;
        Provenance evidence{Analyzer::TagExtractor, hit.location, hit.note};
        auto target = mapping.lookup(*path);
        if (target && target->entity) {
            graph.add_relationship(Relationship{hit.container, *target->entity, hit.rule.kind, evidence});
            continue;
        }
        const std::string name = target ? target->name : *path;
        diags.warn("unresolved-url", hit.note + " target " + name + " is not in the project", hit.location);
        graph.add_dangling(hit.container, name, hit.rule.kind, evidence);
    }
}

} // namespace jeedep
