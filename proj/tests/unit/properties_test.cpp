// Invariants checked over generated inputs and every fixture.

#include <random>

#include <doctest.h>

#include "jeedep/container_rules.hpp"
#include "jeedep/el.hpp"
#include "jeedep/lowering.hpp"
#include "jeedep/serialize.hpp"
#include "jeedep/url.hpp"
#include "support.hpp"

using namespace jeedep;

namespace {

const std::vector<std::string> kFixtures = {
    "motivating", "blog/site", "shop", "powers_of_two",
    "tag_table/form_action", "tag_table/jsp_include_page", "tag_table/include_directive_file",
    "tag_table/jsp_directive_include_file", "tag_table/jsp_forward_page", "tag_table/page_directive_error_page",
    "tag_table/jsp_directive_page_error_page", "tag_table/a_href", "tag_table/c_redirect_url", "tag_table/c_url_value",
};

std::string random_text(std::mt19937& rng, std::string_view alphabet, int max_len)
{
    std::string out;
    auto len = std::uniform_int_distribution<int>(0, max_len)(rng);
    for (int i = 0; i < len; ++i) out += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    return out;
}

// A random but well-formed graph: packages, classes, methods and edges
// among them, some dangling.
DependencyGraph random_graph(std::mt19937& rng)
{
    DependencyGraph g;
    std::vector<EntityId> members;
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    for (int p = 0; p < 3; ++p) {
        auto pkg = make_entity(EntityKind::Package, "p" + std::to_string(p), "", {"src/p" + std::to_string(p), 1, 1});
        g.add_entity(pkg);
        for (int c = 0; c < 3; ++c) {
            std::string cname = pkg.name + ".C" + std::to_string(c);
            std::string file = "src/" + pkg.name + "/C" + std::to_string(c) + ".java";
            auto cls = make_entity(EntityKind::ClassUnit, cname, file, {file, 1, 1}, pkg.id);
            g.add_entity(cls);
            members.push_back(cls.id);
            for (int m = 0; m < 3; ++m) {
                auto meth = make_entity(EntityKind::MethodUnit, cname + ".m" + std::to_string(m) + "/0", file,
                                        {file, 2 + m, 5}, cls.id);
                g.add_entity(meth);
                members.push_back(meth.id);
            }
        }
    }
    const RelationKind kinds[] = {RelationKind::Calls, RelationKind::Instantiates, RelationKind::AccessesField,
                                  RelationKind::LinksTo};
    for (int i = 0; i < 60; ++i) {
        Provenance at{Analyzer::OoFrontend, {"src/x.java", int(pick(50)) + 1, int(pick(20)) + 1}, {}};
        if (pick(10) == 0)
            g.add_dangling(members[pick(members.size())], "/missing" + std::to_string(pick(3)) + ".jsp",
                           RelationKind::LinksTo, at);
        else
            g.add_relationship({members[pick(members.size())], members[pick(members.size())], kinds[pick(4)], at});
    }
    return g;
}

void check_sealed_invariants(const DependencyGraph& g)
{
    for (const auto& [key, rel] : g.relationships()) {
        CHECK(g.contains(rel.source));
        CHECK(g.contains(rel.target));
    }
    for (const auto& [id, e] : g.entities()) {
        CHECK_NOTHROW(ancestors(g, id));
        auto chain = ancestors(g, id);
        if (!chain.empty()) CHECK_FALSE(g.find(chain.back())->parent);
        if (e.kind == EntityKind::MethodUnit || e.kind == EntityKind::FieldUnit)
            CHECK(g.find(*e.parent)->kind == EntityKind::ClassUnit);
        if (e.kind == EntityKind::TagDefinition) CHECK(g.find(*e.parent)->kind == EntityKind::ConfigFile);
    }
}

} // namespace

TEST_SUITE("properties")
{
    TEST_CASE("fixtures: determinism, closure, acyclicity, round trip")
    {
        for (const auto& name : kFixtures) {
            CAPTURE(name);
            auto a = test::run(name);
            auto b = test::run(name);
            auto ja = serialize(a.graph, GraphFormat::Json);
            CHECK(ja == serialize(b.graph, GraphFormat::Json));
            CHECK(serialize(a.graph, GraphFormat::Dot) == serialize(b.graph, GraphFormat::Dot));
            CHECK(serialize(a.graph, GraphFormat::GraphMl) == serialize(b.graph, GraphFormat::GraphMl));
            CHECK(report_json(a) == report_json(b));
            check_sealed_invariants(a.graph);
            CHECK(deserialize_json(ja) == a.graph);
        }
    }

    TEST_CASE("fixtures: full mode strictly contains baseline")
    {
        for (const auto& name : kFixtures) {
            CAPTURE(name);
            auto full = test::run(name);
            auto base = test::run(name, AnalysisMode::Baseline);
            auto d = diff(base.graph, full.graph);
            CHECK(d.entities.only_in_a.empty());
            CHECK(d.relationships.only_in_a.empty());
            CHECK(full.graph.relationship_count() > base.graph.relationship_count());
        }
    }

    TEST_CASE("template-only project: baseline sees only configuration")
    {
        auto base = test::run("blog/site", AnalysisMode::Baseline);
        for (const auto& [id, e] : base.graph.entities()) CHECK(e.kind == EntityKind::ConfigFile);
        CHECK(base.graph.entity_count() == 0);
    }

    TEST_CASE("random graphs: seal closure and round trip")
    {
        std::mt19937 rng(7);
        for (int round = 0; round < 25; ++round) {
            auto g = random_graph(rng);
            g.seal(round % 2 ? UnresolvedPolicy::Drop : UnresolvedPolicy::Placeholder);
            check_sealed_invariants(g);
            auto text = serialize(g, GraphFormat::Json);
            auto back = deserialize_json(text);
            CHECK(back == g);
            CHECK(serialize(back, GraphFormat::Json) == text);
        }
    }

    TEST_CASE("the EL parser is total")
    {
        std::mt19937 rng(11);
        const std::string alphabet = "${}#.()'\",ab_1 \\+[]\x01\xff";
        for (int i = 0; i < 5000; ++i) {
            auto text = random_text(rng, alphabet, 24);
            if (i % 2) text = "${" + text + "}";
            CAPTURE(text);
            ElExpression e;
            CHECK_NOTHROW(e = parse_el(text));
            CHECK(e.raw == text);
            if (e.parsed) CHECK(parse_el(render(e)).parsed);  // canonical spelling parses again
            Diagnostics diags;
            CHECK_NOTHROW(find_el(text, {"r.jsp", 1, 1}, diags));
        }
    }

    TEST_CASE("rendering is a fixed point")
    {
        std::mt19937 rng(13);
        const std::string idents[] = {"cart", "a", "_x", "sessionScope", "b2"};
        for (int i = 0; i < 500; ++i) {
            std::string text = "${" + idents[rng() % 5];
            for (unsigned s = 0, n = rng() % 4; s < n; ++s) {
                text += "." + idents[rng() % 5];
                if (rng() % 3 == 0) text += rng() % 2 ? "()" : "( 'q' , 1 )";
            }
            text += "}";
            auto e = parse_el(text);
            REQUIRE(e.parsed);
            CHECK(render(parse_el(render(e))) == render(e));
        }
    }

    TEST_CASE("setter names")
    {
        std::mt19937 rng(17);
        const std::string alphabet = "abcxyzABZ_09";
        for (int i = 0; i < 1000; ++i) {
            auto attr = random_text(rng, alphabet, 12);
            if (attr.empty()) continue;
            auto setter = setter_name(attr);
            CHECK(setter.rfind("set", 0) == 0);
            CHECK(setter.size() == attr.size() + 3);
            CHECK(setter[3] == std::toupper(static_cast<unsigned char>(attr[0])));
            CHECK(setter.substr(4) == attr.substr(1));
            CHECK(capitalize_property(capitalize_property(attr)) == capitalize_property(attr));
        }
    }

    TEST_CASE("url normalization is idempotent and stays under the root")
    {
        std::mt19937 rng(19);
        const std::string parts[] = {"a", "b", ".", "..", "", "x.jsp", "?q=1", "#f", "c d"};
        const std::string bases[] = {"/", "/index.jsp", "/shop/list.jsp", "/a/b/c/"};
        for (int i = 0; i < 3000; ++i) {
            std::string url = rng() % 3 == 0 ? "/" : "";
            for (unsigned s = 0, n = rng() % 6; s < n; ++s) url += parts[rng() % 9] + (rng() % 4 ? "/" : "");
            const std::string& base = bases[rng() % 4];
            CAPTURE(url);
            CAPTURE(base);
            auto once = normalize_url(url, base);
            if (!once) continue;
            CHECK(once->front() == '/');
            CHECK(once->find("/../") == std::string::npos);
            CHECK(once->find("/./") == std::string::npos);
            CHECK(once->find('?') == std::string::npos);
            CHECK(normalize_url(*once, base) == once);
            CHECK(normalize_url(*once, "/elsewhere/page.jsp") == once);
        }
    }

    TEST_CASE("template parsing and lowering never crash")
    {
        std::mt19937 rng(23);
        const std::string alphabet = "<%@=!-/>\" jsp:usetaglbprefix{}();$\n";
        for (int i = 0; i < 2000; ++i) {
            auto text = random_text(rng, alphabet, 60);
            CAPTURE(text);
            try {
                auto page = parse_template(text, "r.jsp");
                std::size_t covered = 0;
                for (const auto& n : page.nodes) covered += n.length;
                CHECK(covered == text.size());
                Diagnostics diags;
                auto lowered = lower_page(page, "/r.jsp", diags);
                CHECK_FALSE(lowered.unit.classes.empty());
            } catch (const UnterminatedConstruct&) {
            }
        }
    }
}
