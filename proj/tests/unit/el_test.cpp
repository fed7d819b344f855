#include <random>

#include <doctest.h>

#include "jeedep/el.hpp"
#include "support.hpp"

using namespace jeedep;

TEST_SUITE("el")
{
    TEST_CASE("parse")
    {
        auto e = parse_el("${cart.last.name}");
        REQUIRE(e.parsed);
        CHECK(e.sigil == '$');
        CHECK(e.base == "cart");
        REQUIRE(e.segments.size() == 2);
        CHECK(e.segments[0].name == "last");
        CHECK_FALSE(e.segments[0].call);

        auto c = parse_el("#{ bean.find( 'x', 3 ).size() }");
        REQUIRE(c.parsed);
        CHECK(c.sigil == '#');
        REQUIRE(c.segments.size() == 2);
        CHECK(c.segments[0].call);
        CHECK(c.segments[0].args == std::vector<std::string>{"'x'", "3"});
        CHECK(render(c) == "#{bean.find('x', 3).size()}");

        auto bare = parse_el("${cart}");
        CHECK(bare.parsed);
        CHECK(bare.segments.empty());
    }

    TEST_CASE("outside the grammar stays unparsed")
    {
        for (const char* text : {"${a + b}", "${a[0]}", "${empty cart}", "${}", "${a.}", "${a.b(c)}", "cart.total",
                                 "${a.b", "${1x}"}) {
            CAPTURE(text);
            auto e = parse_el(text);
            CHECK_FALSE(e.parsed);
            CHECK(e.raw == text);
            CHECK(render(e) == text);
        }
    }

    TEST_CASE("find in markup")
    {
        Diagnostics diags;
        auto sites = find_el("<p>${a.b}</p>\n<i title=\"${x.y('}')}\">\\${not.this}</i> ${open", {"p.jsp", 1, 1}, diags);
        REQUIRE(sites.size() == 2);
        CHECK(sites[0].expr.raw == "${a.b}");
        CHECK(sites[0].location == SourceLocation{"p.jsp", 1, 4});
        CHECK(sites[0].offset == 3);
        CHECK(sites[0].length == 6);
        CHECK(sites[1].expr.raw == "${x.y('}')}");
        CHECK(sites[1].expr.parsed);
        CHECK(sites[1].location.line == 2);
        CHECK(diags.size() == 1);  // the unclosed one
    }

    TEST_CASE("implicit objects")
    {
        CHECK(is_el_implicit_object("param"));
        CHECK(is_el_implicit_object("sessionScope"));
        CHECK(is_el_implicit_object("pageContext"));
        CHECK_FALSE(is_el_implicit_object("cart"));
    }

    TEST_CASE("resolution on the shop fixture")
    {
        auto r = test::run("shop");
        const auto& g = r.graph;
        CHECK(test::has_edge(g, "/shop/list.jsp -> shop.CartBean.getTotal/0 ElAccess"));
        CHECK(test::has_edge(g, "/shop/list.jsp -> shop.CartBean.total/0 ElAccess"));
        CHECK(test::has_edge(g, "/shop/list.jsp -> shop.CartBean.getLast/0 ElAccess"));
        CHECK(test::has_edge(g, "/shop/list.jsp -> shop.Item.getName/0 ElAccess"));
        CHECK(test::has_edge(g, "/shop/list.jsp -> shop.CartBean.isEmpty/0 ElAccess"));
        CHECK(r.diagnostics.count("unknown-el-base") == 2);  // ghost, and cart on a page without the bean
        for (const auto& rel : g.relationships_of_kind(RelationKind::ElAccess)) {
            CHECK(rel.evidence.analyzer == Analyzer::LiteralEl);
            CHECK(rel.evidence.note.rfind("${", 0) == 0);
        }
    }

    TEST_CASE("field fallback and unresolved members")
    {
        test::TempDir dir;
        dir.write("src/p/Bean.java", "package p;\npublic class Bean { public String label; public int size(int k) { return k; } }\n");
        dir.write("web/WEB-INF/web.xml", "<web-app/>");
        dir.write("web/a.jsp", "<jsp:useBean id=\"b\" class=\"p.Bean\"/>\n${b.label} ${b.size(2)} ${b.size()} ${b.nope} "
                               "${param.x} ${b.label + 1}\n");
        auto r = test::run_dir(dir.path);
        CHECK(test::has_edge(r.graph, "/a.jsp -> p.Bean.label ElAccess"));
        CHECK(test::has_edge(r.graph, "/a.jsp -> p.Bean.size/1 ElAccess"));
        CHECK(r.diagnostics.count("unresolved-el-member") == 2);
        CHECK(r.diagnostics.count("unparsed-el") == 1);
        CHECK(r.diagnostics.count("unknown-el-base") == 0);
    }

    TEST_CASE("named beans")
    {
        test::TempDir dir;
        dir.write("src/p/Greeter.java", "package p;\n@javax.inject.Named(\"greeter\")\npublic class Greeter { public String getText() { return \"\"; } }\n");
        dir.write("web/WEB-INF/web.xml", "<web-app/>");
        dir.write("web/g.jsp", "<h1>#{greeter.text}</h1>\n");
        auto r = test::run_dir(dir.path);
        CHECK(test::has_edge(r.graph, "/g.jsp -> p.Greeter.getText/0 ElAccess"));
    }
}
