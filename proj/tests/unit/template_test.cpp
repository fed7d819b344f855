#include <algorithm>

#include <doctest.h>

#include "jeedep/template.hpp"

using namespace jeedep;

TEST_SUITE("template")
{
    TEST_CASE("segments cover the file in order")
    {
        std::string text = "<html>\n<%@ page import=\"java.util.*\" %>\n<% int n = 3; %>\n<p><%= n %></p>\n"
                           "<%! int hits; %><%-- note --%>\n</html>\n";
        auto page = parse_template(text, "p.jsp");
        std::size_t at = 0;
        for (const auto& node : page.nodes) {
            CHECK(node.offset == at);
            at += node.length;
        }
        CHECK(at == text.size());
        std::vector<TemplateNodeKind> kinds;
        for (const auto& node : page.nodes)
            if (node.kind != TemplateNodeKind::RawMarkup) kinds.push_back(node.kind);
        CHECK(kinds == std::vector<TemplateNodeKind>{TemplateNodeKind::Directive, TemplateNodeKind::Scriptlet,
                                                     TemplateNodeKind::Expression, TemplateNodeKind::Declaration,
                                                     TemplateNodeKind::Comment});
        CHECK(page.multilanguage());
    }

    TEST_CASE("node locations are one-based line and column")
    {
        auto page = parse_template("ab\n  <%= x %>", "p.jsp");
        const TemplateNode* expr = nullptr;
        for (const auto& n : page.nodes)
            if (n.kind == TemplateNodeKind::Expression) expr = &n;
        REQUIRE(expr);
        CHECK(expr->location == SourceLocation{"p.jsp", 2, 3});
        CHECK(expr->body == " x ");
    }

    TEST_CASE("directive and action attributes")
    {
        auto page = parse_template("<%@ taglib uri=\"/petstore\" prefix=\"j2ee\" %>\n"
                                   "<jsp:useBean id=\"cart\" class=\"shop.Cart\" scope=\"session\"/>\n"
                                   "<j2ee:prevForm action='cart'>x</j2ee:prevForm>",
                                   "p.jsp");
        CHECK(page.taglib_prefixes.count("j2ee") == 1);
        int custom = 0;
        for (const auto& n : page.nodes) {
            if (n.kind == TemplateNodeKind::Directive) {
                CHECK(n.name == "taglib");
                REQUIRE(n.attribute("prefix"));
                CHECK(n.attribute("prefix")->value == "j2ee");
            }
            if (n.kind == TemplateNodeKind::UseBean) {
                REQUIRE(n.attribute("class"));
                CHECK(n.attribute("class")->value == "shop.Cart");
                CHECK(n.self_closing);
            }
            if (n.kind == TemplateNodeKind::CustomTag) {
                ++custom;
                CHECK(n.name == "j2ee:prevForm");
                if (!n.closing) {
                    REQUIRE(n.attribute("action"));
                    CHECK(n.attribute("action")->location == SourceLocation{"p.jsp", 3, 23});
                }
            }
        }
        CHECK(custom == 2);
    }

    TEST_CASE("undeclared prefixes stay markup")
    {
        auto page = parse_template("<x:y a=\"1\"/>", "p.jsp");
        REQUIRE(page.nodes.size() == 1);
        CHECK(page.nodes[0].kind == TemplateNodeKind::RawMarkup);
        CHECK_FALSE(page.multilanguage());
    }

    TEST_CASE("unterminated code is an error")
    {
        CHECK_THROWS_AS(parse_template("<p><% if (x) {", "p.jsp"), UnterminatedConstruct);
        CHECK_THROWS_AS(parse_template("<%= x", "p.jsp"), UnterminatedConstruct);
        CHECK_THROWS_AS(parse_template("<%-- open", "p.jsp"), UnterminatedConstruct);
    }

    TEST_CASE("masked text hides code but keeps offsets and lines")
    {
        std::string text = "<a href=\"<%= u %>\">\n<% x(); %>\n</a>";
        auto page = parse_template(text, "p.jsp");
        auto masked = page.masked_text();
        CHECK(masked.size() == text.size());
        CHECK(masked.find("x();") == std::string::npos);
        CHECK(std::count(masked.begin(), masked.end(), '\n') == std::count(text.begin(), text.end(), '\n'));
        CHECK(masked.substr(0, 9) == "<a href=\"");
    }
}
