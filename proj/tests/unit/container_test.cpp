#include <doctest.h>

#include "jeedep/container_rules.hpp"
#include "support.hpp"

using namespace jeedep;

namespace {

const char* kTld = R"(<taglib>
  <uri>/t</uri>
  <tag>
    <name>box</name>
    <tag-class>t.BoxTag</tag-class>
    <attribute><name>title</name><required>true</required></attribute>
    <attribute><name>width</name></attribute>
  </tag>
</taglib>
)";

// A tag project; `handler` is the source of t/BoxTag.java, `page` the using page.
test::TempDir tag_project(const std::string& handler, const std::string& page)
{
    test::TempDir dir;
    dir.write("web/WEB-INF/web.xml", "<web-app/>");
    dir.write("web/WEB-INF/t.tld", kTld);
    if (!handler.empty()) dir.write("src/t/BoxTag.java", handler);
    dir.write("web/page.jsp", "<%@ taglib prefix=\"t\" uri=\"/t\" %>\n" + page);
    return dir;
}

const char* kHandler = R"(package t;
import javax.servlet.jsp.tagext.TagSupport;
public class BoxTag extends TagSupport {
    private String title;
    public void setTitle(String title) { this.title = title; }
    public void setWidth(String w) {}
    public int doStartTag() { return EVAL_BODY_INCLUDE; }
}
)";

} // namespace

TEST_SUITE("container")
{
    TEST_CASE("helpers")
    {
        CHECK(setter_name("action") == "setAction");
        CHECK(setter_name("firstName") == "setFirstName");
        CHECK(ejb_reference("java:comp/env/ejb/Hello") == "ejb/Hello");
        CHECK(ejb_reference("ejb/Hello") == "ejb/Hello");
        CHECK(ejb_reference("java:comp/env/jdbc/Pool").empty());
        CHECK(servlet_bases().count("HttpServlet"));
        CHECK(tag_handler_bases().count("TagSupport"));
        auto page = parse_template("<%@ taglib prefix=\"a\" uri=\"/x\" %><%@ taglib uri=\"/y\" prefix=\"b\" %>", "p.jsp");
        CHECK(taglib_bindings(page) == std::map<std::string, std::string>{{"a", "/x"}, {"b", "/y"}});
    }

    TEST_CASE("tag lifecycle: setters in attribute order, then start and end")
    {
        auto dir = tag_project(kHandler, "<t:box width=\"3\" title=\"Hi\">x</t:box>\n");
        auto r = test::run_dir(dir.path);
        const auto& g = r.graph;
        CHECK(test::has_edge(g, "/page.jsp -> t.BoxTag.setWidth/1 AttributeSetter"));
        CHECK(test::has_edge(g, "/page.jsp -> t.BoxTag.setTitle/1 AttributeSetter"));
        CHECK(test::has_edge(g, "/page.jsp -> t.BoxTag.doStartTag/0 LifecycleCallback"));
        CHECK(test::has_edge(g, "/page.jsp -> t.BoxTag.doEndTag/0 LifecycleCallback"));
        // doEndTag is inherited from the library base
        auto end = g.lookup_one(EntityKind::MethodUnit, "t.BoxTag.doEndTag/0");
        REQUIRE(end);
        CHECK(g.find(*end)->synthetic);
        CHECK(r.diagnostics.count("inherited-callback") == 1);
        // the setter edge points at the attribute value
        for (const auto& rel : g.relationships_of_kind(RelationKind::AttributeSetter))
            if (test::name_of(g, rel.target) == "t.BoxTag.setTitle/1")
                CHECK(rel.evidence.location == SourceLocation{"web/page.jsp", 2, 24});
    }

    TEST_CASE("tag use problems")
    {
        auto dir = tag_project(kHandler, "<t:box width=\"3\" color=\"red\"/>\n<t:nope/>\n<u:box/>\n");
        auto r = test::run_dir(dir.path);
        CHECK(r.diagnostics.count("MissingRequiredAttribute") == 1);
        CHECK(r.diagnostics.count("unknown-tag-attribute") == 1);
        CHECK(r.diagnostics.count("unknown-tag") == 1);
        // the use with problems still yields its edges
        CHECK(test::has_edge(r.graph, "/page.jsp -> t.BoxTag.doStartTag/0 LifecycleCallback"));
    }

    TEST_CASE("handler outside the project")
    {
        auto dir = tag_project("", "<t:box title=\"x\"/>\n");
        auto r = test::run_dir(dir.path);
        CHECK(r.diagnostics.count("unresolved-tag-handler") == 1);
        bool placeholder = false;
        for (const auto& id : r.seal.placeholders) placeholder |= r.graph.find(id)->name.find("t.BoxTag") == 0;
        CHECK(placeholder);
    }

    TEST_CASE("a project class that is not a tag handler gets no edges")
    {
        auto dir = tag_project("package t;\npublic class BoxTag { public void setTitle(String t) {} }\n",
                               "<t:box title=\"x\"/>\n");
        auto r = test::run_dir(dir.path);
        CHECK(r.diagnostics.count("not-a-tag-handler") == 1);
        CHECK(r.graph.relationships_of_kind(RelationKind::AttributeSetter).empty());
        CHECK(r.graph.relationships_of_kind(RelationKind::LifecycleCallback).size() == 1);  // WebContainer -> page
    }

    TEST_CASE("servlet lifecycle on the shop fixture")
    {
        auto r = test::run("shop");
        const auto& g = r.graph;
        CHECK(test::has_edge(g, "WebContainer -> shop.CartServlet.init/1 LifecycleCallback"));
        CHECK(test::has_edge(g, "WebContainer -> shop.CartServlet.service/2 LifecycleCallback"));
        CHECK(test::has_edge(g, "WebContainer -> shop.CartServlet.doGet/2 LifecycleCallback"));
        CHECK(test::has_edge(g, "WebContainer -> shop.CheckoutServlet.init/0 LifecycleCallback"));
        CHECK(test::has_edge(g, "WebContainer -> shop.CheckoutServlet.doPost/2 LifecycleCallback"));
        CHECK(test::has_edge(g, "WebContainer -> shop.CheckoutServlet.destroy/0 LifecycleCallback"));
        CHECK(test::has_edge(g, "WebContainer -> /shop/list.jsp LifecycleCallback"));
        CHECK(g.find(*g.lookup_one(EntityKind::MethodUnit, "shop.CartServlet.service/2"))->synthetic);
        // the relative link in the servlet resolves against its own pattern
        CHECK(test::has_edge(g, "shop.CartServlet.doGet/2 -> shop.CheckoutServlet LinksTo"));
        CHECK(r.diagnostics.count("servlet-base-unknown") == 0);
    }

    TEST_CASE("descriptor servlet without a servlet base")
    {
        test::TempDir dir;
        dir.write("src/p/Odd.java", "package p;\npublic class Odd { public void service() {} }\n");
        dir.write("web/WEB-INF/web.xml", "<web-app><servlet><servlet-name>o</servlet-name>"
                                         "<servlet-class>p.Odd</servlet-class></servlet></web-app>");
        auto r = test::run_dir(dir.path);
        CHECK(r.diagnostics.count("servlet-base-unknown") == 1);
        CHECK(r.graph.relationships_of_kind(RelationKind::LifecycleCallback).empty());
    }

    TEST_CASE("enterprise beans and lookups on the shop fixture")
    {
        auto r = test::run("shop");
        const auto& g = r.graph;
        CHECK(test::has_edge(g, "EjbContainer -> shop.HelloBean.ejbCreate/0 LifecycleCallback"));
        CHECK(test::has_edge(g, "EjbContainer -> shop.HelloBean.ejbRemove/0 LifecycleCallback"));
        CHECK(test::has_edge(g, "shop.CartServlet.greet/0 -> shop.HelloBean JndiLookup"));
        for (const auto& rel : g.relationships_of_kind(RelationKind::JndiLookup))
            CHECK(rel.evidence.location.line == 30);
    }

    TEST_CASE("lookup diagnostics")
    {
        test::TempDir dir;
        dir.write("src/p/L.java", R"(package p;
import javax.naming.InitialContext;
public class L {
    void f(InitialContext c, String n) throws Exception {
        c.lookup(n);
        c.lookup("java:comp/env/jdbc/Pool");
        c.lookup("java:comp/env/ejb/Ghost");
    }
}
)");
        auto r = test::run_dir(dir.path);
        CHECK(r.diagnostics.count("dynamic-lookup") == 1);
        CHECK(r.diagnostics.count("non-ejb-lookup") == 1);
        CHECK(r.diagnostics.count("unresolved-jndi") == 1);
        CHECK(test::has_edge(r.graph, "p.L.f/2 -> ejb/Ghost JndiLookup"));
    }

    TEST_CASE("annotated bean callbacks")
    {
        test::TempDir dir;
        dir.write("src/p/B.java", R"(package p;
import javax.ejb.Stateless;
import javax.annotation.PostConstruct;
import javax.annotation.PreDestroy;
@Stateless
public class B {
    @PostConstruct void up() {}
    @PreDestroy void down() {}
    void other() {}
}
)");
        auto r = test::run_dir(dir.path);
        CHECK(test::has_edge(r.graph, "EjbContainer -> p.B.up/0 LifecycleCallback"));
        CHECK(test::has_edge(r.graph, "EjbContainer -> p.B.down/0 LifecycleCallback"));
        CHECK_FALSE(test::has_edge(r.graph, "EjbContainer -> p.B.other/0 LifecycleCallback"));
    }
}
