#include <doctest.h>

#include "jeedep/config.hpp"
#include "support.hpp"

using namespace jeedep;

namespace {

const char* kWebXml = R"(<?xml version="1.0"?>
<web-app>
  <servlet>
    <servlet-name>cart</servlet-name>
    <servlet-class>shop.CartServlet</servlet-class>
  </servlet>
  <servlet>
    <servlet-name>home</servlet-name>
    <jsp-file>/index.jsp</jsp-file>
  </servlet>
  <servlet-mapping>
    <servlet-name>cart</servlet-name>
    <url-pattern>/shop/cart</url-pattern>
  </servlet-mapping>
  <servlet-mapping>
    <servlet-name>home</servlet-name>
    <url-pattern>/home/*</url-pattern>
  </servlet-mapping>
  <welcome-file-list><welcome-file>main.jsp</welcome-file></welcome-file-list>
  <taglib>
    <taglib-uri>/ps</taglib-uri>
    <taglib-location>/WEB-INF/tlds/petstore.tld</taglib-location>
  </taglib>
  <ejb-ref>
    <ejb-ref-name>ejb/Hello</ejb-ref-name>
    <home>shop.HelloHome</home>
    <ejb-link>HelloBean</ejb-link>
  </ejb-ref>
</web-app>
)";

const char* kTld = R"(<taglib>
  <uri>/petstore</uri>
  <tag>
    <name>prevForm</name>
    <tag-class>shop.PrevFormTag</tag-class>
    <attribute><name>action</name><required>true</required></attribute>
    <attribute><name>label</name></attribute>
  </tag>
  <tag>
    <name>old</name>
    <tagclass>shop.OldTag</tagclass>
  </tag>
</taglib>
)";

UrlTarget page_target(const std::string& path) { return UrlTarget{path, std::nullopt, UrlTarget::Source::PagePath, path}; }

} // namespace

TEST_SUITE("config")
{
    TEST_CASE("web.xml")
    {
        DependencyGraph g;
        Diagnostics diags;
        auto web = parse_web_xml(kWebXml, "web/WEB-INF/web.xml", g, diags);
        CHECK(g.find(web.config));
        CHECK(g.find(web.config)->kind == EntityKind::ConfigFile);
        REQUIRE(web.servlets.size() == 2);
        CHECK(web.servlets[0].class_name == "shop.CartServlet");
        CHECK(web.servlets[1].jsp_file == "/index.jsp");
        REQUIRE(web.mappings.size() == 2);
        CHECK(web.mappings[0].pattern == "/shop/cart");
        CHECK(web.mappings[0].servlet == "cart");
        CHECK(web.mappings[0].location.line == 13);
        CHECK(web.welcome_files == std::vector<std::string>{"main.jsp"});
        CHECK(web.taglib_locations.at("/ps") == "/WEB-INF/tlds/petstore.tld");
        REQUIRE(web.ejb_refs.size() == 1);
        CHECK(web.ejb_refs[0].name == "ejb/Hello");
        CHECK(web.ejb_refs[0].link == "HelloBean");
    }

    TEST_CASE("tag library descriptor, old and new element names")
    {
        DependencyGraph g;
        Diagnostics diags;
        auto lib = parse_tld(kTld, "web/WEB-INF/tlds/petstore.tld", g, diags);
        CHECK(lib.uri == "/petstore");
        REQUIRE(lib.tags.size() == 2);
        CHECK(lib.tags[0].handler == "shop.PrevFormTag");
        CHECK(lib.tags[1].handler == "shop.OldTag");
        REQUIRE(lib.tags[0].attributes.size() == 2);
        CHECK(lib.tags[0].attributes[0].required);
        CHECK_FALSE(lib.tags[0].attributes[1].required);
        const Entity* def = g.find(lib.tags[0].definition);
        REQUIRE(def);
        CHECK(def->kind == EntityKind::TagDefinition);
        CHECK(g.find(*def->parent)->kind == EntityKind::ConfigFile);
    }

    TEST_CASE("ejb-jar and faces-config")
    {
        DependencyGraph g;
        Diagnostics diags;
        auto ejbs = parse_ejb_jar("<ejb-jar><enterprise-beans><session><ejb-name>HelloBean</ejb-name>"
                                  "<ejb-class>shop.HelloBean</ejb-class></session></enterprise-beans></ejb-jar>",
                                  "META-INF/ejb-jar.xml", g, diags);
        CHECK(ejbs == std::map<std::string, std::string>{{"HelloBean", "shop.HelloBean"}});
        auto beans = parse_faces_config("<faces-config><managed-bean><managed-bean-name>cart</managed-bean-name>"
                                        "<managed-bean-class>shop.Cart</managed-bean-class></managed-bean></faces-config>",
                                        "web/WEB-INF/faces-config.xml", g, diags);
        CHECK(beans == std::map<std::string, std::string>{{"cart", "shop.Cart"}});
    }

    TEST_CASE("malformed descriptors throw but keep the file entity")
    {
        DependencyGraph g;
        Diagnostics diags;
        CHECK_THROWS_AS(parse_web_xml("<web-app><servlet>", "web/WEB-INF/web.xml", g, diags), XmlError);
        CHECK(g.lookup_one(EntityKind::ConfigFile, "web/WEB-INF/web.xml"));
    }

    TEST_CASE("malformed descriptors become diagnostics in a run")
    {
        test::TempDir dir;
        dir.write("web/WEB-INF/web.xml", "<web-app><servlet>");
        dir.write("web/index.jsp", "<p>hi</p>");
        auto r = test::run_dir(dir.path);
        CHECK(r.web_root == "web");
        CHECK_FALSE(r.diagnostics.empty());
        CHECK(r.graph.lookup_one(EntityKind::ServerPage, "/index.jsp"));
    }

    TEST_CASE("mapping precedence")
    {
        UrlMappingTable m;
        CHECK(m.add("/shop/cart", UrlTarget{"shop.Cart", std::nullopt, UrlTarget::Source::Descriptor, "/shop/cart"}));
        CHECK_FALSE(m.add("/shop/cart", page_target("/other")));
        m.add("/shop/*", UrlTarget{"shop.Front", std::nullopt, UrlTarget::Source::Descriptor, "/shop/*"});
        m.add("/*", UrlTarget{"shop.All", std::nullopt, UrlTarget::Source::Descriptor, "/*"});
        m.add("*.do", UrlTarget{"shop.Action", std::nullopt, UrlTarget::Source::Descriptor, "*.do"});
        m.add("/x/index.jsp", page_target("/x/index.jsp"));
        m.set_welcome_files({"main.jsp", "index.jsp"});

        CHECK(m.lookup("/shop/cart")->name == "shop.Cart");
        CHECK(m.lookup("/shop/list")->name == "shop.Front");
        CHECK(m.lookup("/a/b.do")->name == "shop.All");  // path prefix before extension
        CHECK(m.lookup("/x/index.jsp")->name == "/x/index.jsp");

        UrlMappingTable n;
        n.add("*.do", UrlTarget{"shop.Action", std::nullopt, UrlTarget::Source::Descriptor, "*.do"});
        n.add("/x/index.jsp", page_target("/x/index.jsp"));
        n.add("/", UrlTarget{"shop.Default", std::nullopt, UrlTarget::Source::Descriptor, "/"});
        n.set_welcome_files({"main.jsp", "index.jsp"});
        CHECK(n.lookup("/a/b.do")->name == "shop.Action");
        CHECK(n.lookup("/x/")->name == "/x/index.jsp");
        CHECK(n.lookup("/nowhere.jsp")->name == "shop.Default");

        UrlMappingTable empty;
        CHECK_FALSE(empty.lookup("/a.jsp"));
    }
}
