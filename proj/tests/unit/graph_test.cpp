#include <cmath>

#include <doctest.h>

#include "jeedep/graph.hpp"

using namespace jeedep;

namespace {

struct Small {
    DependencyGraph g;
    Entity pkg = make_entity(EntityKind::Package, "shop", "", {"src/shop", 1, 1});
    Entity cls = make_entity(EntityKind::ClassUnit, "shop.Cart", "src/shop/Cart.java", {"src/shop/Cart.java", 3, 1},
                             pkg.id);
    Entity m = make_entity(EntityKind::MethodUnit, "shop.Cart.add/1", "src/shop/Cart.java",
                           {"src/shop/Cart.java", 5, 5}, cls.id);

    Small()
    {
        g.add_entity(pkg);
        g.add_entity(cls);
        g.add_entity(m);
    }
};

Relationship edge(const EntityId& a, const EntityId& b, RelationKind kind, SourceLocation at)
{
    return Relationship{a, b, kind, Provenance{Analyzer::OoFrontend, std::move(at), {}}};
}

} // namespace

TEST_SUITE("graph")
{
    TEST_CASE("ids are content-derived and stable")
    {
        auto a = EntityId::derive(EntityKind::ClassUnit, "shop.Cart", "src/shop/Cart.java");
        auto b = EntityId::derive(EntityKind::ClassUnit, "shop.Cart", "src/shop/Cart.java");
        CHECK(a == b);
        CHECK(a != EntityId::derive(EntityKind::MethodUnit, "shop.Cart", "src/shop/Cart.java"));
        CHECK(a != EntityId::derive(EntityKind::ClassUnit, "shop.Cart", "other/Cart.java"));
    }

    TEST_CASE("adding an entity records containment")
    {
        Small s;
        CHECK(s.g.entity_count() == 3);
        CHECK(s.g.relationships_of_kind(RelationKind::Contains).size() == 2);
        CHECK(ancestors(s.g, s.m.id) == std::vector<EntityId>{s.cls.id, s.pkg.id});
    }

    TEST_CASE("identical re-add is a no-op, divergent re-add is an error")
    {
        Small s;
        CHECK(s.g.add_entity(s.cls) == s.cls.id);
        CHECK(s.g.entity_count() == 3);
        Entity changed = s.cls;
        changed.location.line = 99;
        CHECK_THROWS_AS(s.g.add_entity(changed), GraphError);
    }

    TEST_CASE("parent kind rules")
    {
        Small s;
        auto bad = make_entity(EntityKind::MethodUnit, "shop.run/0", "x", {"x", 1, 1}, s.pkg.id);
        try {
            s.g.add_entity(bad);
            FAIL("method under a package was accepted");
        } catch (const GraphError& e) {
            CHECK(e.code() == GraphError::Code::KindViolation);
        }
        auto orphan = make_entity(EntityKind::MethodUnit, "shop.run/0", "x", {"x", 1, 1});
        CHECK_THROWS_AS(s.g.add_entity(orphan), GraphError);
        auto cfg = make_entity(EntityKind::ConfigFile, "web/WEB-INF/x.tld", "web/WEB-INF/x.tld", {"web/WEB-INF/x.tld", 1, 1});
        s.g.add_entity(cfg);
        CHECK_NOTHROW(s.g.add_entity(
            make_entity(EntityKind::TagDefinition, "x.tld#t", "web/WEB-INF/x.tld", {"web/WEB-INF/x.tld", 4, 3}, cfg.id)));
        CHECK_THROWS_AS(s.g.add_entity(make_entity(EntityKind::TagDefinition, "x.tld#u", "web/WEB-INF/x.tld",
                                                   {"web/WEB-INF/x.tld", 9, 3}, s.cls.id)),
                        GraphError);
    }

    TEST_CASE("duplicate edges collapse on (source, target, kind, location)")
    {
        Small s;
        auto before = s.g.relationship_count();
        s.g.add_relationship(edge(s.m.id, s.cls.id, RelationKind::Calls, {"src/shop/Cart.java", 6, 9}));
        s.g.add_relationship(edge(s.m.id, s.cls.id, RelationKind::Calls, {"src/shop/Cart.java", 6, 9}));
        CHECK(s.g.relationship_count() == before + 1);
        s.g.add_relationship(edge(s.m.id, s.cls.id, RelationKind::Calls, {"src/shop/Cart.java", 7, 9}));
        CHECK(s.g.relationship_count() == before + 2);
    }

    TEST_CASE("seal: placeholder policy keeps the edge")
    {
        Small s;
        s.g.add_dangling(s.m.id, "/missing.jsp", RelationKind::LinksTo, {Analyzer::TagExtractor, {"a.jsp", 1, 9}, {}});
        auto report = s.g.seal(UnresolvedPolicy::Placeholder);
        CHECK(report.unresolved == 1);
        REQUIRE(report.placeholders.size() == 1);
        const Entity* p = s.g.find(report.placeholders[0]);
        REQUIRE(p);
        CHECK(p->kind == EntityKind::UnresolvedTarget);
        CHECK(p->name == "/missing.jsp");
        CHECK(s.g.relationships_of_kind(RelationKind::LinksTo).size() == 1);
    }

    TEST_CASE("seal: drop policy removes the edge")
    {
        Small s;
        s.g.add_dangling(s.m.id, "/missing.jsp", RelationKind::LinksTo, {Analyzer::TagExtractor, {"a.jsp", 1, 9}, {}});
        auto report = s.g.seal(UnresolvedPolicy::Drop);
        CHECK(report.dropped.size() == 1);
        CHECK(report.placeholders.empty());
        CHECK(s.g.relationships_of_kind(RelationKind::LinksTo).empty());
    }

    TEST_CASE("dangling name that does exist at seal time is not a placeholder")
    {
        Small s;
        auto target = s.g.add_dangling(s.m.id, "ejb/X", RelationKind::JndiLookup, {Analyzer::ContainerRules, {}, {}});
        s.g.add_entity(make_entity(EntityKind::UnresolvedTarget, "ejb/X", "", {}));
        auto report = s.g.seal();
        CHECK(report.unresolved == 0);
        CHECK(s.g.contains(target));
    }

    TEST_CASE("a sealed graph rejects writes")
    {
        Small s;
        s.g.seal();
        CHECK(s.g.sealed());
        CHECK_THROWS_AS(s.g.add_entity(make_entity(EntityKind::Package, "other", "", {})), GraphError);
        CHECK_THROWS_AS(s.g.add_relationship(edge(s.m.id, s.cls.id, RelationKind::Calls, {})), GraphError);
        CHECK_THROWS_AS(s.g.seal(), GraphError);
    }

    TEST_CASE("diff counts and improvement")
    {
        Small a;
        Small b;
        auto extra = make_entity(EntityKind::MethodUnit, "shop.Cart.clear/0", "src/shop/Cart.java",
                                 {"src/shop/Cart.java", 9, 5}, b.cls.id);
        b.g.add_entity(extra);
        a.g.seal();
        b.g.seal();
        auto d = diff(a.g, b.g);
        CHECK(d.entities.size_a == 3);
        CHECK(d.entities.size_b == 4);
        CHECK(d.entities.common == 3);
        CHECK(d.entities.only_in_b.size() == 1);
        CHECK(d.entities.only_in_a.empty());
        CHECK(d.entities.improvement_percent() == 33);
        CHECK(diff(a.g, a.g).empty());
        CHECK(diff(a.g, a.g).relationships.improvement_percent() == 0);
    }

    TEST_CASE("improvement arithmetic on published counts")
    {
        CHECK(std::lround(improvement_ratio(233, 329) * 100) == 41);
        CHECK(std::lround(improvement_ratio(2284, 2673) * 100) == 17);
        CHECK(improvement_ratio(500, 500) == 0.0);
        CHECK(improvement_ratio(0, 0) == 0.0);
        CHECK(improvement_ratio(0, 7) == 1.0);
    }
}
