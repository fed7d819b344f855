#include <doctest.h>
#include <json.hpp>

#include "jeedep/eval.hpp"
#include "support.hpp"

using namespace jeedep;

TEST_SUITE("eval")
{
    TEST_CASE("truth format")
    {
        auto truth = parse_truth("# comment\n\n/a.jsp -> /b.jsp LinksTo\n"
                                 "x -> y [Calls]   # trailing\n"
                                 "p -> web/WEB-INF/t.tld#box *\n"
                                 "  q->r\n");
        REQUIRE(truth.size() == 4);
        CHECK(truth[0].source == "/a.jsp");
        CHECK(truth[0].kind == RelationKind::LinksTo);
        CHECK(truth[0].line == 3);
        CHECK(truth[1].kind == RelationKind::Calls);
        CHECK(truth[2].target == "web/WEB-INF/t.tld#box");
        CHECK_FALSE(truth[2].kind);
        CHECK(truth[3].source == "q");
        CHECK(truth[3].target == "r");
        CHECK_FALSE(truth[3].kind);
        CHECK(parse_truth("").empty());
    }

    TEST_CASE("truth errors carry the line")
    {
        auto line_of = [](std::string_view text) {
            try {
                parse_truth(text);
            } catch (const TruthError& e) {
                return e.line();
            }
            return 0;
        };
        CHECK(line_of("a -> b\nno arrow\n") == 2);
        CHECK(line_of("a -> b Flies\n") == 1);
        CHECK(line_of("-> b\n") == 1);
        CHECK(line_of("a -> b Calls extra\n") == 1);
        CHECK(line_of("a b -> c\n") == 1);
    }

    TEST_CASE("motivating fixture scores perfectly")
    {
        auto r = test::run("motivating");
        auto truth = parse_truth(test::slurp(test::fixture("motivating/truth.txt")));
        auto report = evaluate(r.graph, truth);
        CHECK(report.precision == 1.0);
        CHECK(report.recall == 1.0);
        CHECK(report.matched == truth.size());
        CHECK(report.unmatched_names.empty());
    }

    TEST_CASE("a fabricated truth edge lowers recall only")
    {
        auto r = test::run("motivating");
        auto truth = parse_truth(test::slurp(test::fixture("motivating/truth.txt")) + "/cart.jsp -> /product.jsp LinksTo\n");
        auto report = evaluate(r.graph, truth);
        CHECK(report.precision == 1.0);
        REQUIRE(report.recall);
        CHECK(*report.recall == doctest::Approx(7.0 / 8.0));
        CHECK(report.missing == 1);
    }

    TEST_CASE("a dropped truth edge lowers precision only")
    {
        auto r = test::run("motivating");
        auto truth = parse_truth(test::slurp(test::fixture("motivating/truth.txt")));
        truth.pop_back();
        auto report = evaluate(r.graph, truth);
        CHECK(report.recall == 1.0);
        REQUIRE(report.precision);
        CHECK(*report.precision == doctest::Approx(6.0 / 7.0));
        CHECK(report.extra == 1);
    }

    TEST_CASE("wildcards, arity stripping and containment")
    {
        auto r = test::run("motivating");
        const std::string cls = "com.sun.j2ee.blueprints.petstore.taglib.list.PrevFormTag";
        auto truth = parse_truth("/product.jsp -> " + cls + ".doStartTag/0\n");
        auto report = evaluate(r.graph, truth);
        CHECK(report.recall == 1.0);
        CHECK(report.matched == 1);

        auto with = evaluate(r.graph, parse_truth("com.sun.j2ee.blueprints.petstore.taglib.list -> " + cls + " Contains\n"),
                             {true});
        CHECK(with.recall == 1.0);
        auto without = evaluate(r.graph, parse_truth("com.sun.j2ee.blueprints.petstore.taglib.list -> " + cls + " Contains\n"));
        CHECK(without.recall == 0.0);
    }

    TEST_CASE("undefined ratios")
    {
        DependencyGraph empty;
        empty.seal();
        auto report = evaluate(empty, {});
        CHECK_FALSE(report.precision);
        CHECK_FALSE(report.recall);
        auto doc = nlohmann::json::parse(eval_json(report));
        CHECK(doc["precision"] == "n/a");
        CHECK(doc["recall"] == "n/a");
        CHECK(eval_table(report).find("n/a") != std::string::npos);
    }

    TEST_CASE("diff output")
    {
        auto full = test::run("blog/site");
        auto base = test::run("blog/site", AnalysisMode::Baseline);
        auto delta = diff(base.graph, full.graph);
        auto doc = nlohmann::json::parse(diff_json(delta));
        CHECK(doc["entities"]["size_a"] == base.graph.entity_count());
        CHECK(doc["entities"]["size_b"] == full.graph.entity_count());
        CHECK(doc["entities"]["only_in_a"].empty());
        CHECK(diff_report(delta).find("improvement") != std::string::npos);
        CHECK(diff(full.graph, full.graph).empty());
    }
}
