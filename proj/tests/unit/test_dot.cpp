#include "doctest.h"
#include "support.hpp"

#include "tracegraph/dot_export.hpp"
#include "tracegraph/populator.hpp"

using namespace tracegraph;
using tgtest::checkDotSyntax;

TEST_CASE("the syntax checker itself") {
    std::string err;
    CHECK(checkDotSyntax("digraph { a -> b; }"));
    CHECK(checkDotSyntax("strict graph G { a -- b -- c [color=red]; subgraph cluster_x { label=\"x\"; d } }"));
    CHECK(checkDotSyntax("digraph \"g\" { node [shape=box]; \"a\\\"b\" -> {c d}; e:n -> f:s:w; -1.5; }"));
    CHECK_FALSE(checkDotSyntax("digraph { a -- b }", &err));
    CHECK_FALSE(err.empty());
    CHECK_FALSE(checkDotSyntax("graph { a -> b }"));
    CHECK_FALSE(checkDotSyntax("digraph { a -> }"));
    CHECK_FALSE(checkDotSyntax("digraph { \"open }"));
    CHECK_FALSE(checkDotSyntax("digraph { a [label=x }"));
    CHECK_FALSE(checkDotSyntax("digraph { a } extra"));
    CHECK_FALSE(checkDotSyntax("tree { }"));
}

TEST_CASE("export of the corpus") {
    const ProjectResult project = extractProject(tgtest::fixturesDir() / "corpus");
    const std::string dot = exportDot(project.kb);
    std::string err;
    CHECK_MESSAGE(checkDotSyntax(dot, &err), err);
    CHECK(exportDot(project.kb) == dot);
    CHECK(dot.find("subgraph \"cluster_") != std::string::npos);
    CHECK(dot.find("[label=\"Calls\"]") != std::string::npos);
    CHECK(dot.find("[label=\"Contains\"]") == std::string::npos);
    std::size_t edges = 0;
    for (std::size_t p = dot.find(" -> "); p != std::string::npos; p = dot.find(" -> ", p + 1)) ++edges;
    CHECK(edges == project.kb.links().size() - 104);
}

TEST_CASE("awkward names and non-tree containment") {
    KnowledgeBase kb;
    const auto a = kb.addObject("Class", "A\"q\\", "A \"quoted\"\nname", Access::Public).id;
    const auto b = kb.addObject("Class", "B", "B", Access::Public).id;
    const auto c = kb.addObject("Method", "C", "C", Access::Public).id;
    kb.addLink("Contains", a, c);
    kb.addLink("Contains", b, c);
    kb.addLink("Contains", a, b);
    kb.addLink("Contains", b, a);
    kb.annotate(a, AnnotationKind::Note, "x");
    std::string err;
    const std::string dot = exportDot(kb);
    CHECK_MESSAGE(checkDotSyntax(dot, &err), err << "\n" << dot);
    CHECK(checkDotSyntax(exportDot(KnowledgeBase{})));
}
