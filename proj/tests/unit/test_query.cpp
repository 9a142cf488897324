#include "doctest.h"
#include "support.hpp"

#include "tracegraph/populator.hpp"
#include "tracegraph/trace_query.hpp"

using namespace tracegraph;

namespace {

using Ids = std::set<std::string>;

struct Chain {
    KnowledgeBase kb;
    std::string c, m, m2, v, w;
    Chain() {
        c = kb.addObject("Class", "C", "C", Access::Public).id;
        m = kb.addObject("Method", "C.M", "M", Access::Public).id;
        m2 = kb.addObject("Method", "C.M2", "M2", Access::Public).id;
        v = kb.addObject("Variable", "C.V", "V", Access::Private, "field").id;
        w = kb.addObject("Variable", "C.W", "W", Access::Private, "field").id;
        kb.addLink("Contains", c, m);
        kb.addLink("Contains", c, m2);
        kb.addLink("Uses", m, v);
        kb.addLink("Uses", m2, w);
    }
    std::set<std::string> allLinks() const { return {"Contains", "Uses", "Calls"}; }
};

QueryErrorCode errorOf(const KnowledgeBase& kb, const SelectionQuery& q) {
    try {
        computeVisibility(kb, q);
    } catch (const QueryError& e) {
        return e.code();
    }
    FAIL("expected a QueryError");
    return QueryErrorCode::InvalidQuery;
}

}  // namespace

TEST_CASE("nothing checked shows every displayed object") {
    Chain f;
    const auto r = computeVisibility(f.kb, {{"Method", "Variable"}, {}, f.allLinks()});
    CHECK(r.visible.size() == 2);
    CHECK(r.visible.at("Method") == Ids{f.m, f.m2});
    CHECK(r.visible.at("Variable") == Ids{f.v, f.w});
    CHECK(r.revision == f.kb.revision());
}

TEST_CASE("checking a method shows its variable only") {
    Chain f;
    const auto r = computeVisibility(f.kb, {{"Method", "Variable"}, {{"Method", {f.m}}}, f.allLinks()});
    CHECK(r.visible.at("Method") == Ids{f.m});
    CHECK(r.visible.at("Variable") == Ids{f.v});
}

TEST_CASE("indirect propagation through an unchecked column") {
    Chain f;
    const auto r = computeVisibility(f.kb, {{"Class", "Method", "Variable"}, {{"Class", {f.c}}}, f.allLinks()});
    CHECK(r.visible.at("Class") == Ids{f.c});
    CHECK(r.visible.at("Method") == Ids{f.m, f.m2});
    CHECK(r.visible.at("Variable") == Ids{f.v, f.w});
}

TEST_CASE("a checked column restricts pass-through") {
    Chain f;
    const auto r = computeVisibility(f.kb, {{"Class", "Method", "Variable"}, {{"Class", {f.c}}, {"Method", {f.m2}}}, f.allLinks()});
    CHECK(r.visible.at("Method") == Ids{f.m2});
    CHECK(r.visible.at("Variable") == Ids{f.w});
}

TEST_CASE("hidden columns carry no paths and links are undirected") {
    Chain f;
    auto r = computeVisibility(f.kb, {{"Class", "Variable"}, {{"Variable", {f.v}}}, f.allLinks()});
    CHECK(r.visible.at("Class").empty());
    CHECK(r.visible.at("Variable") == Ids{f.v});
    r = computeVisibility(f.kb, {{"Class", "Method"}, {{"Method", {f.m}}}, {"Contains"}});
    CHECK(r.visible.at("Class") == Ids{f.c});
    r = computeVisibility(f.kb, {{"Class", "Method"}, {{"Method", {f.m}}}, {}});
    CHECK(r.visible.at("Class").empty());
    CHECK(r.visible.at("Method") == Ids{f.m});
}

TEST_CASE("malformed queries") {
    Chain f;
    CHECK(errorOf(f.kb, {{"Nope"}, {}, {}}) == QueryErrorCode::UnknownId);
    CHECK(errorOf(f.kb, {{"Method"}, {{"Method", {"Method:gone"}}}, {}}) == QueryErrorCode::UnknownId);
    CHECK(errorOf(f.kb, {{"Method"}, {}, {"NoLink"}}) == QueryErrorCode::UnknownId);
    CHECK(errorOf(f.kb, {{"Method"}, {{"Variable", {f.v}}}, {}}) == QueryErrorCode::InvalidQuery);
    CHECK(errorOf(f.kb, {{"Method", "Variable"}, {{"Method", {f.v}}}, {}}) == QueryErrorCode::InvalidQuery);
    CHECK(errorOf(f.kb, {{"Method", "Method"}, {}, {}}) == QueryErrorCode::InvalidQuery);
}

TEST_CASE("oracle agreement on small random graphs") {
    tgtest::Rng rng(99);
    for (int round = 0; round < 40; ++round) {
        const KnowledgeBase kb = tgtest::randomKb(rng, 40, 80);
        SelectionQuery q;
        for (const auto& t : kb.types()) {
            if (rng() % 3 != 0) q.displayedTypeIds.push_back(t.id);
        }
        for (const auto& t : kb.linkTypes()) {
            if (rng() % 2) q.enabledLinkTypeIds.insert(t.id);
        }
        for (const auto& t : q.displayedTypeIds) {
            for (const auto& id : kb.objectsOfType(t)) {
                if (rng() % 6 == 0) q.checked[t].insert(id);
            }
        }
        CHECK(computeVisibility(kb, q).visible == tgtest::bfsVisibility(kb, q));
    }
}

TEST_CASE("tree children and roots") {
    const ProjectResult project = extractProject(tgtest::fixturesDir() / "corpus");
    const auto& kb = project.kb;
    std::set<std::string> all;
    for (const auto& t : kb.linkTypes()) all.insert(t.id);

    const auto ns = treeChildren(kb, "Namespace:GeomKernel.Cmds", all);
    REQUIRE(ns.size() == 3);
    CHECK(ns[0].child.displayName == "CommandBase");
    CHECK(ns[1].child.displayName == "ICommand");
    CHECK(ns[2].child.displayName == "UndoStack");

    const auto split = treeChildren(kb, "Method:GeomKernel.CmdsCleanUp.SplitVertexCommand.SplitVertex", all);
    REQUIRE(split.size() == 2);
    CHECK(split[0].linkTypeName == "Calls");
    CHECK(split[0].child.displayName == "Apply");
    CHECK(split[1].child.displayName == "Init");

    CHECK(treeChildren(kb, "Variable:GeomKernel.Vertex.x", all).empty());
    CHECK(treeChildren(kb, "Class:GeomKernel.Vertex", {"Uses"}).empty());
    CHECK_THROWS_AS(treeChildren(kb, "Class:none", all), QueryError);

    CHECK(treeRoots(kb, "Namespace").size() == 5);
    CHECK(treeRoots(kb, "Method").size() == 36);
    // Nested Entry sits under UndoStack in its own column.
    CHECK(treeRoots(kb, "Class").size() == 12);
    CHECK(treeRoots(KnowledgeBase{}, "Class").empty());
}
