#include "doctest.h"

#include "tracegraph/code_model.hpp"

using namespace tracegraph;

TEST_CASE("enum text round trips") {
    for (auto a : {Access::Public, Access::Private, Access::Other}) CHECK(parseAccess(to_string(a)) == a);
    for (auto k : {TypeKind::Class, TypeKind::Struct, TypeKind::Interface}) CHECK(parseTypeKind(to_string(k)) == k);
    for (auto k : {RefKind::Call, RefKind::Use, RefKind::Instantiate}) CHECK(parseRefKind(to_string(k)) == k);
    CHECK_THROWS_AS(parseAccess("protected"), std::invalid_argument);
    CHECK_THROWS_AS(parseRefKind("call"), std::invalid_argument);
}

TEST_CASE("type lists split at top-level commas") {
    CHECK(splitTypeList("A,B<C,D>,E") == std::vector<std::string>{"A", "B<C,D>", "E"});
    CHECK(splitTypeList("") == std::vector<std::string>{});
    CHECK(joinTypeList({"A", "B<C,D>"}) == "A,B<C,D>");
    CHECK(splitTypeList(joinTypeList({"X<Y<Z,W>>", "Q"})) == std::vector<std::string>{"X<Y<Z,W>>", "Q"});
}

TEST_CASE("canonical form sorts, merges and numbers") {
    CodeModel m;
    NamespaceDecl z{"Z", {}, {}};
    NamespaceDecl a1{"A", {}, {}};
    ClassDecl c;
    c.name = "C";
    c.methods.push_back(MethodDecl{"Run", "", Access::Public, "void", {ParamDecl{"y", "int", ""}, ParamDecl{"x", "int", ""}}, {}, false});
    c.methods.push_back(MethodDecl{"Add", "", Access::Public, "void", {}, {}, false});
    c.methods.push_back(MethodDecl{"Run", "", Access::Private, "int", {}, {}, false});
    a1.classes.push_back(c);
    NamespaceDecl a2{"A", {}, {DelegateDecl{"D", "", Access::Public, "void()"}}};
    m.namespaces = {z, a1, a2};
    canonicalize(m);

    REQUIRE(m.namespaces.size() == 2);
    CHECK(m.namespaces[0].qualifiedName == "A");
    CHECK(m.namespaces[0].delegates.at(0).qualifiedName == "A.D");
    const auto& methods = m.namespaces[0].classes.at(0).methods;
    REQUIRE(methods.size() == 3);
    CHECK(methods[0].qualifiedName == "A.C.Add");
    CHECK(methods[1].qualifiedName == "A.C.Run#1");
    CHECK(methods[1].access == Access::Public);
    CHECK(methods[2].qualifiedName == "A.C.Run#2");
    // Parameters keep declaration order.
    CHECK(methods[1].parameters[0].qualifiedName == "A.C.Run#1.y");
    CHECK(methods[1].parameters[1].qualifiedName == "A.C.Run#1.x");

    CodeModel again = m;
    canonicalize(again);
    CHECK(again == m);
}
