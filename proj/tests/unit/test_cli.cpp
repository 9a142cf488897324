#include "doctest.h"
#include "support.hpp"

using tgtest::runCli;

namespace {

const std::string corpus() { return (tgtest::fixturesDir() / "corpus").string(); }

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(runCli({}).exitCode == 1);
    CHECK(runCli({"frobnicate"}).exitCode == 1);
    CHECK(runCli({"build"}).exitCode == 1);
    CHECK(runCli({"build", "x.codemodel.xml"}).exitCode == 1);
    CHECK(runCli({"--help"}).exitCode == 0);
}

TEST_CASE("extract on a directory without sources exits 2") {
    tgtest::TempDir dir;
    const auto r = runCli({"extract", dir.path().string(), "-o", (dir / "m.xml").string()});
    CHECK(r.exitCode == 2);
    CHECK(r.err.find("NoSourcesFound") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(dir / "m.xml"));
}

TEST_CASE("extract with a broken file still writes the model and exits 2") {
    tgtest::TempDir dir;
    const auto r = runCli({"extract", (tgtest::fixturesDir() / "bad_corpus").string(), "-o", (dir / "m.xml").string()});
    CHECK(r.exitCode == 2);
    CHECK(r.err.find("Broken.cs:7:20: IllegalCharacter") != std::string::npos);
    const std::string xml = tgtest::readFile(dir / "m.xml");
    CHECK(xml.find("Good") != std::string::npos);
    CHECK(xml.find("Broken") == std::string::npos);
}

TEST_CASE("extract, build, query and export-dot on the corpus") {
    tgtest::TempDir dir;
    const std::string xml = (dir / "m.codemodel.xml").string();
    const std::string kb = (dir / "p.tracekb.json").string();
    const std::string dot = (dir / "g.dot").string();

    auto r = runCli({"extract", corpus(), "-o", xml});
    CHECK(r.exitCode == 0);
    CHECK(runCli({"extract", corpus()}).out == tgtest::readFile(xml));

    r = runCli({"build", xml, "-o", kb});
    CHECK(r.exitCode == 0);
    CHECK(r.out.find("Variable") != std::string::npos);
    CHECK(r.out.find("71") != std::string::npos);

    r = runCli({"query", kb});
    CHECK(r.exitCode == 0);
    CHECK(r.out.find("Method (36)") != std::string::npos);
    CHECK(r.out.find("Variable (71)") != std::string::npos);

    r = runCli({"query", kb, "--check", "Method:Connect", "--columns", "Method,Variable", "--links", "Uses"});
    CHECK(r.exitCode == 0);
    CHECK(r.out == "Method (1)\n  GeomKernel.Vertex.Connect\nVariable (1)\n  GeomKernel.Vertex.valence\n");

    CHECK(runCli({"query", kb, "--check", "Method:Nope"}).exitCode == 1);
    CHECK(runCli({"query", kb, "--columns", "Bogus"}).exitCode == 1);
    CHECK(runCli({"query", (dir / "missing.json").string()}).exitCode == 1);

    r = runCli({"export-dot", kb, "-o", dot});
    CHECK(r.exitCode == 0);
    std::string err;
    CHECK_MESSAGE(tgtest::checkDotSyntax(tgtest::readFile(dot), &err), err);
    CHECK(runCli({"export-dot", kb}).out == tgtest::readFile(dot));

    CHECK(runCli({"build", (dir / "nope.xml").string(), "-o", kb}).exitCode == 1);
    tgtest::writeFile(dir / "bad.xml", "<Other/>");
    CHECK(runCli({"build", (dir / "bad.xml").string(), "-o", kb}).exitCode == 1);
}

TEST_CASE("serve rejects a bad bind address") {
    tgtest::TempDir dir;
    const std::string kb = (dir / "p.tracekb.json").string();
    REQUIRE(runCli({"build", (tgtest::fixturesDir() / "snippets" / "s07_splitvertex.codemodel.xml").string(), "-o", kb}).exitCode == 0);
    CHECK(runCli({"serve", kb, "--bind", "nonsense"}).exitCode == 1);
    CHECK(runCli({"serve", kb}, {"TRACEGRAPH_BIND=bad:port"}).exitCode == 1);
}
