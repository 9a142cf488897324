#pragma once

// Shared helpers for the unit and acceptance binaries.

#include "tracegraph/code_model.hpp"
#include "tracegraph/knowledge_base.hpp"
#include "tracegraph/lexer.hpp"
#include "tracegraph/trace_query.hpp"

#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace tgtest {

namespace fs = std::filesystem;
using Rng = std::mt19937_64;

fs::path fixturesDir();
fs::path cliPath();

std::string readFile(const fs::path& path);
void writeFile(const fs::path& path, const std::string& text);

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

struct CliResult {
    int exitCode = -1;
    std::string out;
    std::string err;
};

/// Runs the command-line tool with the given arguments (no shell expansion
/// of the arguments themselves). Extra environment assignments are prefixed
/// as NAME=value.
CliResult runCli(const std::vector<std::string>& args, const std::vector<std::string>& env = {});

/// Hand-enumerated expectation for a corpus (see corpus/enumeration.txt).
struct Enumeration {
    std::set<std::string> objectIds;
    std::set<std::string> linkIds;
    std::map<std::string, std::size_t> objectsPerType;
    std::map<std::string, std::size_t> linksPerType;
    // "Kind name memberId" lines, kept as a sorted multiset of strings.
    std::multiset<std::string> unresolved;
    std::multiset<std::string> ambiguous;
};

Enumeration readEnumeration(const fs::path& path);

/// One token per line: `LINE:COL Kind text`, with `\`, LF, CR and TAB in the
/// text written as \\, \n, \r and \t.
std::string tokenTable(const std::vector<tracegraph::Token>& tokens);

// ---- random generators ------------------------------------------------------

/// A canonical code model with adversarial names and types.
tracegraph::CodeModel randomModel(Rng& rng);

/// A knowledge base over the builtin types with at most maxObjects objects
/// and maxLinks links.
tracegraph::KnowledgeBase randomKb(Rng& rng, std::size_t maxObjects, std::size_t maxLinks);

/// Applies `steps` random mutations (some of them invalid and rejected).
/// Returns how many were accepted.
std::size_t randomMutations(Rng& rng, tracegraph::KnowledgeBase& kb, std::size_t steps);

/// Reference implementation of column visibility: plain breadth-first
/// search over an adjacency list built from scratch.
std::map<std::string, std::set<std::string>> bfsVisibility(const tracegraph::KnowledgeBase& kb,
                                                          const tracegraph::SelectionQuery& query);

/// Syntactic check against the Graphviz DOT grammar. On failure returns
/// false and sets `error`.
bool checkDotSyntax(const std::string& text, std::string* error = nullptr);

}  // namespace tgtest
