#pragma once

#include "tracegraph/code_model.hpp"
#include "tracegraph/knowledge_base.hpp"
#include "tracegraph/parser.hpp"

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tracegraph {

struct UnresolvedReference {
    std::string name;
    RefKind kind = RefKind::Use;
    SourcePosition pos;
    std::string memberId;  // object that holds the reference
};

struct PopulationReport {
    // Distinct objects and links the model maps to, whether or not they
    // already existed in the knowledge base.
    std::map<std::string, std::size_t> objectsPerType;
    std::map<std::string, std::size_t> linksPerLinkType;
    std::size_t parameters = 0;

    std::size_t unresolvedCalls = 0;
    std::size_t unresolvedUses = 0;
    std::size_t unresolvedInstantiations = 0;
    // References whose first matching tier held more than one candidate.
    std::size_t ambiguousCalls = 0;
    std::size_t ambiguousUses = 0;
    std::size_t ambiguousInstantiations = 0;

    std::vector<UnresolvedReference> unresolved;

    std::size_t objectCount() const;
    std::size_t linkCount() const;
};

/// Adds one object per declaration and the builtin links between them.
/// Running it twice on the same model changes nothing the second time.
/// Throws KbError(MissingBuiltins) when the builtin registry is absent.
PopulationReport populate(const CodeModel& model, KnowledgeBase& kb);

/// Plain-text table: objects per type, links per link type, unresolved and
/// ambiguous reference counts.
std::string formatReport(const PopulationReport& report, const KnowledgeBase& kb);

class NoSourcesFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file that could not be turned into a model (lexer error, unbalanced
/// braces, or a declaration that conflicts with an earlier file).
struct FileError {
    std::string file;
    std::string kind;
    std::string message;
    SourcePosition pos;
};

struct ExtractionResult {
    CodeModel model;
    std::vector<std::string> files;  // relative to the root, generic separators
    std::vector<Diagnostic> diagnostics;
    std::vector<FileError> errors;
};

/// tokenize -> parseFile -> mergeModels over every `*.cs` below root, in
/// lexicographic path order. Failing files are reported and left out.
/// Throws NoSourcesFound when root holds no `.cs` file and
/// std::filesystem::filesystem_error when it is not a readable directory.
ExtractionResult extractModel(const std::filesystem::path& root);

struct ProjectResult {
    ExtractionResult extraction;
    KnowledgeBase kb;
    PopulationReport report;
};

ProjectResult extractProject(const std::filesystem::path& root);

}  // namespace tracegraph
