#include "tracegraph/lexer.hpp"
#include "tracegraph/parser.hpp"
#include "tracegraph/populator.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tracegraph {

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> sourceFiles(const fs::path& root) {
    if (!fs::is_directory(root)) {
        throw fs::filesystem_error("not a directory", root, std::make_error_code(std::errc::not_a_directory));
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied)) {
        if (entry.is_regular_file() && entry.path().extension() == ".cs") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(), [&](const fs::path& a, const fs::path& b) {
        return a.lexically_relative(root).generic_string() < b.lexically_relative(root).generic_string();
    });
    return files;
}

std::string readFile(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw fs::filesystem_error("cannot open", path, std::make_error_code(std::errc::permission_denied));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

ExtractionResult extractModel(const fs::path& root) {
    const auto files = sourceFiles(root);
    if (files.empty()) {
        throw NoSourcesFound("no .cs files under '" + root.string() + "'");
    }

    ExtractionResult result;
    std::vector<CodeModel> parts;
    std::vector<std::string> partFiles;
    for (const auto& path : files) {
        const std::string name = path.lexically_relative(root).generic_string();
        result.files.push_back(name);
        try {
            const auto tokens = tokenize(readFile(path), name);
            ParseResult parsed = parseFile(tokens);
            result.diagnostics.insert(result.diagnostics.end(), parsed.diagnostics.begin(), parsed.diagnostics.end());
            parts.push_back(std::move(parsed.model));
            partFiles.push_back(name);
        } catch (const LexError& e) {
            result.errors.push_back(FileError{name, std::string(to_string(e.kind())), e.what(), e.position()});
        } catch (const UnbalancedBraces& e) {
            result.errors.push_back(FileError{name, "UnbalancedBraces", e.what(), e.position()});
        }
    }

    try {
        result.model = mergeModels(parts);
    } catch (const ConflictingDeclaration&) {
        // Fold one file at a time so only the offending files are dropped.
        CodeModel merged;
        for (std::size_t k = 0; k < parts.size(); ++k) {
            try {
                merged = mergeModels({merged, parts[k]});
            } catch (const ConflictingDeclaration& e) {
                result.errors.push_back(
                    FileError{partFiles[k], "ConflictingDeclaration", e.what(), SourcePosition{partFiles[k], 1, 1}});
            }
        }
        result.model = std::move(merged);
    }
    return result;
}

ProjectResult extractProject(const fs::path& root) {
    ProjectResult project{extractModel(root), KnowledgeBase{}, {}};
    project.report = populate(project.extraction.model, project.kb);
    return project;
}

}  // namespace tracegraph
