#pragma once

#include "tracegraph/code_model.hpp"
#include "tracegraph/lexer.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace tracegraph {

struct Diagnostic {
    std::string message;
    SourcePosition pos;
};

class UnbalancedBraces : public std::runtime_error {
public:
    explicit UnbalancedBraces(SourcePosition pos);
    const SourcePosition& position() const noexcept { return pos_; }

private:
    SourcePosition pos_;
};

struct ParseResult {
    CodeModel model;
    std::vector<Diagnostic> diagnostics;
};

/// Builds the declaration tree of one file. Member bodies are never parsed,
/// only scanned for references. Throws UnbalancedBraces when `{`/`}` do not
/// pair up; every other problem becomes a diagnostic.
ParseResult parseFile(std::span<const Token> tokens);

using NameSet = std::unordered_set<std::string>;

/// Names declared as locals in a `{...}` body: `Type name ...;` statements,
/// `for`/`foreach`/`using`/`catch` headers. Flow-insensitive.
NameSet collectLocals(std::span<const Token> body);

/// Flattened Call/Use/Instantiate references of one body. Locals are dropped
/// and duplicate (kind, name) pairs keep only their first occurrence.
/// Parameter names are never treated as locals.
std::vector<Reference> extractReferences(std::span<const Token> body, const NameSet& locals,
                                         const NameSet& params, const NameSet& fields);

}  // namespace tracegraph
