#pragma once

#include "tracegraph/parser.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tracegraph {

// Scans a type starting at `start` (predefined keyword or dotted name, with
// generic arguments, array ranks, `?` and `*` suffixes). Returns the index
// one past the type, or nullopt if no type starts there.
std::optional<std::size_t> scanType(std::span<const Token> tokens, std::size_t start);

struct LocalScan {
    NameSet names;
    std::vector<bool> declarationToken;  // type and declarator tokens of local declarations
};

LocalScan scanLocalDeclarations(std::span<const Token> body);

}  // namespace tracegraph
