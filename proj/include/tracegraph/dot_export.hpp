#pragma once

#include "tracegraph/knowledge_base.hpp"

#include <string>

namespace tracegraph {

/// Graphviz rendering: Contains links become nested clusters, every other
/// link a labeled edge. Contains links that do not fit a tree (second parent,
/// cycle) are drawn as edges too. Output is deterministic.
std::string exportDot(const KnowledgeBase& kb);

}  // namespace tracegraph
