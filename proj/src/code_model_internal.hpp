#pragma once

#include "tracegraph/code_model.hpp"

#include <functional>
#include <string>

namespace tracegraph {

using ConflictHandler = std::function<void(const std::string&)>;

// canonicalize() with a caller-chosen reaction to class-kind conflicts.
// When the handler returns, the first declaration's kind is kept.
void normalizeModel(CodeModel& model, const ConflictHandler& onConflict);

}  // namespace tracegraph
