#pragma once

// JSON shapes shared by persistence and the HTTP service.

#include "tracegraph/knowledge_base.hpp"
#include "tracegraph/trace_query.hpp"

#include "json.hpp"

namespace tracegraph::json {

using Json = nlohmann::ordered_json;

Json toJson(const KnowledgeType& t);
Json toJson(const LinkType& t);
Json toJson(const Annotation& a);
Json toJson(const KnowledgeObject& o, bool withAnnotations);
Json toJson(const LinkObject& l);
Json toJson(const ChangeEvent& e);

// Readers throw KbError(FormatError) on any shape mismatch.
KnowledgeType typeFromJson(const Json& j);
Annotation annotationFromJson(const Json& j);
KnowledgeObject objectFromJson(const Json& j);
LinkObject linkFromJson(const Json& j);
ChangeEvent eventFromJson(const Json& j);

/// Missing displayedTypeIds / enabledLinkTypeIds mean "all"; missing
/// checked means nothing checked.
SelectionQuery queryFromJson(const Json& body, const KnowledgeBase& kb);
Json toJson(const VisibilityResult& result, const SelectionQuery& query);

const Json& member(const Json& j, const char* key);
std::string stringMember(const Json& j, const char* key);

}  // namespace tracegraph::json
