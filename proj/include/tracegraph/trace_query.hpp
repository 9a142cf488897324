#pragma once

#include "tracegraph/knowledge_base.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tracegraph {

struct SelectionQuery {
    std::vector<std::string> displayedTypeIds;
    std::map<std::string, std::set<std::string>> checked;  // typeId -> object ids
    std::set<std::string> enabledLinkTypeIds;
};

struct VisibilityResult {
    std::map<std::string, std::set<std::string>> visible;  // one entry per displayed type
    std::uint64_t revision = 0;

    friend bool operator==(const VisibilityResult&, const VisibilityResult&) = default;
};

enum class QueryErrorCode { UnknownId, InvalidQuery };

class QueryError : public std::runtime_error {
public:
    QueryError(QueryErrorCode code, const std::string& detail);
    QueryErrorCode code() const noexcept { return code_; }

private:
    QueryErrorCode code_;
};

/// Column visibility for a checkbox selection.
///
/// With nothing checked every displayed object is visible. Otherwise each
/// displayed column contributes its checked objects, or all its objects when
/// none are checked; links of enabled types between contributed objects are
/// walked in both directions from the checked objects, and whatever is
/// reached is visible. Undisplayed columns take no part.
///
/// Throws QueryError(UnknownId) for ids not in the knowledge base and
/// QueryError(InvalidQuery) for checks outside the displayed columns or
/// filed under the wrong type.
VisibilityResult computeVisibility(const KnowledgeBase& kb, const SelectionQuery& query);

struct TreeChild {
    std::string linkTypeName;
    std::string linkId;
    KnowledgeObject child;
};

/// Outgoing links of enabled types, ordered by link type name, then child
/// display name, then child id.
std::vector<TreeChild> treeChildren(const KnowledgeBase& kb, const std::string& objectId,
                                    const std::set<std::string>& enabledLinkTypeIds);

/// Objects of a type that no object of the same type contains, ordered by
/// display name, then id.
std::vector<KnowledgeObject> treeRoots(const KnowledgeBase& kb, const std::string& typeId);

}  // namespace tracegraph
