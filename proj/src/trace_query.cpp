#include "tracegraph/trace_query.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace tracegraph {

QueryError::QueryError(QueryErrorCode code, const std::string& detail)
    : std::runtime_error((code == QueryErrorCode::UnknownId ? "UnknownId: " : "InvalidQuery: ") + detail),
      code_(code) {}

namespace {

void validate(const KnowledgeBase& kb, const SelectionQuery& q) {
    std::set<std::string> displayed;
    for (const auto& t : q.displayedTypeIds) {
        if (kb.findType(t) == nullptr) {
            throw QueryError(QueryErrorCode::UnknownId, "no knowledge type '" + t + "'");
        }
        if (!displayed.insert(t).second) {
            throw QueryError(QueryErrorCode::InvalidQuery, "type '" + t + "' displayed twice");
        }
    }
    for (const auto& [typeId, ids] : q.checked) {
        if (!displayed.count(typeId)) {
            throw QueryError(QueryErrorCode::InvalidQuery, "checks for undisplayed type '" + typeId + "'");
        }
        for (const auto& id : ids) {
            const auto* obj = kb.findObject(id);
            if (obj == nullptr) {
                throw QueryError(QueryErrorCode::UnknownId, "no object '" + id + "'");
            }
            if (obj->typeId != typeId) {
                throw QueryError(QueryErrorCode::InvalidQuery, "'" + id + "' is not of type '" + typeId + "'");
            }
        }
    }
    for (const auto& l : q.enabledLinkTypeIds) {
        if (kb.findLinkType(l) == nullptr) {
            throw QueryError(QueryErrorCode::UnknownId, "no link type '" + l + "'");
        }
    }
}

}  // namespace

VisibilityResult computeVisibility(const KnowledgeBase& kb, const SelectionQuery& q) {
    validate(kb, q);
    VisibilityResult result;
    result.revision = kb.revision();

    const bool anyChecked = std::any_of(q.checked.begin(), q.checked.end(), [](const auto& e) { return !e.second.empty(); });
    if (!anyChecked) {
        for (const auto& t : q.displayedTypeIds) {
            result.visible[t] = kb.objectsOfType(t);
        }
        return result;
    }

    auto checkedOf = [&](const std::string& t) -> const std::set<std::string>* {
        auto it = q.checked.find(t);
        return it == q.checked.end() || it->second.empty() ? nullptr : &it->second;
    };
    auto active = [&](const KnowledgeObject& o) {
        if (std::find(q.displayedTypeIds.begin(), q.displayedTypeIds.end(), o.typeId) == q.displayedTypeIds.end()) {
            return false;
        }
        const auto* c = checkedOf(o.typeId);
        return c == nullptr || c->count(o.id) > 0;
    };

    std::unordered_set<std::string> seen;
    std::deque<std::string> queue;
    for (const auto& [t, ids] : q.checked) {
        for (const auto& id : ids) {
            if (seen.insert(id).second) {
                queue.push_back(id);
            }
        }
    }
    auto visit = [&](const std::string& linkId, bool forward) {
        const LinkObject& link = *kb.findLink(linkId);
        if (!q.enabledLinkTypeIds.count(link.linkTypeId)) {
            return;
        }
        const std::string& other = forward ? link.childId : link.parentId;
        if (seen.count(other) || !active(*kb.findObject(other))) {
            return;
        }
        seen.insert(other);
        queue.push_back(other);
    };
    while (!queue.empty()) {
        const std::string id = std::move(queue.front());
        queue.pop_front();
        for (const auto& l : kb.outgoingLinks(id)) visit(l, true);
        for (const auto& l : kb.incomingLinks(id)) visit(l, false);
    }

    for (const auto& t : q.displayedTypeIds) {
        auto& bucket = result.visible[t];
        for (const auto& id : kb.objectsOfType(t)) {
            if (seen.count(id)) {
                bucket.insert(id);
            }
        }
    }
    return result;
}

std::vector<TreeChild> treeChildren(const KnowledgeBase& kb, const std::string& objectId,
                                    const std::set<std::string>& enabledLinkTypeIds) {
    if (kb.findObject(objectId) == nullptr) {
        throw QueryError(QueryErrorCode::UnknownId, "no object '" + objectId + "'");
    }
    for (const auto& l : enabledLinkTypeIds) {
        if (kb.findLinkType(l) == nullptr) {
            throw QueryError(QueryErrorCode::UnknownId, "no link type '" + l + "'");
        }
    }
    std::vector<TreeChild> out;
    for (const auto& linkId : kb.outgoingLinks(objectId)) {
        const LinkObject& link = *kb.findLink(linkId);
        if (enabledLinkTypeIds.count(link.linkTypeId)) {
            out.push_back(TreeChild{kb.findLinkType(link.linkTypeId)->name, linkId, *kb.findObject(link.childId)});
        }
    }
    std::sort(out.begin(), out.end(), [](const TreeChild& a, const TreeChild& b) {
        return std::tie(a.linkTypeName, a.child.displayName, a.child.id) <
               std::tie(b.linkTypeName, b.child.displayName, b.child.id);
    });
    return out;
}

std::vector<KnowledgeObject> treeRoots(const KnowledgeBase& kb, const std::string& typeId) {
    if (kb.findType(typeId) == nullptr) {
        throw QueryError(QueryErrorCode::UnknownId, "no knowledge type '" + typeId + "'");
    }
    std::vector<KnowledgeObject> out;
    for (const auto& id : kb.objectsOfType(typeId)) {
        const auto& incoming = kb.incomingLinks(id);
        const bool nested = std::any_of(incoming.begin(), incoming.end(), [&](const std::string& linkId) {
            const LinkObject& link = *kb.findLink(linkId);
            return link.linkTypeId == builtin::Contains && kb.findObject(link.parentId)->typeId == typeId;
        });
        if (!nested) {
            out.push_back(*kb.findObject(id));
        }
    }
    std::sort(out.begin(), out.end(), [](const KnowledgeObject& a, const KnowledgeObject& b) {
        return std::tie(a.displayName, a.id) < std::tie(b.displayName, b.id);
    });
    return out;
}

}  // namespace tracegraph
