#include "tracegraph/dot_export.hpp"

#include <deque>
#include <map>
#include <set>

namespace tracegraph {

namespace {

std::string quoted(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n') {
            out += "\\n";
        } else if (c == '\r') {
            continue;
        } else {
            out += c;
        }
    }
    return out + '"';
}

class DotWriter {
public:
    explicit DotWriter(const KnowledgeBase& kb) : kb_(kb) {}

    std::string run() {
        buildForest();
        out_ = "digraph tracegraph {\n  node [shape=box, fontname=\"Helvetica\"];\n";
        for (const auto& root : roots_) {
            write(root, 1);
        }
        for (const auto& [id, link] : kb_.links()) {
            if (treeLinks_.count(id)) {
                continue;
            }
            out_ += "  " + quoted(link.parentId) + " -> " + quoted(link.childId) +
                    " [label=" + quoted(kb_.findLinkType(link.linkTypeId)->name) + "];\n";
        }
        out_ += "}\n";
        return std::move(out_);
    }

private:
    // Breadth-first from uncontained objects; an object keeps the first
    // parent that reaches it. Objects only reachable through a Contains cycle
    // start their own tree.
    void buildForest() {
        std::set<std::string> placed;
        auto grow = [&](const std::string& root) {
            roots_.push_back(root);
            placed.insert(root);
            std::deque<std::string> queue{root};
            while (!queue.empty()) {
                const std::string id = queue.front();
                queue.pop_front();
                for (const auto& linkId : kb_.outgoingLinks(id)) {
                    const LinkObject& link = *kb_.findLink(linkId);
                    if (link.linkTypeId == builtin::Contains && placed.insert(link.childId).second) {
                        children_[id].push_back(link.childId);
                        treeLinks_.insert(linkId);
                        queue.push_back(link.childId);
                    }
                }
            }
        };
        for (const auto& [id, obj] : kb_.objects()) {
            bool contained = false;
            for (const auto& linkId : kb_.incomingLinks(id)) {
                contained = contained || kb_.findLink(linkId)->linkTypeId == builtin::Contains;
            }
            if (!contained) {
                grow(id);
            }
        }
        for (const auto& [id, obj] : kb_.objects()) {
            if (!placed.count(id)) {
                grow(id);
            }
        }
    }

    void node(const KnowledgeObject& o, const std::string& indent) {
        out_ += indent + quoted(o.id) + " [label=" + quoted(o.displayName + "\n" + o.typeId) + "];\n";
    }

    void write(const std::string& id, int depth) {
        const std::string indent(2 * static_cast<std::size_t>(depth), ' ');
        const KnowledgeObject& o = *kb_.findObject(id);
        auto it = children_.find(id);
        if (it == children_.end()) {
            node(o, indent);
            return;
        }
        out_ += indent + "subgraph " + quoted("cluster_" + std::to_string(clusterCount_++)) + " {\n";
        out_ += indent + "  label=" + quoted(o.typeId + " " + o.displayName) + ";\n";
        node(o, indent + "  ");
        for (const auto& child : it->second) {
            write(child, depth + 1);
        }
        out_ += indent + "}\n";
    }

    const KnowledgeBase& kb_;
    std::vector<std::string> roots_;
    std::map<std::string, std::vector<std::string>> children_;
    std::set<std::string> treeLinks_;
    std::size_t clusterCount_ = 0;
    std::string out_;
};

}  // namespace

std::string exportDot(const KnowledgeBase& kb) { return DotWriter(kb).run(); }

}  // namespace tracegraph
