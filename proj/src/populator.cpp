#include "tracegraph/populator.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace tracegraph {

std::size_t PopulationReport::objectCount() const {
    std::size_t n = 0;
    for (const auto& [type, count] : objectsPerType) n += count;
    return n;
}

std::size_t PopulationReport::linkCount() const {
    std::size_t n = 0;
    for (const auto& [type, count] : linksPerLinkType) n += count;
    return n;
}

namespace {

using NameIndex = std::unordered_map<std::string, std::vector<std::string>>;

// Resolution candidates visible from one scope.
struct Scope {
    NameIndex methods;
    NameIndex fields;
    NameIndex events;
};

struct ClassEntry {
    std::string qualifiedName;
    std::string objectId;
    std::size_t namespaceIndex = 0;
    std::vector<std::string> constructors;
    Scope scope;
};

// A member whose references become links.
struct Referrer {
    std::string objectId;
    std::size_t classIndex = 0;
    NameIndex parameters;
    const std::vector<Reference>* references = nullptr;
};

class Populator {
public:
    Populator(const CodeModel& model, KnowledgeBase& kb) : model_(model), kb_(kb) {}

    PopulationReport run() {
        namespaceScopes_.resize(model_.namespaces.size());
        for (std::size_t n = 0; n < model_.namespaces.size(); ++n) {
            const auto& ns = model_.namespaces[n];
            const std::string nsId = object(builtin::Namespace, ns.qualifiedName, ns.qualifiedName, Access::Other);
            for (const auto& d : ns.delegates) {
                contains(nsId, delegate(d));
            }
            for (const auto& cls : ns.classes) {
                contains(nsId, classDecl(cls, n));
            }
        }
        for (const auto& c : classes_) {
            merge(namespaceScopes_[c.namespaceIndex], c.scope);
            merge(modelScope_, c.scope);
        }
        for (const auto& r : referrers_) {
            resolve(r);
        }
        return std::move(report_);
    }

private:
    std::string object(std::string_view type, const std::string& qualifiedName, const std::string& displayName,
                       Access access, std::optional<std::string> kindTag = std::nullopt) {
        const std::string id = kb_.addObject(std::string(type), qualifiedName, displayName, access, kindTag).id;
        if (objects_.insert(id).second) {
            ++report_.objectsPerType[std::string(type)];
        }
        return id;
    }

    void link(std::string_view type, const std::string& parent, const std::string& child) {
        const std::string id = kb_.addLink(std::string(type), parent, child).id;
        if (links_.insert(id).second) {
            ++report_.linksPerLinkType[std::string(type)];
        }
    }

    void contains(const std::string& parent, const std::string& child) { link(builtin::Contains, parent, child); }

    std::string delegate(const DelegateDecl& d) {
        return object(builtin::Delegate, d.qualifiedName, d.name, d.access);
    }

    NameIndex parameters(const std::vector<ParamDecl>& params, const std::string& memberId) {
        NameIndex index;
        for (const auto& p : params) {
            const std::string id = object(builtin::Variable, p.qualifiedName, p.name, Access::Other, "parameter");
            ++report_.parameters;
            link(builtin::ParameterOf, id, memberId);
            index[p.name].push_back(id);
        }
        return index;
    }

    std::string classDecl(const ClassDecl& cls, std::size_t namespaceIndex) {
        const std::string classId = object(builtin::Class, cls.qualifiedName, cls.name, cls.access);
        const std::size_t index = classes_.size();
        classes_.push_back(ClassEntry{cls.qualifiedName, classId, namespaceIndex, {}, {}});

        for (const auto& c : cls.constructors) {
            const std::string id = object(builtin::Constructor, c.qualifiedName, c.name, c.access);
            contains(classId, id);
            classes_[index].constructors.push_back(id);
            referrers_.push_back(Referrer{id, index, parameters(c.parameters, id), &c.references});
        }
        for (const auto& m : cls.methods) {
            const std::string id = object(builtin::Method, m.qualifiedName, m.name, m.access);
            contains(classId, id);
            classes_[index].scope.methods[m.name].push_back(id);
            referrers_.push_back(Referrer{id, index, parameters(m.parameters, id), &m.references});
        }
        for (const auto& p : cls.properties) {
            const std::string id = object(builtin::Property, p.qualifiedName, p.name, p.access);
            contains(classId, id);
            referrers_.push_back(Referrer{id, index, {}, &p.references});
        }
        for (const auto& f : cls.fields) {
            const std::string id = object(builtin::Variable, f.qualifiedName, f.name, f.access, "field");
            contains(classId, id);
            classes_[index].scope.fields[f.name].push_back(id);
        }
        for (const auto& e : cls.events) {
            const std::string id = object(builtin::Event, e.qualifiedName, e.name, e.access);
            contains(classId, id);
            classes_[index].scope.events[e.name].push_back(id);
        }
        for (const auto& d : cls.delegates) {
            contains(classId, delegate(d));
        }
        for (const auto& nested : cls.nestedClasses) {
            contains(classId, classDecl(nested, namespaceIndex));
        }
        return classId;
    }

    static void merge(Scope& into, const Scope& from) {
        auto add = [](NameIndex& a, const NameIndex& b) {
            for (const auto& [name, ids] : b) {
                auto& list = a[name];
                list.insert(list.end(), ids.begin(), ids.end());
            }
        };
        add(into.methods, from.methods);
        add(into.fields, from.fields);
        add(into.events, from.events);
    }

    static const std::vector<std::string>* lookup(const NameIndex& index, const std::string& name) {
        auto it = index.find(name);
        return it == index.end() || it->second.empty() ? nullptr : &it->second;
    }

    // First non-empty tier among class, namespace, model.
    const std::vector<std::string>* tiered(const Referrer& r, NameIndex Scope::*which, const std::string& name) const {
        const ClassEntry& cls = classes_[r.classIndex];
        for (const Scope* s : {&cls.scope, &namespaceScopes_[cls.namespaceIndex], &modelScope_}) {
            if (auto* hit = lookup(s->*which, name)) {
                return hit;
            }
        }
        return nullptr;
    }

    // Constructors of the classes named by a `new` expression, by the first
    // tier (namespace, then model) where a matching class declares any.
    std::vector<std::string> constructorsOf(const std::string& name, std::size_t namespaceIndex,
                                            bool& ambiguous) const {
        auto matches = [&](const ClassEntry& c) {
            const auto& qn = c.qualifiedName;
            if (qn == name) return true;
            return qn.size() > name.size() && qn[qn.size() - name.size() - 1] == '.' &&
                   qn.compare(qn.size() - name.size(), name.size(), name) == 0;
        };
        for (bool sameNamespace : {true, false}) {
            std::vector<std::string> ctors;
            std::size_t classCount = 0;
            for (const auto& c : classes_) {
                if ((!sameNamespace || c.namespaceIndex == namespaceIndex) && matches(c) && !c.constructors.empty()) {
                    ++classCount;
                    ctors.insert(ctors.end(), c.constructors.begin(), c.constructors.end());
                }
            }
            if (!ctors.empty()) {
                ambiguous = classCount > 1;
                return ctors;
            }
        }
        return {};
    }

    void unresolved(const Referrer& r, const Reference& ref) {
        switch (ref.kind) {
            case RefKind::Call: ++report_.unresolvedCalls; break;
            case RefKind::Use: ++report_.unresolvedUses; break;
            case RefKind::Instantiate: ++report_.unresolvedInstantiations; break;
        }
        report_.unresolved.push_back(UnresolvedReference{ref.name, ref.kind, ref.pos, r.objectId});
    }

    void linkAll(std::string_view type, const std::string& from, const std::vector<std::string>& targets,
                 std::size_t& ambiguousCounter) {
        if (targets.size() > 1) {
            ++ambiguousCounter;
        }
        for (const auto& t : targets) {
            link(type, from, t);
        }
    }

    void resolve(const Referrer& r) {
        for (const auto& ref : *r.references) {
            switch (ref.kind) {
                case RefKind::Call:
                    if (auto* hit = tiered(r, &Scope::methods, ref.name)) {
                        linkAll(builtin::Calls, r.objectId, *hit, report_.ambiguousCalls);
                    } else {
                        unresolved(r, ref);
                    }
                    break;
                case RefKind::Use:
                    if (auto* param = lookup(r.parameters, ref.name)) {
                        linkAll(builtin::Uses, r.objectId, *param, report_.ambiguousUses);
                    } else if (auto* field = tiered(r, &Scope::fields, ref.name)) {
                        linkAll(builtin::Uses, r.objectId, *field, report_.ambiguousUses);
                    } else if (auto* event = tiered(r, &Scope::events, ref.name)) {
                        linkAll(builtin::Handles, r.objectId, *event, report_.ambiguousUses);
                    } else {
                        unresolved(r, ref);
                    }
                    break;
                case RefKind::Instantiate: {
                    bool ambiguous = false;
                    const auto ctors = constructorsOf(ref.name, classes_[r.classIndex].namespaceIndex, ambiguous);
                    if (ctors.empty()) {
                        unresolved(r, ref);
                        break;
                    }
                    if (ambiguous) {
                        ++report_.ambiguousInstantiations;
                    }
                    for (const auto& ctor : ctors) {
                        link(builtin::Instantiates, r.objectId, ctor);
                    }
                    break;
                }
            }
        }
    }

    const CodeModel& model_;
    KnowledgeBase& kb_;
    PopulationReport report_;
    std::set<std::string> objects_;
    std::set<std::string> links_;
    std::vector<ClassEntry> classes_;
    std::vector<Scope> namespaceScopes_;
    Scope modelScope_;
    std::vector<Referrer> referrers_;
};

std::string padded(std::string_view s, std::size_t width) {
    std::string out(s);
    if (out.size() < width) {
        out.append(width - out.size(), ' ');
    }
    return out;
}

}  // namespace

PopulationReport populate(const CodeModel& model, KnowledgeBase& kb) {
    if (!kb.hasBuiltins()) {
        throw KbError(KbErrorCode::MissingBuiltins, "knowledge base lacks the builtin type registry");
    }
    return Populator(model, kb).run();
}

std::string formatReport(const PopulationReport& report, const KnowledgeBase& kb) {
    constexpr std::size_t kWidth = 22;
    auto row = [&](std::string& out, std::string_view label, std::size_t n) {
        out += "  " + padded(label, kWidth) + std::to_string(n) + "\n";
    };
    auto count = [](const std::map<std::string, std::size_t>& m, const std::string& key) {
        auto it = m.find(key);
        return it == m.end() ? std::size_t{0} : it->second;
    };
    std::string out = "Objects\n";
    for (const auto& t : kb.types()) {
        row(out, t.name, count(report.objectsPerType, t.id));
    }
    row(out, "(of which parameters)", report.parameters);
    row(out, "total", report.objectCount());
    out += "Links\n";
    for (const auto& t : kb.linkTypes()) {
        row(out, t.name, count(report.linksPerLinkType, t.id));
    }
    row(out, "total", report.linkCount());
    out += "Unresolved references\n";
    row(out, "Call", report.unresolvedCalls);
    row(out, "Use", report.unresolvedUses);
    row(out, "Instantiate", report.unresolvedInstantiations);
    out += "Ambiguous references\n";
    row(out, "Call", report.ambiguousCalls);
    row(out, "Use", report.ambiguousUses);
    row(out, "Instantiate", report.ambiguousInstantiations);
    return out;
}

}  // namespace tracegraph
