#include "tracegraph/code_model.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "code_model_internal.hpp"

namespace tracegraph {

std::string_view to_string(Access a) {
    switch (a) {
        case Access::Public: return "public";
        case Access::Private: return "private";
        case Access::Other: return "other";
    }
    return "other";
}

std::string_view to_string(TypeKind k) {
    switch (k) {
        case TypeKind::Class: return "class";
        case TypeKind::Struct: return "struct";
        case TypeKind::Interface: return "interface";
    }
    return "class";
}

std::string_view to_string(RefKind k) {
    switch (k) {
        case RefKind::Call: return "Call";
        case RefKind::Use: return "Use";
        case RefKind::Instantiate: return "Instantiate";
    }
    return "Use";
}

Access parseAccess(std::string_view s) {
    if (s == "public") return Access::Public;
    if (s == "private") return Access::Private;
    if (s == "other") return Access::Other;
    throw std::invalid_argument("unknown access '" + std::string(s) + "'");
}

TypeKind parseTypeKind(std::string_view s) {
    if (s == "class") return TypeKind::Class;
    if (s == "struct") return TypeKind::Struct;
    if (s == "interface") return TypeKind::Interface;
    throw std::invalid_argument("unknown type kind '" + std::string(s) + "'");
}

RefKind parseRefKind(std::string_view s) {
    if (s == "Call") return RefKind::Call;
    if (s == "Use") return RefKind::Use;
    if (s == "Instantiate") return RefKind::Instantiate;
    throw std::invalid_argument("unknown reference kind '" + std::string(s) + "'");
}

std::vector<std::string> splitTypeList(std::string_view list) {
    std::vector<std::string> out;
    int depth = 0;
    std::string current;
    auto flush = [&] {
        auto b = current.find_first_not_of(' ');
        auto e = current.find_last_not_of(' ');
        if (b != std::string::npos) {
            out.push_back(current.substr(b, e - b + 1));
        }
        current.clear();
    };
    for (char c : list) {
        if (c == '<' || c == '[' || c == '(') {
            ++depth;
        } else if (c == '>' || c == ']' || c == ')') {
            --depth;
        } else if (c == ',' && depth == 0) {
            flush();
            continue;
        }
        current.push_back(c);
    }
    flush();
    return out;
}

std::string joinTypeList(const std::vector<std::string>& types) {
    std::string out;
    for (const auto& t : types) {
        if (!out.empty()) {
            out += ',';
        }
        out += t;
    }
    return out;
}

namespace {

int visibilityRank(Access a) {
    switch (a) {
        case Access::Public: return 2;
        case Access::Other: return 1;
        case Access::Private: return 0;
    }
    return 0;
}

template <typename T>
void append(std::vector<T>& into, std::vector<T>& from) {
    into.insert(into.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
    from.clear();
}

void mergeClassInto(ClassDecl& into, ClassDecl& from, const std::string& qualifiedName,
                    const ConflictHandler& onConflict) {
    if (into.kind != from.kind) {
        onConflict("class '" + qualifiedName + "' declared as both " +
                   std::string(to_string(into.kind)) + " and " + std::string(to_string(from.kind)));
    }
    if (visibilityRank(from.access) > visibilityRank(into.access)) {
        into.access = from.access;
    }
    for (auto& b : from.baseTypes) {
        if (std::find(into.baseTypes.begin(), into.baseTypes.end(), b) == into.baseTypes.end()) {
            into.baseTypes.push_back(b);
        }
    }
    append(into.constructors, from.constructors);
    append(into.methods, from.methods);
    append(into.properties, from.properties);
    append(into.fields, from.fields);
    append(into.events, from.events);
    append(into.nestedClasses, from.nestedClasses);
    append(into.delegates, from.delegates);
}

// Merges same-named classes in place, keeping first-declaration order.
void mergeClassList(std::vector<ClassDecl>& classes, const std::string& scope,
                    const ConflictHandler& onConflict) {
    std::vector<ClassDecl> merged;
    std::map<std::string, std::size_t> index;
    for (auto& c : classes) {
        auto [it, inserted] = index.emplace(c.name, merged.size());
        if (inserted) {
            merged.push_back(std::move(c));
        } else {
            mergeClassInto(merged[it->second], c, scope + "." + c.name, onConflict);
        }
    }
    classes = std::move(merged);
    for (auto& c : classes) {
        mergeClassList(c.nestedClasses, scope + "." + c.name, onConflict);
    }
}

template <typename T>
void sortByName(std::vector<T>& items) {
    std::stable_sort(items.begin(), items.end(),
                     [](const T& a, const T& b) { return a.name < b.name; });
}

// Assigns `scope.name` or `scope.name#k` to every item; items must already be
// sorted by name so equal names are adjacent.
template <typename T>
void assignNames(std::vector<T>& items, const std::string& scope) {
    for (std::size_t i = 0; i < items.size();) {
        std::size_t j = i;
        while (j < items.size() && items[j].name == items[i].name) {
            ++j;
        }
        for (std::size_t k = i; k < j; ++k) {
            items[k].qualifiedName = scope + "." + items[k].name;
            if (j - i > 1) {
                items[k].qualifiedName += "#" + std::to_string(k - i + 1);
            }
        }
        i = j;
    }
}

void nameParameters(std::vector<ParamDecl>& params, const std::string& scope) {
    std::map<std::string, int> total;
    for (const auto& p : params) {
        ++total[p.name];
    }
    std::map<std::string, int> seen;
    for (auto& p : params) {
        p.qualifiedName = scope + "." + p.name;
        if (total[p.name] > 1) {
            p.qualifiedName += "#" + std::to_string(++seen[p.name]);
        }
    }
}

void sortReferences(std::vector<Reference>& refs) { sortByName(refs); }

void canonicalizeClass(ClassDecl& c) {
    sortByName(c.constructors);
    sortByName(c.methods);
    sortByName(c.properties);
    sortByName(c.fields);
    sortByName(c.events);
    sortByName(c.nestedClasses);
    sortByName(c.delegates);
    assignNames(c.constructors, c.qualifiedName);
    assignNames(c.methods, c.qualifiedName);
    assignNames(c.properties, c.qualifiedName);
    assignNames(c.fields, c.qualifiedName);
    assignNames(c.events, c.qualifiedName);
    assignNames(c.nestedClasses, c.qualifiedName);
    assignNames(c.delegates, c.qualifiedName);
    for (auto& m : c.constructors) {
        nameParameters(m.parameters, m.qualifiedName);
        sortReferences(m.references);
    }
    for (auto& m : c.methods) {
        nameParameters(m.parameters, m.qualifiedName);
        sortReferences(m.references);
    }
    for (auto& p : c.properties) {
        sortReferences(p.references);
    }
    for (auto& n : c.nestedClasses) {
        canonicalizeClass(n);
    }
}

}  // namespace

void normalizeModel(CodeModel& model, const ConflictHandler& onConflict) {
    std::vector<NamespaceDecl> merged;
    std::map<std::string, std::size_t> index;
    for (auto& ns : model.namespaces) {
        auto [it, inserted] = index.emplace(ns.qualifiedName, merged.size());
        if (inserted) {
            merged.push_back(std::move(ns));
        } else {
            auto& target = merged[it->second];
            append(target.classes, ns.classes);
            append(target.delegates, ns.delegates);
        }
    }
    model.namespaces = std::move(merged);
    std::stable_sort(model.namespaces.begin(), model.namespaces.end(),
                     [](const auto& a, const auto& b) { return a.qualifiedName < b.qualifiedName; });
    for (auto& ns : model.namespaces) {
        mergeClassList(ns.classes, ns.qualifiedName, onConflict);
        sortByName(ns.classes);
        sortByName(ns.delegates);
        assignNames(ns.classes, ns.qualifiedName);
        assignNames(ns.delegates, ns.qualifiedName);
        for (auto& c : ns.classes) {
            canonicalizeClass(c);
        }
    }
}

void canonicalize(CodeModel& model) {
    normalizeModel(model, [](const std::string& message) { throw ConflictingDeclaration(message); });
}

CodeModel mergeModels(std::vector<CodeModel> models) {
    CodeModel out;
    for (auto& m : models) {
        append(out.namespaces, m.namespaces);
    }
    canonicalize(out);
    return out;
}

}  // namespace tracegraph
