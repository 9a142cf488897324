#pragma once

#include "tracegraph/lexer.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tracegraph {

enum class Access { Public, Private, Other };
enum class TypeKind { Class, Struct, Interface };
enum class RefKind { Call, Use, Instantiate };

std::string_view to_string(Access a);
std::string_view to_string(TypeKind k);
std::string_view to_string(RefKind k);

// Inverse of to_string; throw std::invalid_argument on unknown text.
Access parseAccess(std::string_view s);
TypeKind parseTypeKind(std::string_view s);
RefKind parseRefKind(std::string_view s);

struct Reference {
    RefKind kind = RefKind::Use;
    std::string name;
    SourcePosition pos;

    friend bool operator==(const Reference&, const Reference&) = default;
};

struct ParamDecl {
    std::string name;
    std::string typeName;
    std::string qualifiedName;

    friend bool operator==(const ParamDecl&, const ParamDecl&) = default;
};

struct MethodDecl {
    std::string name;
    std::string qualifiedName;
    Access access = Access::Private;
    std::string returnType;
    std::vector<ParamDecl> parameters;
    std::vector<Reference> references;
    bool isStatic = false;

    friend bool operator==(const MethodDecl&, const MethodDecl&) = default;
};

struct ConstructorDecl {
    std::string name;
    std::string qualifiedName;
    Access access = Access::Private;
    std::vector<ParamDecl> parameters;
    std::vector<Reference> references;
    bool isStatic = false;

    friend bool operator==(const ConstructorDecl&, const ConstructorDecl&) = default;
};

struct PropertyDecl {
    std::string name;
    std::string qualifiedName;
    Access access = Access::Private;
    std::string typeName;
    std::vector<Reference> references;  // from accessor bodies

    friend bool operator==(const PropertyDecl&, const PropertyDecl&) = default;
};

struct FieldDecl {
    std::string name;
    std::string qualifiedName;
    Access access = Access::Private;
    std::string typeName;

    friend bool operator==(const FieldDecl&, const FieldDecl&) = default;
};

struct EventDecl {
    std::string name;
    std::string qualifiedName;
    Access access = Access::Private;
    std::string typeName;

    friend bool operator==(const EventDecl&, const EventDecl&) = default;
};

struct DelegateDecl {
    std::string name;
    std::string qualifiedName;
    Access access = Access::Private;
    std::string signature;  // e.g. "void(object sender, EventArgs e)"

    friend bool operator==(const DelegateDecl&, const DelegateDecl&) = default;
};

struct ClassDecl {
    std::string name;
    std::string qualifiedName;
    Access access = Access::Other;
    TypeKind kind = TypeKind::Class;
    std::vector<std::string> baseTypes;
    std::vector<ConstructorDecl> constructors;
    std::vector<MethodDecl> methods;
    std::vector<PropertyDecl> properties;
    std::vector<FieldDecl> fields;
    std::vector<EventDecl> events;
    std::vector<ClassDecl> nestedClasses;
    std::vector<DelegateDecl> delegates;

    friend bool operator==(const ClassDecl&, const ClassDecl&) = default;
};

struct NamespaceDecl {
    std::string qualifiedName;
    std::vector<ClassDecl> classes;
    std::vector<DelegateDecl> delegates;

    friend bool operator==(const NamespaceDecl&, const NamespaceDecl&) = default;
};

/// Declarations outside any namespace land in this namespace.
inline constexpr std::string_view kGlobalNamespace = "global";

struct CodeModel {
    std::vector<NamespaceDecl> namespaces;

    bool empty() const { return namespaces.empty(); }
    friend bool operator==(const CodeModel&, const CodeModel&) = default;
};

/// Puts a model into canonical form: every declaration list is stably sorted
/// by name (parameters keep declaration order), duplicate namespaces are
/// merged, and qualified names are recomputed. Same-named members of one
/// category get `#k` suffixes (1-based, in declaration order).
void canonicalize(CodeModel& model);

/// Splits "A,B<C,D>" at top-level commas.
std::vector<std::string> splitTypeList(std::string_view list);
std::string joinTypeList(const std::vector<std::string>& types);

class ConflictingDeclaration : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unions partial models: equal namespaces merge, equal classes merge
/// member-wise. Throws ConflictingDeclaration when two same-named classes
/// disagree on kind.
CodeModel mergeModels(std::vector<CodeModel> models);

}  // namespace tracegraph
