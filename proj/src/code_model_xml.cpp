#include "tracegraph/code_model_xml.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <set>

#include "xml_reader.hpp"

namespace tracegraph {

namespace {

using xml::Element;

// ---- emission ---------------------------------------------------------------

template <typename T>
std::vector<const T*> sortedByName(const std::vector<T>& items) {
    std::vector<const T*> out;
    out.reserve(items.size());
    for (const auto& item : items) {
        out.push_back(&item);
    }
    std::stable_sort(out.begin(), out.end(), [](const T* a, const T* b) { return a->name < b->name; });
    return out;
}

Element node(std::string name, std::vector<std::pair<std::string, std::string>> attrs) {
    Element el;
    el.name = std::move(name);
    el.attributes = std::move(attrs);
    return el;
}

void addReferences(Element& parent, const std::vector<Reference>& refs) {
    for (const Reference* r : sortedByName(refs)) {
        parent.children.push_back(node("Reference", {{"name", r->name},
                                                     {"refKind", std::string(to_string(r->kind))},
                                                     {"line", std::to_string(r->pos.line)},
                                                     {"column", std::to_string(r->pos.column)},
                                                     {"file", r->pos.file}}));
    }
}

void addParameters(Element& parent, const std::vector<ParamDecl>& params) {
    for (const auto& p : params) {
        parent.children.push_back(
            node("Parameter", {{"name", p.name}, {"qualifiedName", p.qualifiedName}, {"type", p.typeName}}));
    }
}

Element delegateNode(const DelegateDecl& d) {
    return node("Delegate", {{"name", d.name},
                             {"qualifiedName", d.qualifiedName},
                             {"access", std::string(to_string(d.access))},
                             {"signature", d.signature}});
}

Element classNode(const ClassDecl& c) {
    std::vector<std::pair<std::string, std::string>> attrs = {{"name", c.name},
                                                              {"qualifiedName", c.qualifiedName},
                                                              {"access", std::string(to_string(c.access))},
                                                              {"kind", std::string(to_string(c.kind))}};
    if (!c.baseTypes.empty()) {
        attrs.emplace_back("type", joinTypeList(c.baseTypes));
    }
    Element el = node("Class", std::move(attrs));
    // Element names in alphabetical order.
    for (const ClassDecl* n : sortedByName(c.nestedClasses)) {
        el.children.push_back(classNode(*n));
    }
    for (const ConstructorDecl* m : sortedByName(c.constructors)) {
        std::vector<std::pair<std::string, std::string>> a = {
            {"name", m->name}, {"qualifiedName", m->qualifiedName}, {"access", std::string(to_string(m->access))}};
        if (m->isStatic) {
            a.emplace_back("kind", "static");
        }
        Element ctor = node("Constructor", std::move(a));
        addParameters(ctor, m->parameters);
        addReferences(ctor, m->references);
        el.children.push_back(std::move(ctor));
    }
    for (const DelegateDecl* d : sortedByName(c.delegates)) {
        el.children.push_back(delegateNode(*d));
    }
    for (const EventDecl* e : sortedByName(c.events)) {
        el.children.push_back(node("Event", {{"name", e->name},
                                             {"qualifiedName", e->qualifiedName},
                                             {"access", std::string(to_string(e->access))},
                                             {"type", e->typeName}}));
    }
    for (const MethodDecl* m : sortedByName(c.methods)) {
        std::vector<std::pair<std::string, std::string>> a = {
            {"name", m->name}, {"qualifiedName", m->qualifiedName}, {"access", std::string(to_string(m->access))}};
        if (m->isStatic) {
            a.emplace_back("kind", "static");
        }
        a.emplace_back("returnType", m->returnType);
        Element method = node("Method", std::move(a));
        addParameters(method, m->parameters);
        addReferences(method, m->references);
        el.children.push_back(std::move(method));
    }
    for (const PropertyDecl* p : sortedByName(c.properties)) {
        Element prop = node("Property", {{"name", p->name},
                                         {"qualifiedName", p->qualifiedName},
                                         {"access", std::string(to_string(p->access))},
                                         {"type", p->typeName}});
        addReferences(prop, p->references);
        el.children.push_back(std::move(prop));
    }
    for (const FieldDecl* f : sortedByName(c.fields)) {
        el.children.push_back(node("Variable", {{"name", f->name},
                                                {"qualifiedName", f->qualifiedName},
                                                {"access", std::string(to_string(f->access))},
                                                {"kind", "field"},
                                                {"type", f->typeName}}));
    }
    return el;
}

void write(std::string& out, const Element& el, int depth) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += '<';
    out += el.name;
    for (const auto& [k, v] : el.attributes) {
        out += ' ';
        out += k;
        out += "=\"";
        out += xml::escape(v);
        out += '"';
    }
    if (el.children.empty()) {
        out += "/>\n";
        return;
    }
    out += ">\n";
    for (const auto& child : el.children) {
        write(out, child, depth + 1);
    }
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += "</" + el.name + ">\n";
}

// ---- reading ----------------------------------------------------------------

[[noreturn]] void violation(const Element& el, const std::string& what) {
    throw SchemaViolation("line " + std::to_string(el.line) + " <" + el.name + ">: " + what);
}

class ElementReader {
public:
    ElementReader(const Element& el, std::set<std::string_view> allowed) : el_(el) {
        for (const auto& [k, v] : el.attributes) {
            if (!allowed.count(k)) {
                violation(el, "unknown attribute '" + k + "'");
            }
        }
    }

    std::string required(std::string_view key) const {
        const std::string* v = el_.attribute(key);
        if (v == nullptr) {
            violation(el_, "missing required attribute '" + std::string(key) + "'");
        }
        return *v;
    }

    std::string optional(std::string_view key, std::string fallback = {}) const {
        const std::string* v = el_.attribute(key);
        return v ? *v : std::move(fallback);
    }

    std::string name() const {
        std::string n = required("name");
        if (n.empty()) {
            violation(el_, "empty name");
        }
        return n;
    }

    template <typename Fn>
    auto parsed(std::string_view key, Fn fn, decltype(fn(std::string_view{})) fallback) const {
        const std::string* v = el_.attribute(key);
        if (v == nullptr) {
            return fallback;
        }
        try {
            return fn(*v);
        } catch (const std::invalid_argument& e) {
            violation(el_, e.what());
        }
    }

    Access access(Access fallback) const { return parsed("access", parseAccess, fallback); }

    std::uint32_t number(std::string_view key) const {
        const std::string* v = el_.attribute(key);
        if (v == nullptr) {
            return 1;
        }
        std::uint32_t n = 0;
        auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), n);
        if (ec != std::errc{} || p != v->data() + v->size() || n == 0) {
            violation(el_, "attribute '" + std::string(key) + "' must be a positive integer");
        }
        return n;
    }

    bool isStatic() const {
        const std::string kind = optional("kind");
        if (!kind.empty() && kind != "static") {
            violation(el_, "kind must be 'static' when present");
        }
        return kind == "static";
    }

private:
    const Element& el_;
};

std::string qualifiedNameOf(const ElementReader& r) { return r.optional("qualifiedName"); }

template <typename T>
bool anyUnnamed(const std::vector<T>& items) {
    return std::any_of(items.begin(), items.end(), [](const T& x) { return x.qualifiedName.empty(); });
}

bool anyUnnamed(const ClassDecl& c) {
    if (c.qualifiedName.empty() || anyUnnamed(c.constructors) || anyUnnamed(c.methods) ||
        anyUnnamed(c.properties) || anyUnnamed(c.fields) || anyUnnamed(c.events) || anyUnnamed(c.delegates)) {
        return true;
    }
    for (const auto& m : c.methods) {
        if (anyUnnamed(m.parameters)) return true;
    }
    for (const auto& m : c.constructors) {
        if (anyUnnamed(m.parameters)) return true;
    }
    return std::any_of(c.nestedClasses.begin(), c.nestedClasses.end(),
                       [](const ClassDecl& n) { return anyUnnamed(n); });
}

bool anyUnnamed(const CodeModel& model) {
    for (const auto& ns : model.namespaces) {
        if (anyUnnamed(ns.delegates)) return true;
        for (const auto& c : ns.classes) {
            if (anyUnnamed(c)) return true;
        }
    }
    return false;
}

std::vector<Reference> readMemberChildren(const Element& el, std::vector<ParamDecl>* params) {
    std::vector<Reference> refs;
    for (const auto& child : el.children) {
        if (child.name == "Parameter" && params != nullptr) {
            ElementReader r(child, {"name", "qualifiedName", "type"});
            params->push_back(ParamDecl{r.name(), r.optional("type"), qualifiedNameOf(r)});
        } else if (child.name == "Reference") {
            ElementReader r(child, {"name", "refKind", "line", "column", "file"});
            Reference ref;
            ref.name = r.name();
            ref.kind = r.parsed("refKind", parseRefKind, RefKind::Use);
            if (child.attribute("refKind") == nullptr) {
                violation(child, "missing required attribute 'refKind'");
            }
            ref.pos.line = r.number("line");
            ref.pos.column = r.number("column");
            ref.pos.file = r.optional("file");
            refs.push_back(std::move(ref));
        } else {
            violation(child, "not allowed inside <" + el.name + ">");
        }
    }
    return refs;
}

DelegateDecl readDelegate(const Element& el) {
    ElementReader r(el, {"name", "qualifiedName", "access", "signature"});
    if (!el.children.empty()) {
        violation(el, "<Delegate> has no children");
    }
    return DelegateDecl{r.name(), qualifiedNameOf(r), r.access(Access::Private), r.optional("signature")};
}

ClassDecl readClass(const Element& el, Access defaultAccess) {
    ElementReader r(el, {"name", "qualifiedName", "access", "kind", "type"});
    ClassDecl c;
    c.name = r.name();
    c.qualifiedName = qualifiedNameOf(r);
    c.access = r.access(defaultAccess);
    c.kind = r.parsed("kind", parseTypeKind, TypeKind::Class);
    c.baseTypes = splitTypeList(r.optional("type"));
    for (const auto& child : el.children) {
        if (child.name == "Class") {
            c.nestedClasses.push_back(readClass(child, Access::Private));
        } else if (child.name == "Constructor") {
            ElementReader cr(child, {"name", "qualifiedName", "access", "kind"});
            ConstructorDecl ctor;
            ctor.name = cr.name();
            ctor.qualifiedName = qualifiedNameOf(cr);
            ctor.access = cr.access(Access::Private);
            ctor.isStatic = cr.isStatic();
            ctor.references = readMemberChildren(child, &ctor.parameters);
            c.constructors.push_back(std::move(ctor));
        } else if (child.name == "Method") {
            ElementReader mr(child, {"name", "qualifiedName", "access", "kind", "returnType"});
            MethodDecl m;
            m.name = mr.name();
            m.qualifiedName = qualifiedNameOf(mr);
            m.access = mr.access(Access::Private);
            m.isStatic = mr.isStatic();
            m.returnType = mr.optional("returnType");
            m.references = readMemberChildren(child, &m.parameters);
            c.methods.push_back(std::move(m));
        } else if (child.name == "Property") {
            ElementReader pr(child, {"name", "qualifiedName", "access", "type"});
            PropertyDecl p;
            p.name = pr.name();
            p.qualifiedName = qualifiedNameOf(pr);
            p.access = pr.access(Access::Private);
            p.typeName = pr.optional("type");
            p.references = readMemberChildren(child, nullptr);
            c.properties.push_back(std::move(p));
        } else if (child.name == "Variable") {
            ElementReader vr(child, {"name", "qualifiedName", "access", "kind", "type"});
            if (vr.optional("kind", "field") != "field") {
                violation(child, "only field variables are declared at class level");
            }
            if (!child.children.empty()) {
                violation(child, "<Variable> has no children");
            }
            c.fields.push_back(
                FieldDecl{vr.name(), qualifiedNameOf(vr), vr.access(Access::Private), vr.optional("type")});
        } else if (child.name == "Event") {
            ElementReader er(child, {"name", "qualifiedName", "access", "type"});
            if (!child.children.empty()) {
                violation(child, "<Event> has no children");
            }
            c.events.push_back(
                EventDecl{er.name(), qualifiedNameOf(er), er.access(Access::Private), er.optional("type")});
        } else if (child.name == "Delegate") {
            c.delegates.push_back(readDelegate(child));
        } else {
            violation(child, "not allowed inside <Class>");
        }
    }
    return c;
}

}  // namespace

std::string emitXml(const CodeModel& model) {
    Element root = node("CodeModel", {{"version", std::string(kCodeModelXmlVersion)}});
    std::vector<const NamespaceDecl*> namespaces;
    for (const auto& ns : model.namespaces) {
        namespaces.push_back(&ns);
    }
    std::stable_sort(namespaces.begin(), namespaces.end(),
                     [](const auto* a, const auto* b) { return a->qualifiedName < b->qualifiedName; });
    for (const NamespaceDecl* ns : namespaces) {
        Element el = node("Namespace", {{"name", ns->qualifiedName}, {"qualifiedName", ns->qualifiedName}});
        for (const ClassDecl* c : sortedByName(ns->classes)) {
            el.children.push_back(classNode(*c));
        }
        for (const DelegateDecl* d : sortedByName(ns->delegates)) {
            el.children.push_back(delegateNode(*d));
        }
        root.children.push_back(std::move(el));
    }
    std::string out;
    write(out, root, 0);
    return out;
}

CodeModel parseXml(std::string_view document) {
    Element root;
    try {
        root = xml::parseDocument(document);
    } catch (const xml::ParseError& e) {
        throw SchemaViolation(std::string("malformed XML: ") + e.what());
    }
    if (root.name != "CodeModel") {
        violation(root, "root element must be <CodeModel>");
    }
    ElementReader rootReader(root, {"version"});
    const std::string version = rootReader.required("version");
    if (version != kCodeModelXmlVersion) {
        throw VersionMismatch("code model version '" + version + "' is not supported (expected " +
                              std::string(kCodeModelXmlVersion) + ")");
    }
    CodeModel model;
    for (const auto& nsEl : root.children) {
        if (nsEl.name != "Namespace") {
            violation(nsEl, "not allowed inside <CodeModel>");
        }
        ElementReader r(nsEl, {"name", "qualifiedName"});
        NamespaceDecl ns;
        const std::string name = r.name();
        ns.qualifiedName = r.optional("qualifiedName", name);
        for (const auto& child : nsEl.children) {
            if (child.name == "Class") {
                ns.classes.push_back(readClass(child, Access::Other));
            } else if (child.name == "Delegate") {
                ns.delegates.push_back(readDelegate(child));
            } else {
                violation(child, "not allowed inside <Namespace>");
            }
        }
        model.namespaces.push_back(std::move(ns));
    }
    // Hand-written documents may omit qualified names; derive them.
    if (anyUnnamed(model)) {
        canonicalize(model);
    }
    return model;
}

}  // namespace tracegraph
