#include "tracegraph/parser.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <utility>

#include "code_model_internal.hpp"
#include "parser_internal.hpp"

namespace tracegraph {

UnbalancedBraces::UnbalancedBraces(SourcePosition pos)
    : std::runtime_error("UnbalancedBraces at " + to_string(pos)), pos_(std::move(pos)) {}

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct Modifiers {
    std::optional<Access> access;
    bool isStatic = false;
    bool any = false;
};

enum class MemberCategory { Constructor, Method, Property };

struct PendingBody {
    MemberCategory category;
    std::size_t index;
    std::vector<std::pair<std::size_t, std::size_t>> bodies;  // [open, close] brace indices
    std::vector<bool> providesValue;                          // set/add/remove accessors
    NameSet params;
};

class FileParser {
public:
    explicit FileParser(std::span<const Token> tokens) : t_(tokens), match_(tokens.size(), npos) {}

    ParseResult run() {
        matchBraces();
        parseNamespaceBody("", false);
        normalizeModel(result_.model, [this](const std::string& message) {
            result_.diagnostics.push_back({message, t_.empty() ? SourcePosition{} : t_.front().pos});
        });
        return std::move(result_);
    }

private:
    // ---- token access -------------------------------------------------------

    const Token* at(std::size_t k) const { return k < t_.size() ? &t_[k] : nullptr; }
    bool punct(std::size_t k, std::string_view s) const { return k < t_.size() && t_[k].isPunct(s); }
    bool op(std::size_t k, std::string_view s) const { return k < t_.size() && t_[k].isOp(s); }
    bool keyword(std::size_t k, std::string_view s) const { return k < t_.size() && t_[k].isKeyword(s); }
    bool ident(std::size_t k) const { return k < t_.size() && t_[k].kind == TokenKind::Identifier; }
    bool ident(std::size_t k, std::string_view s) const { return ident(k) && t_[k].text == s; }

    SourcePosition posAt(std::size_t k) const {
        if (k < t_.size()) {
            return t_[k].pos;
        }
        return t_.empty() ? SourcePosition{} : t_.back().pos;
    }

    void diag(const std::string& message, std::size_t k) { result_.diagnostics.push_back({message, posAt(k)}); }

    void matchBraces() {
        std::vector<std::size_t> open;
        for (std::size_t k = 0; k < t_.size(); ++k) {
            if (t_[k].isPunct("{")) {
                open.push_back(k);
            } else if (t_[k].isPunct("}")) {
                if (open.empty()) {
                    throw UnbalancedBraces(t_[k].pos);
                }
                match_[open.back()] = k;
                match_[k] = open.back();
                open.pop_back();
            }
        }
        if (!open.empty()) {
            throw UnbalancedBraces(t_[open.back()].pos);
        }
    }

    // ---- skipping -----------------------------------------------------------

    // Consumes one declaration-shaped run: up to a `;` or through a braced
    // block, never past the `}` that closes the enclosing scope.
    void skipDeclaration() {
        const std::size_t start = i_;
        while (i_ < t_.size()) {
            if (punct(i_, "{")) {
                i_ = match_[i_] + 1;
                if (punct(i_, ";")) {
                    ++i_;
                }
                return;
            }
            if (punct(i_, "}")) {
                break;
            }
            if (punct(i_, ";")) {
                ++i_;
                return;
            }
            ++i_;
        }
        if (i_ == start && i_ < t_.size()) {
            ++i_;
        }
    }

    // Skips a balanced `<...>` group starting at k; returns the index after it
    // or npos when the group does not close before a statement boundary.
    std::size_t skipAngles(std::size_t k) const {
        int depth = 0;
        for (; k < t_.size(); ++k) {
            const Token& tk = t_[k];
            if (tk.isOp("<")) {
                ++depth;
            } else if (tk.isOp(">")) {
                if (--depth == 0) {
                    return k + 1;
                }
            } else if (tk.isPunct(";") || tk.isPunct("{") || tk.isPunct("}")) {
                return npos;
            }
        }
        return npos;
    }

    std::size_t findCloseParen(std::size_t open) const {
        int depth = 0;
        for (std::size_t k = open; k < t_.size(); ++k) {
            if (t_[k].isPunct("(")) {
                ++depth;
            } else if (t_[k].isPunct(")")) {
                if (--depth == 0) {
                    return k;
                }
            } else if (t_[k].isPunct("{") || t_[k].isPunct("}") || t_[k].isPunct(";")) {
                return npos;
            }
        }
        return npos;
    }

    // Skips an initializer expression up to (not including) a `,` or `;` at
    // nesting depth zero.
    void skipInitializer() {
        int depth = 0;
        while (i_ < t_.size()) {
            const Token& tk = t_[i_];
            if (tk.isPunct("{")) {
                i_ = match_[i_] + 1;
                continue;
            }
            if (tk.isPunct("}")) {
                return;
            }
            if (tk.isPunct("(") || tk.isPunct("[")) {
                ++depth;
            } else if (tk.isPunct(")") || tk.isPunct("]")) {
                if (depth > 0) {
                    --depth;
                }
            } else if (depth == 0 && (tk.isPunct(",") || tk.isPunct(";"))) {
                return;
            }
            ++i_;
        }
    }

    // ---- names and types ----------------------------------------------------

    std::optional<std::string> dottedName() {
        if (!ident(i_)) {
            return std::nullopt;
        }
        std::string name = t_[i_++].text;
        while (punct(i_, ".") && ident(i_ + 1)) {
            name += "." + t_[i_ + 1].text;
            i_ += 2;
        }
        return name;
    }

    std::optional<std::string> type() {
        auto end = scanType(t_, i_);
        if (!end) {
            return std::nullopt;
        }
        std::string text;
        for (std::size_t k = i_; k < *end; ++k) {
            text += t_[k].text;
        }
        i_ = *end;
        return text;
    }

    Modifiers modifiers() {
        static const std::set<std::string_view> kFlags = {
            "static", "virtual", "override", "abstract", "sealed", "readonly", "const",
            "new",    "extern",  "unsafe",   "volatile", "public", "private", "protected", "internal"};
        Modifiers m;
        bool isProtected = false, isInternal = false, isPublic = false, isPrivate = false;
        for (;;) {
            const Token* tk = at(i_);
            if (tk == nullptr) {
                break;
            }
            if (tk->kind == TokenKind::Keyword && kFlags.count(tk->text)) {
                isPublic |= tk->text == "public";
                isPrivate |= tk->text == "private";
                isProtected |= tk->text == "protected";
                isInternal |= tk->text == "internal";
                m.isStatic |= tk->text == "static" || tk->text == "const";
                m.any = true;
                ++i_;
                continue;
            }
            if (ident(i_, "partial") && (keyword(i_ + 1, "class") || keyword(i_ + 1, "struct") ||
                                         keyword(i_ + 1, "interface") || keyword(i_ + 1, "void"))) {
                m.any = true;
                ++i_;
                continue;
            }
            break;
        }
        if (isPublic) {
            m.access = Access::Public;
        } else if (isProtected || isInternal) {
            m.access = Access::Other;
        } else if (isPrivate) {
            m.access = Access::Private;
        }
        return m;
    }

    // ---- namespaces ---------------------------------------------------------

    std::size_t namespaceSlot(const std::string& name) {
        auto& nss = result_.model.namespaces;
        for (std::size_t k = 0; k < nss.size(); ++k) {
            if (nss[k].qualifiedName == name) {
                return k;
            }
        }
        nss.push_back(NamespaceDecl{name, {}, {}});
        return nss.size() - 1;
    }

    void parseNamespaceBody(const std::string& scope, bool braced) {
        while (i_ < t_.size()) {
            if (punct(i_, "}")) {
                if (braced) {
                    ++i_;
                    if (punct(i_, ";")) {
                        ++i_;
                    }
                    return;
                }
                // Unreachable with balanced braces; guard against looping.
                diag("unexpected '}'", i_);
                ++i_;
                continue;
            }
            if (punct(i_, ";")) {
                ++i_;
                continue;
            }
            if (keyword(i_, "using")) {
                skipDeclaration();
                continue;
            }
            if (keyword(i_, "namespace")) {
                const std::size_t start = i_++;
                auto name = dottedName();
                if (!name || !punct(i_, "{")) {
                    diag("malformed namespace declaration", start);
                    skipDeclaration();
                    continue;
                }
                ++i_;
                const std::string qualified = scope.empty() ? *name : scope + "." + *name;
                namespaceSlot(qualified);
                parseNamespaceBody(qualified, true);
                continue;
            }
            parseTopLevelType(scope.empty() ? std::string(kGlobalNamespace) : scope);
        }
        if (braced) {
            diag("namespace not closed", i_);
        }
    }

    void parseTopLevelType(const std::string& scope) {
        const std::size_t start = i_;
        Modifiers mods = modifiers();
        const Access access = mods.access.value_or(Access::Other);
        if (keyword(i_, "class") || keyword(i_, "struct") || keyword(i_, "interface")) {
            if (auto cls = parseClass(access, scope)) {
                result_.model.namespaces[namespaceSlot(scope)].classes.push_back(std::move(*cls));
            }
            return;
        }
        if (keyword(i_, "delegate")) {
            if (auto d = parseDelegate(access)) {
                result_.model.namespaces[namespaceSlot(scope)].delegates.push_back(std::move(*d));
            }
            return;
        }
        if (keyword(i_, "enum")) {
            diag("enum declarations are not modelled; skipped", i_);
        } else {
            diag("unsupported top-level construct", start);
        }
        skipDeclaration();
    }

    // ---- classes ------------------------------------------------------------

    std::optional<ClassDecl> parseClass(Access access, const std::string& scope) {
        ClassDecl cls;
        cls.access = access;
        const std::string& kw = t_[i_].text;
        cls.kind = kw == "struct" ? TypeKind::Struct : kw == "interface" ? TypeKind::Interface : TypeKind::Class;
        const std::size_t start = i_++;
        if (!ident(i_)) {
            diag("expected type name", i_);
            skipDeclaration();
            return std::nullopt;
        }
        cls.name = t_[i_++].text;
        cls.qualifiedName = scope + "." + cls.name;
        if (op(i_, "<")) {
            const std::size_t after = skipAngles(i_);
            if (after == npos) {
                diag("malformed type parameter list", i_);
                skipDeclaration();
                return std::nullopt;
            }
            i_ = after;
        }
        if (punct(i_, ":")) {
            ++i_;
            for (;;) {
                auto base = type();
                if (!base) {
                    break;
                }
                cls.baseTypes.push_back(*base);
                if (!punct(i_, ",")) {
                    break;
                }
                ++i_;
            }
        }
        while (i_ < t_.size() && !punct(i_, "{") && !punct(i_, ";") && !punct(i_, "}")) {
            ++i_;  // `where` constraints
        }
        if (!punct(i_, "{")) {
            diag("expected '{' after type header", start);
            skipDeclaration();
            return std::nullopt;
        }
        const std::size_t close = match_[i_];
        ++i_;
        parseClassBody(cls, close);
        i_ = close + 1;
        if (punct(i_, ";")) {
            ++i_;
        }
        return cls;
    }

    void parseClassBody(ClassDecl& cls, std::size_t close) {
        const Access memberDefault = cls.kind == TypeKind::Interface ? Access::Public : Access::Private;
        std::vector<PendingBody> pending;
        while (i_ < close) {
            const std::size_t start = i_;
            if (punct(i_, ";")) {
                ++i_;
                continue;
            }
            Modifiers mods = modifiers();
            const Access access = mods.access.value_or(memberDefault);
            if (i_ >= close) {
                diag("dangling modifiers", start);
                break;
            }
            if (keyword(i_, "class") || keyword(i_, "struct") || keyword(i_, "interface")) {
                if (auto nested = parseClass(mods.access.value_or(Access::Private), cls.qualifiedName)) {
                    cls.nestedClasses.push_back(std::move(*nested));
                }
                continue;
            }
            if (keyword(i_, "delegate")) {
                if (auto d = parseDelegate(access)) {
                    cls.delegates.push_back(std::move(*d));
                }
                continue;
            }
            if (keyword(i_, "event")) {
                parseEvent(cls, access);
                continue;
            }
            if (keyword(i_, "enum")) {
                diag("enum declarations are not modelled; skipped", i_);
                skipDeclaration();
                continue;
            }
            if (op(i_, "~")) {
                diag("finalizer skipped", i_);
                skipDeclaration();
                continue;
            }
            if (keyword(i_, "implicit") || keyword(i_, "explicit")) {
                diag("conversion operator skipped", i_);
                skipDeclaration();
                continue;
            }
            if (ident(i_, cls.name) && punct(i_ + 1, "(")) {
                parseConstructor(cls, access, mods.isStatic, pending);
                continue;
            }
            const std::size_t typeStart = i_;
            auto memberType = type();
            if (!memberType) {
                diag("unrecognised member", start);
                skipDeclaration();
                continue;
            }
            if (keyword(i_, "operator")) {
                diag("operator overload skipped", i_);
                skipDeclaration();
                continue;
            }
            if (keyword(i_, "this")) {
                diag("indexer skipped", i_);
                skipDeclaration();
                continue;
            }
            if (!ident(i_)) {
                diag("expected member name", typeStart);
                skipDeclaration();
                continue;
            }
            std::string name = t_[i_++].text;
            while (punct(i_, ".") && (ident(i_ + 1) || keyword(i_ + 1, "this"))) {
                if (keyword(i_ + 1, "this")) {
                    break;
                }
                name = t_[i_ + 1].text;  // explicit interface member: keep the member's own name
                i_ += 2;
            }
            if (punct(i_, ".")) {
                diag("indexer skipped", i_);
                skipDeclaration();
                continue;
            }
            if (op(i_, "<")) {
                const std::size_t after = skipAngles(i_);
                if (after != npos && punct(after, "(")) {
                    i_ = after;
                }
            }
            if (punct(i_, "(")) {
                parseMethod(cls, access, mods.isStatic, std::move(name), *memberType, pending);
            } else if (punct(i_, "{")) {
                parseProperty(cls, access, std::move(name), *memberType, pending);
            } else if (op(i_, "=") || punct(i_, ";") || punct(i_, ",")) {
                parseFields(cls, access, std::move(name), *memberType);
            } else {
                diag("unrecognised member", start);
                skipDeclaration();
            }
        }
        resolvePending(cls, pending);
    }

    std::optional<std::vector<ParamDecl>> parameters() {
        // i_ at '('
        const std::size_t close = findCloseParen(i_);
        if (close == npos) {
            diag("unterminated parameter list", i_);
            return std::nullopt;
        }
        std::vector<ParamDecl> params;
        ++i_;
        while (i_ < close) {
            while (keyword(i_, "ref") || keyword(i_, "out") || keyword(i_, "params") || keyword(i_, "this")) {
                ++i_;
            }
            auto ptype = type();
            if (!ptype || !ident(i_)) {
                diag("malformed parameter", i_);
                i_ = close + 1;
                return params;
            }
            params.push_back(ParamDecl{t_[i_].text, *ptype, {}});
            ++i_;
            while (i_ < close && !punct(i_, ",")) {
                ++i_;  // default value
            }
            if (punct(i_, ",")) {
                ++i_;
            }
        }
        i_ = close + 1;
        return params;
    }

    // After a parameter list: constraints, constructor initializers, then a
    // body or `;`. Returns [open, close] of the body, the initializer span,
    // or nullopt for bodiless members.
    struct BodySpans {
        std::optional<std::pair<std::size_t, std::size_t>> initializer;
        std::optional<std::pair<std::size_t, std::size_t>> body;
        bool ok = true;
    };

    BodySpans memberBody() {
        BodySpans spans;
        const std::size_t headerStart = i_;
        if (punct(i_, ":")) {
            ++i_;
        }
        while (i_ < t_.size() && !punct(i_, "{") && !punct(i_, ";") && !punct(i_, "}")) {
            ++i_;
        }
        if (i_ > headerStart) {
            spans.initializer = std::make_pair(headerStart, i_);
        }
        if (punct(i_, ";")) {
            ++i_;
            return spans;
        }
        if (!punct(i_, "{")) {
            diag("expected member body", i_);
            spans.ok = false;
            return spans;
        }
        spans.body = std::make_pair(i_, match_[i_]);
        i_ = match_[i_] + 1;
        return spans;
    }

    void addPending(std::vector<PendingBody>& pending, MemberCategory cat, std::size_t index,
                    const BodySpans& spans, const std::vector<ParamDecl>& params) {
        PendingBody p{cat, index, {}, {}, {}};
        for (const auto& prm : params) {
            p.params.insert(prm.name);
        }
        if (spans.initializer) {
            // Initializers only ever pass arguments; treat them as a body.
            p.bodies.push_back({spans.initializer->first, spans.initializer->second - 1});
            p.providesValue.push_back(false);
        }
        if (spans.body) {
            p.bodies.push_back(*spans.body);
            p.providesValue.push_back(false);
        }
        pending.push_back(std::move(p));
    }

    void parseConstructor(ClassDecl& cls, Access access, bool isStatic, std::vector<PendingBody>& pending) {
        ConstructorDecl ctor;
        ctor.name = t_[i_++].text;
        ctor.access = access;
        ctor.isStatic = isStatic;
        auto params = parameters();
        if (!params) {
            skipDeclaration();
            return;
        }
        ctor.parameters = std::move(*params);
        BodySpans spans = memberBody();
        if (!spans.ok) {
            skipDeclaration();
        }
        addPending(pending, MemberCategory::Constructor, cls.constructors.size(), spans, ctor.parameters);
        cls.constructors.push_back(std::move(ctor));
    }

    void parseMethod(ClassDecl& cls, Access access, bool isStatic, std::string name, const std::string& returnType,
                     std::vector<PendingBody>& pending) {
        MethodDecl m;
        m.name = std::move(name);
        m.access = access;
        m.isStatic = isStatic;
        m.returnType = returnType;
        auto params = parameters();
        if (!params) {
            skipDeclaration();
            return;
        }
        m.parameters = std::move(*params);
        BodySpans spans = memberBody();
        if (!spans.ok) {
            skipDeclaration();
        }
        spans.initializer.reset();  // `where` clauses carry no references
        addPending(pending, MemberCategory::Method, cls.methods.size(), spans, m.parameters);
        cls.methods.push_back(std::move(m));
    }

    void parseProperty(ClassDecl& cls, Access access, std::string name, const std::string& typeName,
                       std::vector<PendingBody>& pending) {
        PropertyDecl prop{std::move(name), {}, access, typeName, {}};
        const std::size_t close = match_[i_];
        PendingBody p{MemberCategory::Property, cls.properties.size(), {}, {}, {}};
        ++i_;
        while (i_ < close) {
            modifiers();
            if (ident(i_) && (punct(i_ + 1, "{") || punct(i_ + 1, ";"))) {
                const bool setter = t_[i_].text == "set";
                ++i_;
                if (punct(i_, "{")) {
                    p.bodies.push_back({i_, match_[i_]});
                    p.providesValue.push_back(setter);
                    i_ = match_[i_] + 1;
                } else {
                    ++i_;
                }
                continue;
            }
            diag("unrecognised accessor", i_);
            break;
        }
        i_ = close + 1;
        if (op(i_, "=")) {
            skipInitializer();
            if (punct(i_, ";")) {
                ++i_;
            }
        }
        pending.push_back(std::move(p));
        cls.properties.push_back(std::move(prop));
    }

    void parseFields(ClassDecl& cls, Access access, std::string firstName, const std::string& typeName) {
        std::string name = std::move(firstName);
        for (;;) {
            cls.fields.push_back(FieldDecl{name, {}, access, typeName});
            if (op(i_, "=")) {
                ++i_;
                skipInitializer();
            }
            if (punct(i_, ",") && ident(i_ + 1)) {
                name = t_[i_ + 1].text;
                i_ += 2;
                continue;
            }
            break;
        }
        if (punct(i_, ";")) {
            ++i_;
        } else {
            diag("expected ';' after field declaration", i_);
            skipDeclaration();
        }
    }

    void parseEvent(ClassDecl& cls, Access access) {
        const std::size_t start = i_++;
        auto typeName = type();
        if (!typeName || !ident(i_)) {
            diag("malformed event declaration", start);
            skipDeclaration();
            return;
        }
        for (;;) {
            std::string name = t_[i_++].text;
            while (punct(i_, ".") && ident(i_ + 1)) {
                name = t_[i_ + 1].text;
                i_ += 2;
            }
            cls.events.push_back(EventDecl{name, {}, access, *typeName});
            if (op(i_, "=")) {
                ++i_;
                skipInitializer();
            }
            if (punct(i_, ",") && ident(i_ + 1)) {
                ++i_;
                continue;
            }
            break;
        }
        if (punct(i_, "{")) {
            i_ = match_[i_] + 1;  // add/remove accessors
        } else if (punct(i_, ";")) {
            ++i_;
        } else {
            diag("expected ';' after event declaration", i_);
            skipDeclaration();
        }
    }

    std::optional<DelegateDecl> parseDelegate(Access access) {
        const std::size_t start = i_++;
        auto ret = type();
        if (!ret || !ident(i_)) {
            diag("malformed delegate declaration", start);
            skipDeclaration();
            return std::nullopt;
        }
        DelegateDecl d;
        d.name = t_[i_++].text;
        d.access = access;
        if (op(i_, "<")) {
            const std::size_t after = skipAngles(i_);
            if (after != npos) {
                i_ = after;
            }
        }
        if (!punct(i_, "(")) {
            diag("expected delegate parameter list", i_);
            skipDeclaration();
            return std::nullopt;
        }
        auto params = parameters();
        if (!params) {
            skipDeclaration();
            return std::nullopt;
        }
        std::string sig = *ret + "(";
        for (std::size_t k = 0; k < params->size(); ++k) {
            if (k > 0) {
                sig += ", ";
            }
            sig += (*params)[k].typeName + " " + (*params)[k].name;
        }
        d.signature = sig + ")";
        while (i_ < t_.size() && !punct(i_, ";") && !punct(i_, "{") && !punct(i_, "}")) {
            ++i_;
        }
        if (punct(i_, ";")) {
            ++i_;
        } else {
            diag("expected ';' after delegate declaration", i_);
            skipDeclaration();
        }
        return d;
    }

    void resolvePending(ClassDecl& cls, const std::vector<PendingBody>& pending) {
        NameSet fields;
        for (const auto& f : cls.fields) {
            fields.insert(f.name);
        }
        for (const auto& p : pending) {
            std::vector<Reference> refs;
            std::set<std::pair<RefKind, std::string>> seen;
            NameSet locals;
            for (std::size_t b = 0; b < p.bodies.size(); ++b) {
                auto span = t_.subspan(p.bodies[b].first, p.bodies[b].second - p.bodies[b].first + 1);
                NameSet bodyLocals = collectLocals(span);
                if (p.providesValue[b]) {
                    bodyLocals.insert("value");
                }
                locals.insert(bodyLocals.begin(), bodyLocals.end());
            }
            for (const auto& body : p.bodies) {
                auto span = t_.subspan(body.first, body.second - body.first + 1);
                for (auto& r : extractReferences(span, locals, p.params, fields)) {
                    if (seen.emplace(r.kind, r.name).second) {
                        refs.push_back(std::move(r));
                    }
                }
            }
            switch (p.category) {
                case MemberCategory::Constructor: cls.constructors[p.index].references = std::move(refs); break;
                case MemberCategory::Method: cls.methods[p.index].references = std::move(refs); break;
                case MemberCategory::Property: cls.properties[p.index].references = std::move(refs); break;
            }
        }
    }

    std::span<const Token> t_;
    std::vector<std::size_t> match_;
    std::size_t i_ = 0;
    ParseResult result_;
};

}  // namespace

ParseResult parseFile(std::span<const Token> tokens) { return FileParser(tokens).run(); }

}  // namespace tracegraph
