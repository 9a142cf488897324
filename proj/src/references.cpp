#include <set>
#include <string_view>

#include "parser_internal.hpp"

namespace tracegraph {

namespace {

const std::set<std::string_view>& predefinedTypes() {
    static const std::set<std::string_view> kTypes = {
        "bool", "byte",  "char",  "decimal", "double", "float",  "int",    "long",
        "object", "sbyte", "short", "string",  "uint",   "ulong", "ushort", "void"};
    return kTypes;
}

struct Cursor {
    std::span<const Token> t;

    bool punct(std::size_t k, std::string_view s) const { return k < t.size() && t[k].isPunct(s); }
    bool op(std::size_t k, std::string_view s) const { return k < t.size() && t[k].isOp(s); }
    bool keyword(std::size_t k, std::string_view s) const { return k < t.size() && t[k].isKeyword(s); }
    bool ident(std::size_t k) const { return k < t.size() && t[k].kind == TokenKind::Identifier; }
};

std::optional<std::size_t> scanTypeArguments(std::span<const Token> t, std::size_t open) {
    Cursor c{t};
    std::size_t k = open + 1;
    for (;;) {
        auto end = scanType(t, k);
        if (!end) {
            return std::nullopt;
        }
        k = *end;
        if (c.op(k, ",") || c.punct(k, ",")) {
            ++k;
            continue;
        }
        if (c.op(k, ">")) {
            return k + 1;
        }
        return std::nullopt;
    }
}

bool startsStatement(std::span<const Token> t, std::size_t j) {
    if (j == 0) {
        return false;
    }
    const Token& prev = t[j - 1];
    if (prev.kind == TokenKind::Punctuator &&
        (prev.text == "{" || prev.text == ";" || prev.text == "}" || prev.text == ":")) {
        return true;
    }
    if (prev.isPunct("(") && j >= 2 && t[j - 2].kind == TokenKind::Keyword) {
        const auto& kw = t[j - 2].text;
        return kw == "for" || kw == "foreach" || kw == "using" || kw == "catch" || kw == "fixed";
    }
    return false;
}

bool endsDeclarator(const Cursor& c, std::size_t k) {
    return c.op(k, "=") || c.punct(k, ";") || c.punct(k, ",") || c.keyword(k, "in") || c.punct(k, ")");
}

// Skips a declarator initializer; stops before `,`, `;` or an unmatched `)`.
std::size_t skipExpression(std::span<const Token> t, std::size_t k) {
    int depth = 0;
    for (; k < t.size(); ++k) {
        const Token& tk = t[k];
        if (tk.kind != TokenKind::Punctuator) {
            continue;
        }
        if (tk.text == "(" || tk.text == "[" || tk.text == "{") {
            ++depth;
        } else if (tk.text == ")" || tk.text == "]" || tk.text == "}") {
            if (depth == 0) {
                return k;
            }
            --depth;
        } else if (depth == 0 && (tk.text == "," || tk.text == ";")) {
            return k;
        }
    }
    return k;
}

std::size_t skipAngleGroup(std::span<const Token> t, std::size_t k) {
    int depth = 0;
    for (std::size_t m = k; m < t.size(); ++m) {
        if (t[m].isOp("<")) {
            ++depth;
        } else if (t[m].isOp(">")) {
            if (--depth == 0) {
                return m + 1;
            }
        } else if (t[m].kind == TokenKind::Punctuator && t[m].text != "." && t[m].text != "," &&
                   t[m].text != "[" && t[m].text != "]") {
            return k;
        }
    }
    return k;
}

}  // namespace

std::optional<std::size_t> scanType(std::span<const Token> t, std::size_t start) {
    Cursor c{t};
    if (start >= t.size()) {
        return std::nullopt;
    }
    std::size_t k = start;
    if (t[k].kind == TokenKind::Keyword && predefinedTypes().count(t[k].text)) {
        ++k;
    } else if (c.ident(k)) {
        ++k;
        for (;;) {
            if (c.op(k, "<")) {
                auto after = scanTypeArguments(t, k);
                if (!after) {
                    break;
                }
                k = *after;
            }
            if (c.punct(k, ".") && c.ident(k + 1)) {
                k += 2;
                continue;
            }
            break;
        }
    } else {
        return std::nullopt;
    }
    for (;;) {
        if (c.op(k, "?") || c.op(k, "*")) {
            ++k;
            continue;
        }
        if (c.punct(k, "[")) {
            std::size_t m = k + 1;
            while (c.punct(m, ",")) {
                ++m;
            }
            if (c.punct(m, "]")) {
                k = m + 1;
                continue;
            }
        }
        break;
    }
    return k;
}

LocalScan scanLocalDeclarations(std::span<const Token> body) {
    Cursor c{body};
    LocalScan scan;
    scan.declarationToken.assign(body.size(), false);
    for (std::size_t j = 0; j < body.size(); ++j) {
        if (!startsStatement(body, j)) {
            continue;
        }
        std::size_t k = c.keyword(j, "const") ? j + 1 : j;
        auto typeEnd = scanType(body, k);
        if (!typeEnd || !c.ident(*typeEnd) || !endsDeclarator(c, *typeEnd + 1)) {
            continue;
        }
        for (std::size_t m = k; m <= *typeEnd; ++m) {
            scan.declarationToken[m] = true;
        }
        scan.names.insert(body[*typeEnd].text);
        std::size_t m = *typeEnd + 1;
        for (;;) {
            if (c.op(m, "=")) {
                m = skipExpression(body, m + 1);
            }
            if (c.punct(m, ",") && c.ident(m + 1) && endsDeclarator(c, m + 2)) {
                scan.declarationToken[m + 1] = true;
                scan.names.insert(body[m + 1].text);
                m += 2;
                continue;
            }
            break;
        }
    }
    return scan;
}

NameSet collectLocals(std::span<const Token> body) { return scanLocalDeclarations(body).names; }

// Field names never suppress a reference; only a local of the same name does.
std::vector<Reference> extractReferences(std::span<const Token> body, const NameSet& locals,
                                         const NameSet& params, [[maybe_unused]] const NameSet& fields) {
    Cursor c{body};
    const LocalScan scan = scanLocalDeclarations(body);
    std::vector<Reference> refs;
    std::set<std::pair<RefKind, std::string>> seen;

    auto isLocal = [&](const std::string& name) { return locals.count(name) && !params.count(name); };
    auto emit = [&](RefKind kind, const std::string& name, const SourcePosition& pos) {
        if (seen.emplace(kind, name).second) {
            refs.push_back(Reference{kind, name, pos});
        }
    };

    for (std::size_t i = 0; i < body.size(); ++i) {
        if (!c.ident(i) || scan.declarationToken[i]) {
            continue;
        }
        const bool afterDot = i > 0 && body[i - 1].isPunct(".");
        const bool afterNew = i > 0 && body[i - 1].isKeyword("new");
        const bool afterSelf = afterDot && i >= 2 && (body[i - 2].isKeyword("this") || body[i - 2].isKeyword("base"));

        std::vector<std::size_t> segments{i};
        std::size_t k = i + 1;
        while (c.punct(k, ".") && c.ident(k + 1)) {
            segments.push_back(k + 1);
            k += 2;
        }
        const std::size_t last = segments.back();
        i = last;

        if (afterNew) {
            std::size_t after = last + 1;
            if (c.op(after, "<")) {
                after = skipAngleGroup(body, after);
            }
            if (c.punct(after, "(")) {
                std::string dotted;
                for (std::size_t s : segments) {
                    dotted += (dotted.empty() ? "" : ".") + body[s].text;
                }
                emit(RefKind::Instantiate, dotted, body[segments.front()].pos);
                i = after - 1;
            }
            continue;
        }

        // The head segment names something in scope; it is subject to the
        // locals filter unless reached through `this.`/`base.`.
        const bool hasHead = !afterDot || afterSelf;
        const Token& head = body[segments.front()];
        const bool headVisible = hasHead && (afterSelf || !isLocal(head.text));

        const bool chained = segments.size() > 1 || !hasHead;
        if (c.punct(last + 1, "(")) {
            if (chained || headVisible) {
                emit(RefKind::Call, body[last].text, body[last].pos);
            }
            if (segments.size() > 1 && headVisible) {
                emit(RefKind::Use, head.text, head.pos);
            }
        } else {
            if (headVisible) {
                emit(RefKind::Use, head.text, head.pos);
            }
            if (chained) {
                emit(RefKind::Use, body[last].text, body[last].pos);
            }
        }
    }
    return refs;
}

}  // namespace tracegraph
