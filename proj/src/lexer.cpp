#include "tracegraph/lexer.hpp"

#include <algorithm>
#include <array>
#include <optional>

namespace tracegraph {

namespace {

// C# 1.0 reserved words, sorted for binary search.
constexpr auto kKeywords = std::to_array<std::string_view>({
    "abstract", "as",       "base",      "bool",      "break",     "byte",     "case",
    "catch",    "char",     "checked",   "class",     "const",     "continue", "decimal",
    "default",  "delegate", "do",        "double",    "else",      "enum",     "event",
    "explicit", "extern",   "false",     "finally",   "fixed",     "float",    "for",
    "foreach",  "goto",     "if",        "implicit",  "in",        "int",      "interface",
    "internal", "is",       "lock",      "long",      "namespace", "new",      "null",
    "object",   "operator", "out",       "override",  "params",    "private",  "protected",
    "public",   "readonly", "ref",       "return",    "sbyte",     "sealed",   "short",
    "sizeof",   "stackalloc", "static",  "string",    "struct",    "switch",   "this",
    "throw",    "true",     "try",       "typeof",    "uint",      "ulong",    "unchecked",
    "unsafe",   "ushort",   "using",     "virtual",   "void",      "volatile", "while",
});

constexpr std::array<std::string_view, 1> kThreeCharOps = {"<<="};
constexpr std::array<std::string_view, 19> kTwoCharOps = {
    "++", "--", "&&", "||", "<<", "==", "!=", "<=", ">=", "+=",
    "-=", "*=", "/=", "%=", "&=", "|=", "^=", "->", "??",
};
constexpr std::string_view kOneCharOps = "+-*/%&|^!~=<>?";
constexpr std::string_view kPunctuators = "{}[]().,:;";

bool isIdentStart(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

bool isIdentPart(unsigned char c) {
    return isIdentStart(c) || (c >= '0' && c <= '9');
}

bool isDigit(char c) { return c >= '0' && c <= '9'; }

bool isHexDigit(char c) {
    return isDigit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

bool isSpace(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

class Lexer {
public:
    Lexer(std::string_view src, const std::string& file) : src_(src), file_(file) {
        if (src_.substr(0, 3) == "\xEF\xBB\xBF") {
            pos_ = 3;
        }
    }

    std::vector<Token> run() {
        std::vector<Token> out;
        const Token* prev = nullptr;
        int attributeDepth = 0;
        while (auto tok = next()) {
            if (attributeDepth > 0) {
                if (tok->isPunct("[")) {
                    ++attributeDepth;
                } else if (tok->isPunct("]")) {
                    --attributeDepth;
                }
                continue;
            }
            if (tok->isPunct("[") && startsAttribute(prev)) {
                attributeDepth = 1;
                continue;
            }
            out.push_back(std::move(*tok));
            prev = &out.back();
        }
        return out;
    }

private:
    // An attribute section can only open where a declaration (or parameter)
    // may begin; everywhere else `[` is indexing or an array rank.
    static bool startsAttribute(const Token* prev) {
        if (prev == nullptr) {
            return true;
        }
        if (prev->kind != TokenKind::Punctuator) {
            return false;
        }
        const auto& t = prev->text;
        return t == ";" || t == "{" || t == "}" || t == "(" || t == ",";
    }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    bool atEnd() const { return pos_ >= src_.size(); }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
            atLineStart_ = true;
        } else {
            ++column_;
            if (!isSpace(src_[pos_])) {
                atLineStart_ = false;
            }
        }
        ++pos_;
    }

    SourcePosition here() const { return SourcePosition{file_, line_, column_}; }

    [[noreturn]] void fail(LexErrorKind kind, SourcePosition at) const { throw LexError(kind, std::move(at)); }

    void skipTrivia() {
        while (!atEnd()) {
            char c = peek();
            if (isSpace(c)) {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!atEnd() && peek() != '\n') {
                    advance();
                }
            } else if (c == '/' && peek(1) == '*') {
                SourcePosition start = here();
                advance();
                advance();
                while (!(peek() == '*' && peek(1) == '/')) {
                    if (atEnd()) {
                        fail(LexErrorKind::UnterminatedComment, start);
                    }
                    advance();
                }
                advance();
                advance();
            } else if (c == '#' && atLineStart_) {
                while (!atEnd() && peek() != '\n') {
                    advance();
                }
            } else {
                return;
            }
        }
    }

    Token make(TokenKind kind, std::size_t begin, SourcePosition at) const {
        return Token{kind, std::string(src_.substr(begin, pos_ - begin)), std::move(at)};
    }

    std::optional<Token> next() {
        skipTrivia();
        if (atEnd()) {
            return std::nullopt;
        }
        const std::size_t begin = pos_;
        SourcePosition at = here();
        const char c = peek();
        const auto uc = static_cast<unsigned char>(c);

        if (c == '@' && peek(1) == '"') {
            advance();
            lexVerbatimString(at);
            return make(TokenKind::StringLiteral, begin, at);
        }
        if (c == '@' && isIdentStart(static_cast<unsigned char>(peek(1)))) {
            advance();
            while (!atEnd() && isIdentPart(static_cast<unsigned char>(peek()))) {
                advance();
            }
            return make(TokenKind::Identifier, begin, at);
        }
        if (isIdentStart(uc)) {
            while (!atEnd() && isIdentPart(static_cast<unsigned char>(peek()))) {
                advance();
            }
            Token tok = make(TokenKind::Identifier, begin, at);
            if (isKeyword(tok.text)) {
                tok.kind = TokenKind::Keyword;
            }
            return tok;
        }
        if (isDigit(c) || (c == '.' && isDigit(peek(1)))) {
            return lexNumber(begin, at);
        }
        if (c == '"') {
            lexQuoted('"', at);
            return make(TokenKind::StringLiteral, begin, at);
        }
        if (c == '\'') {
            lexQuoted('\'', at);
            return make(TokenKind::CharLiteral, begin, at);
        }
        if (kPunctuators.find(c) != std::string_view::npos) {
            advance();
            return make(TokenKind::Punctuator, begin, at);
        }
        for (auto op : kThreeCharOps) {
            if (src_.substr(pos_, 3) == op) {
                advance();
                advance();
                advance();
                return make(TokenKind::Operator, begin, at);
            }
        }
        for (auto op : kTwoCharOps) {
            if (src_.substr(pos_, 2) == op) {
                advance();
                advance();
                return make(TokenKind::Operator, begin, at);
            }
        }
        if (kOneCharOps.find(c) != std::string_view::npos) {
            advance();
            return make(TokenKind::Operator, begin, at);
        }
        fail(LexErrorKind::IllegalCharacter, at);
    }

    void lexVerbatimString(const SourcePosition& at) {
        advance();  // opening quote
        for (;;) {
            if (atEnd()) {
                fail(LexErrorKind::UnterminatedString, at);
            }
            if (peek() == '"') {
                advance();
                if (peek() == '"') {
                    advance();
                    continue;
                }
                return;
            }
            advance();
        }
    }

    void lexQuoted(char quote, const SourcePosition& at) {
        advance();
        for (;;) {
            if (atEnd() || peek() == '\n' || peek() == '\r') {
                fail(LexErrorKind::UnterminatedString, at);
            }
            const char c = peek();
            if (c == '\\') {
                advance();
                if (atEnd() || peek() == '\n') {
                    fail(LexErrorKind::UnterminatedString, at);
                }
                advance();
                continue;
            }
            advance();
            if (c == quote) {
                return;
            }
        }
    }

    void consumeWhile(bool (*pred)(char)) {
        while (!atEnd() && pred(peek())) {
            advance();
        }
    }

    static bool isIntSuffix(char c) { return c == 'u' || c == 'U' || c == 'l' || c == 'L'; }

    Token lexNumber(std::size_t begin, const SourcePosition& at) {
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X') && isHexDigit(peek(2))) {
            advance();
            advance();
            consumeWhile(isHexDigit);
            consumeWhile(isIntSuffix);
            return make(TokenKind::IntLiteral, begin, at);
        }
        bool real = false;
        consumeWhile(isDigit);
        if (peek() == '.' && isDigit(peek(1))) {
            real = true;
            advance();
            consumeWhile(isDigit);
        }
        if ((peek() == 'e' || peek() == 'E') &&
            (isDigit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && isDigit(peek(2))))) {
            real = true;
            advance();
            if (peek() == '+' || peek() == '-') {
                advance();
            }
            consumeWhile(isDigit);
        }
        const char s = peek();
        if (s == 'f' || s == 'F' || s == 'd' || s == 'D' || s == 'm' || s == 'M') {
            real = true;
            advance();
        } else if (!real) {
            consumeWhile(isIntSuffix);
        }
        return make(real ? TokenKind::RealLiteral : TokenKind::IntLiteral, begin, at);
    }

    std::string_view src_;
    const std::string& file_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t column_ = 1;
    bool atLineStart_ = true;
};

}  // namespace

std::string to_string(const SourcePosition& pos) {
    return pos.file + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

std::string_view to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::Keyword: return "Keyword";
        case TokenKind::Identifier: return "Identifier";
        case TokenKind::IntLiteral: return "IntLiteral";
        case TokenKind::RealLiteral: return "RealLiteral";
        case TokenKind::StringLiteral: return "StringLiteral";
        case TokenKind::CharLiteral: return "CharLiteral";
        case TokenKind::Punctuator: return "Punctuator";
        case TokenKind::Operator: return "Operator";
    }
    return "?";
}

std::string_view to_string(LexErrorKind kind) {
    switch (kind) {
        case LexErrorKind::UnterminatedString: return "UnterminatedString";
        case LexErrorKind::UnterminatedComment: return "UnterminatedComment";
        case LexErrorKind::IllegalCharacter: return "IllegalCharacter";
    }
    return "?";
}

LexError::LexError(LexErrorKind kind, SourcePosition pos)
    : std::runtime_error(std::string(to_string(kind)) + " at " + to_string(pos)),
      kind_(kind),
      pos_(std::move(pos)) {}

bool isKeyword(std::string_view word) {
    return std::binary_search(kKeywords.begin(), kKeywords.end(), word);
}

std::vector<Token> tokenize(std::string_view source, const std::string& file) {
    return Lexer(source, file).run();
}

}  // namespace tracegraph
