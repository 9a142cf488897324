#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tracegraph {

struct SourcePosition {
    std::string file;
    std::uint32_t line = 1;
    std::uint32_t column = 1;

    friend bool operator==(const SourcePosition&, const SourcePosition&) = default;
};

std::string to_string(const SourcePosition& pos);

enum class TokenKind {
    Keyword,
    Identifier,
    IntLiteral,
    RealLiteral,
    StringLiteral,
    CharLiteral,
    Punctuator,
    Operator,
};

std::string_view to_string(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::Identifier;
    std::string text;
    SourcePosition pos;

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool isPunct(std::string_view t) const { return kind == TokenKind::Punctuator && text == t; }
    bool isOp(std::string_view t) const { return kind == TokenKind::Operator && text == t; }
    bool isKeyword(std::string_view t) const { return kind == TokenKind::Keyword && text == t; }
};

enum class LexErrorKind { UnterminatedString, UnterminatedComment, IllegalCharacter };

std::string_view to_string(LexErrorKind kind);

class LexError : public std::runtime_error {
public:
    LexError(LexErrorKind kind, SourcePosition pos);

    LexErrorKind kind() const noexcept { return kind_; }
    const SourcePosition& position() const noexcept { return pos_; }

private:
    LexErrorKind kind_;
    SourcePosition pos_;
};

/// True for the reserved C# 1.0 keywords. Contextual words such as
/// `partial`, `where`, `get`, `set`, `add` and `remove` are not keywords.
bool isKeyword(std::string_view word);

/// Splits C# source into tokens. Whitespace, comments, attribute sections
/// and preprocessor directive lines are dropped. Throws LexError.
std::vector<Token> tokenize(std::string_view source, const std::string& file);

}  // namespace tracegraph
