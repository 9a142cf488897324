#include "xml_reader.hpp"

#include <charconv>

namespace tracegraph::xml {

const std::string* Element::attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
        if (k == key) {
            return &v;
        }
    }
    return nullptr;
}

std::string escape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            case '\t': out += "&#9;"; break;
            case '\n': out += "&#10;"; break;
            case '\r': out += "&#13;"; break;
            default: out += c;
        }
    }
    return out;
}

namespace {

bool isNameChar(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-' || c == '.' || c == ':';
}

void appendUtf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

class Reader {
public:
    explicit Reader(std::string_view s) : s_(s) {}

    Element document() {
        skipMisc(true);
        if (peek() != '<') {
            fail("expected root element");
        }
        Element root = element(0);
        skipMisc(false);
        if (pos_ != s_.size()) {
            fail("content after root element");
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("line " + std::to_string(line_) + ": " + what);
    }

    char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }

    bool startsWith(std::string_view p) const { return s_.substr(pos_, p.size()) == p; }

    void advance(std::size_t n = 1) {
        for (std::size_t k = 0; k < n && pos_ < s_.size(); ++k) {
            if (s_[pos_++] == '\n') {
                ++line_;
            }
        }
    }

    void skipSpace() {
        while (pos_ < s_.size() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) {
            advance();
        }
    }

    void skipUntil(std::string_view terminator) {
        while (pos_ < s_.size() && !startsWith(terminator)) {
            advance();
        }
        if (pos_ >= s_.size()) {
            fail("unterminated markup");
        }
        advance(terminator.size());
    }

    void skipMisc(bool allowDeclaration) {
        for (;;) {
            skipSpace();
            if (startsWith("<!--")) {
                skipUntil("-->");
            } else if (allowDeclaration && startsWith("<?xml")) {
                skipUntil("?>");
                allowDeclaration = false;
            } else {
                return;
            }
        }
    }

    std::string name() {
        const std::size_t begin = pos_;
        while (pos_ < s_.size() && isNameChar(peek())) {
            advance();
        }
        if (pos_ == begin) {
            fail("expected a name");
        }
        return std::string(s_.substr(begin, pos_ - begin));
    }

    std::string attributeValue() {
        const char quote = peek();
        if (quote != '"' && quote != '\'') {
            fail("expected quoted attribute value");
        }
        advance();
        std::string out;
        while (pos_ < s_.size() && peek() != quote) {
            if (peek() == '<') {
                fail("'<' in attribute value");
            }
            if (peek() == '&') {
                entity(out);
            } else {
                out += peek();
                advance();
            }
        }
        if (pos_ >= s_.size()) {
            fail("unterminated attribute value");
        }
        advance();
        return out;
    }

    void entity(std::string& out) {
        const std::size_t semi = s_.find(';', pos_);
        if (semi == std::string_view::npos || semi - pos_ > 12) {
            fail("malformed entity");
        }
        const std::string_view ref = s_.substr(pos_ + 1, semi - pos_ - 1);
        if (ref == "amp") {
            out += '&';
        } else if (ref == "lt") {
            out += '<';
        } else if (ref == "gt") {
            out += '>';
        } else if (ref == "quot") {
            out += '"';
        } else if (ref == "apos") {
            out += '\'';
        } else if (ref.size() > 1 && ref[0] == '#') {
            const bool hex = ref[1] == 'x';
            const std::string_view digits = ref.substr(hex ? 2 : 1);
            std::uint32_t cp = 0;
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
            if (ec != std::errc{} || p != digits.data() + digits.size() || digits.empty() || cp > 0x10FFFF) {
                fail("malformed character reference");
            }
            appendUtf8(out, cp);
        } else {
            fail("unknown entity '&" + std::string(ref) + ";'");
        }
        advance(semi - pos_ + 1);
    }

    Element element(int depth) {
        if (depth > 256) {
            fail("nesting too deep");
        }
        Element el;
        el.line = line_;
        advance();  // '<'
        el.name = name();
        for (;;) {
            skipSpace();
            if (peek() == '/' && peek(1) == '>') {
                advance(2);
                return el;
            }
            if (peek() == '>') {
                advance();
                break;
            }
            std::string key = name();
            skipSpace();
            if (peek() != '=') {
                fail("expected '=' after attribute name");
            }
            advance();
            skipSpace();
            if (el.attribute(key) != nullptr) {
                fail("duplicate attribute '" + key + "'");
            }
            el.attributes.emplace_back(std::move(key), attributeValue());
        }
        for (;;) {
            skipMisc(false);
            if (pos_ >= s_.size()) {
                fail("unterminated element <" + el.name + ">");
            }
            if (startsWith("</")) {
                advance(2);
                if (name() != el.name) {
                    fail("mismatched closing tag for <" + el.name + ">");
                }
                skipSpace();
                if (peek() != '>') {
                    fail("expected '>'");
                }
                advance();
                return el;
            }
            if (peek() != '<' || !isNameChar(peek(1))) {
                fail("unexpected character data in <" + el.name + ">");
            }
            el.children.push_back(element(depth + 1));
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
};

}  // namespace

Element parseDocument(std::string_view text) { return Reader(text).document(); }

}  // namespace tracegraph::xml
