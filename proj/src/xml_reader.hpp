#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tracegraph::xml {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;
    std::uint32_t line = 1;

    const std::string* attribute(std::string_view key) const;
};

/// Parses a document made of elements and attributes only. Comments, the
/// XML declaration and whitespace between elements are skipped; character
/// data, CDATA, DTDs and processing instructions are rejected.
Element parseDocument(std::string_view text);

std::string escape(std::string_view raw);

}  // namespace tracegraph::xml
