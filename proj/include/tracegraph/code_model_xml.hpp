#pragma once

#include "tracegraph/code_model.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace tracegraph {

inline constexpr std::string_view kCodeModelXmlVersion = "1.0";
inline constexpr std::string_view kCodeModelXmlExtension = ".codemodel.xml";

class SchemaViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class VersionMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Canonical XML for a code model: children sorted by (element, name) with
/// parameters kept in declaration order, fixed attribute order, two-space
/// indentation and LF line ends. Equal models give byte-identical output.
std::string emitXml(const CodeModel& model);

/// Reads a document produced by emitXml (or any document valid against the
/// same schema). Throws SchemaViolation or VersionMismatch.
CodeModel parseXml(std::string_view document);

}  // namespace tracegraph
