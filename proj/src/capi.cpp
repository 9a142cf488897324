#include "tracegraph/tracegraph.h"

#include "kb_json.hpp"
#include "tracegraph/code_model_xml.hpp"
#include "tracegraph/dot_export.hpp"
#include "tracegraph/populator.hpp"
#include "tracegraph/trace_query.hpp"
#include "tracegraph/trace_service.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

using namespace tracegraph;

struct tg_model {
    ExtractionResult result;
};

struct tg_kb {
    KnowledgeBase kb;
};

struct tg_report {
    PopulationReport report;
};

struct tg_service {
    std::unique_ptr<TraceService> service;
    int port = 0;
};

namespace {

thread_local std::string lastError;

// Thrown for argument problems detected in this file.
struct ApiError {
    tg_status status;
    std::string message;
};

tg_status fromKb(KbErrorCode c) {
    switch (c) {
        case KbErrorCode::DuplicateName: return TG_ERR_DUPLICATE;
        case KbErrorCode::UnknownType: return TG_ERR_UNKNOWN_TYPE;
        case KbErrorCode::UnknownId: return TG_ERR_UNKNOWN_ID;
        case KbErrorCode::SelfContainment: return TG_ERR_SELF_CONTAINMENT;
        case KbErrorCode::InvalidUri: return TG_ERR_INVALID_URI;
        case KbErrorCode::RevisionTooOld: return TG_ERR_INVALID_ARGUMENT;
        case KbErrorCode::FormatError: return TG_ERR_FORMAT;
        case KbErrorCode::VersionMismatch: return TG_ERR_VERSION;
        case KbErrorCode::MissingBuiltins: return TG_ERR_MISSING_BUILTINS;
    }
    return TG_ERR_INTERNAL;
}

// Library messages start with "Code: "; the status already names the code.
std::string withoutPrefix(const char* what) {
    std::string_view s(what);
    const auto colon = s.find(": ");
    return std::string(colon == std::string_view::npos ? s : s.substr(colon + 2));
}

template <typename F>
tg_status call(F&& f) {
    try {
        f();
        lastError.clear();
        return TG_OK;
    } catch (const ApiError& e) {
        lastError = e.message;
        return e.status;
    } catch (const NoSourcesFound& e) {
        lastError = e.what();
        return TG_ERR_NO_SOURCES;
    } catch (const std::filesystem::filesystem_error& e) {
        lastError = e.what();
        return TG_ERR_IO;
    } catch (const SchemaViolation& e) {
        lastError = e.what();
        return TG_ERR_SCHEMA;
    } catch (const VersionMismatch& e) {
        lastError = e.what();
        return TG_ERR_VERSION;
    } catch (const ConflictingDeclaration& e) {
        lastError = e.what();
        return TG_ERR_CONFLICT;
    } catch (const KbError& e) {
        lastError = withoutPrefix(e.what());
        return fromKb(e.code());
    } catch (const QueryError& e) {
        lastError = withoutPrefix(e.what());
        return e.code() == QueryErrorCode::UnknownId ? TG_ERR_UNKNOWN_ID : TG_ERR_INVALID_QUERY;
    } catch (const std::invalid_argument& e) {
        lastError = e.what();
        return TG_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        lastError = e.what();
        return TG_ERR_INTERNAL;
    } catch (...) {
        lastError = "unknown failure";
        return TG_ERR_INTERNAL;
    }
}

void require(const void* p, const char* name) {
    if (p == nullptr) {
        throw ApiError{TG_ERR_INVALID_ARGUMENT, std::string(name) + " must not be NULL"};
    }
}

char* copyString(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

std::string readFile(const char* path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ApiError{TG_ERR_IO, std::string("cannot read '") + path + "'"};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void writeFile(const char* path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
    if (!out.flush()) {
        throw ApiError{TG_ERR_IO, std::string("cannot write '") + path + "'"};
    }
}

std::vector<std::string> splitCsv(const char* csv) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::string located(const SourcePosition& pos, const std::string& kind, const std::string& message) {
    return to_string(pos) + ": " + kind + ": " + message;
}

// Resolves "TYPE:NAME" against ids, qualified names and display names.
std::vector<std::string> resolveCheck(const KnowledgeBase& kb, const std::string& check) {
    if (kb.findObject(check) != nullptr) {
        return {check};
    }
    const auto colon = check.find(':');
    if (colon == std::string::npos) {
        throw ApiError{TG_ERR_INVALID_QUERY, "check '" + check + "' is not TYPE:NAME"};
    }
    const std::string type = check.substr(0, colon);
    const std::string name = check.substr(colon + 1);
    if (kb.findType(type) == nullptr) {
        throw ApiError{TG_ERR_UNKNOWN_TYPE, "no knowledge type '" + type + "'"};
    }
    std::vector<std::string> out;
    for (const auto& id : kb.objectsOfType(type)) {
        const auto& o = *kb.findObject(id);
        if (o.qualifiedName == name || o.displayName == name) {
            out.push_back(id);
        }
    }
    if (out.empty()) {
        throw ApiError{TG_ERR_UNKNOWN_ID, "no " + type + " named '" + name + "'"};
    }
    return out;
}

}  // namespace

extern "C" {

const char* tg_status_name(tg_status status) {
    switch (status) {
        case TG_OK: return "OK";
        case TG_ERR_INVALID_ARGUMENT: return "InvalidArgument";
        case TG_ERR_IO: return "IoError";
        case TG_ERR_NO_SOURCES: return "NoSourcesFound";
        case TG_ERR_SCHEMA: return "SchemaViolation";
        case TG_ERR_VERSION: return "VersionMismatch";
        case TG_ERR_FORMAT: return "FormatError";
        case TG_ERR_UNKNOWN_ID: return "UnknownId";
        case TG_ERR_UNKNOWN_TYPE: return "UnknownType";
        case TG_ERR_DUPLICATE: return "DuplicateName";
        case TG_ERR_SELF_CONTAINMENT: return "SelfContainment";
        case TG_ERR_INVALID_URI: return "InvalidUri";
        case TG_ERR_INVALID_QUERY: return "InvalidQuery";
        case TG_ERR_MISSING_BUILTINS: return "MissingBuiltins";
        case TG_ERR_CONFLICT: return "ConflictingDeclaration";
        case TG_ERR_BIND: return "BindError";
        case TG_ERR_INTERNAL: return "InternalError";
    }
    return "Unknown";
}

const char* tg_last_error(void) { return lastError.c_str(); }

void tg_string_free(char* s) { std::free(s); }

// ---- code model ---------------------------------------------------------

tg_status tg_extract_project(const char* root_dir, tg_model** out) {
    return call([&] {
        require(root_dir, "root_dir");
        require(out, "out");
        *out = new tg_model{extractModel(root_dir)};
    });
}

tg_status tg_model_from_xml(const char* text, size_t length, tg_model** out) {
    return call([&] {
        require(text, "text");
        require(out, "out");
        auto model = std::make_unique<tg_model>();
        model->result.model = parseXml(std::string_view(text, length));
        *out = model.release();
    });
}

tg_status tg_model_read_xml(const char* path, tg_model** out) {
    return call([&] {
        require(path, "path");
        require(out, "out");
        const std::string text = readFile(path);
        auto model = std::make_unique<tg_model>();
        model->result.model = parseXml(text);
        *out = model.release();
    });
}

tg_status tg_model_to_xml(const tg_model* model, char** out) {
    return call([&] {
        require(model, "model");
        require(out, "out");
        *out = copyString(emitXml(model->result.model));
    });
}

tg_status tg_model_write_xml(const tg_model* model, const char* path) {
    return call([&] {
        require(model, "model");
        require(path, "path");
        writeFile(path, emitXml(model->result.model));
    });
}

size_t tg_model_file_count(const tg_model* model) { return model ? model->result.files.size() : 0; }
size_t tg_model_error_count(const tg_model* model) { return model ? model->result.errors.size() : 0; }
size_t tg_model_diagnostic_count(const tg_model* model) { return model ? model->result.diagnostics.size() : 0; }

tg_status tg_model_error(const tg_model* model, size_t index, char** out) {
    return call([&] {
        require(model, "model");
        require(out, "out");
        if (index >= model->result.errors.size()) {
            throw ApiError{TG_ERR_INVALID_ARGUMENT, "error index out of range"};
        }
        const auto& e = model->result.errors[index];
        *out = copyString(located(e.pos, e.kind, e.message));
    });
}

tg_status tg_model_diagnostic(const tg_model* model, size_t index, char** out) {
    return call([&] {
        require(model, "model");
        require(out, "out");
        if (index >= model->result.diagnostics.size()) {
            throw ApiError{TG_ERR_INVALID_ARGUMENT, "diagnostic index out of range"};
        }
        const auto& d = model->result.diagnostics[index];
        *out = copyString(located(d.pos, "warning", d.message));
    });
}

void tg_model_free(tg_model* model) { delete model; }

// ---- knowledge base -----------------------------------------------------

tg_status tg_kb_new(tg_kb** out) {
    return call([&] {
        require(out, "out");
        *out = new tg_kb{};
    });
}

tg_status tg_kb_load(const char* path, tg_kb** out) {
    return call([&] {
        require(path, "path");
        require(out, "out");
        *out = new tg_kb{load(readFile(path))};
    });
}

tg_status tg_kb_save(const tg_kb* kb, const char* path) {
    return call([&] {
        require(kb, "kb");
        require(path, "path");
        writeFile(path, save(kb->kb));
    });
}

tg_status tg_kb_to_json(const tg_kb* kb, char** out) {
    return call([&] {
        require(kb, "kb");
        require(out, "out");
        *out = copyString(save(kb->kb));
    });
}

void tg_kb_free(tg_kb* kb) { delete kb; }

uint64_t tg_kb_revision(const tg_kb* kb) { return kb ? kb->kb.revision() : 0; }
size_t tg_kb_object_count(const tg_kb* kb) { return kb ? kb->kb.objects().size() : 0; }
size_t tg_kb_link_count(const tg_kb* kb) { return kb ? kb->kb.links().size() : 0; }

tg_status tg_kb_objects_of_type(const tg_kb* kb, const char* type_id, size_t* count) {
    return call([&] {
        require(kb, "kb");
        require(type_id, "type_id");
        require(count, "count");
        if (kb->kb.findType(type_id) == nullptr) {
            throw ApiError{TG_ERR_UNKNOWN_TYPE, std::string("no knowledge type '") + type_id + "'"};
        }
        *count = kb->kb.objectsOfType(type_id).size();
    });
}

tg_status tg_kb_links_of_type(const tg_kb* kb, const char* link_type_id, size_t* count) {
    return call([&] {
        require(kb, "kb");
        require(link_type_id, "link_type_id");
        require(count, "count");
        if (kb->kb.findLinkType(link_type_id) == nullptr) {
            throw ApiError{TG_ERR_UNKNOWN_ID, std::string("no link type '") + link_type_id + "'"};
        }
        std::size_t n = 0;
        for (const auto& [id, link] : kb->kb.links()) {
            n += link.linkTypeId == link_type_id ? 1 : 0;
        }
        *count = n;
    });
}

tg_status tg_kb_populate(tg_kb* kb, const tg_model* model, tg_report** out) {
    return call([&] {
        require(kb, "kb");
        require(model, "model");
        auto report = populate(model->result.model, kb->kb);
        if (out != nullptr) {
            *out = new tg_report{std::move(report)};
        }
    });
}

tg_status tg_kb_add_link(tg_kb* kb, const char* link_type_id, const char* parent_id, const char* child_id,
                         char** link_id_out) {
    return call([&] {
        require(kb, "kb");
        require(link_type_id, "link_type_id");
        require(parent_id, "parent_id");
        require(child_id, "child_id");
        const auto& link = kb->kb.addLink(link_type_id, parent_id, child_id);
        if (link_id_out != nullptr) {
            *link_id_out = copyString(link.id);
        }
    });
}

tg_status tg_kb_remove_link(tg_kb* kb, const char* link_id) {
    return call([&] {
        require(kb, "kb");
        require(link_id, "link_id");
        kb->kb.removeLink(link_id);
    });
}

tg_status tg_kb_annotate(tg_kb* kb, const char* object_id, int is_document_link, const char* text) {
    return call([&] {
        require(kb, "kb");
        require(object_id, "object_id");
        require(text, "text");
        kb->kb.annotate(object_id, is_document_link ? AnnotationKind::DocumentLink : AnnotationKind::Note, text);
    });
}

// ---- report -------------------------------------------------------------

tg_status tg_report_format_table(const tg_report* report, const tg_kb* kb, char** out) {
    return call([&] {
        require(report, "report");
        require(kb, "kb");
        require(out, "out");
        *out = copyString(formatReport(report->report, kb->kb));
    });
}

size_t tg_report_objects_of_type(const tg_report* report, const char* type_id) {
    if (report == nullptr || type_id == nullptr) return 0;
    auto it = report->report.objectsPerType.find(type_id);
    return it == report->report.objectsPerType.end() ? 0 : it->second;
}

size_t tg_report_links_of_type(const tg_report* report, const char* link_type_id) {
    if (report == nullptr || link_type_id == nullptr) return 0;
    auto it = report->report.linksPerLinkType.find(link_type_id);
    return it == report->report.linksPerLinkType.end() ? 0 : it->second;
}

size_t tg_report_unresolved(const tg_report* report, tg_ref_kind kind) {
    if (report == nullptr) return 0;
    switch (kind) {
        case TG_REF_CALL: return report->report.unresolvedCalls;
        case TG_REF_USE: return report->report.unresolvedUses;
        case TG_REF_INSTANTIATE: return report->report.unresolvedInstantiations;
    }
    return 0;
}

void tg_report_free(tg_report* report) { delete report; }

// ---- queries ------------------------------------------------------------

tg_status tg_kb_query_text(const tg_kb* kb, const char* columns_csv, const char* links_csv,
                           const char* const* checks, size_t check_count, char** out) {
    return call([&] {
        require(kb, "kb");
        require(out, "out");
        if (check_count > 0) {
            require(checks, "checks");
        }
        const KnowledgeBase& base = kb->kb;
        SelectionQuery q;
        if (columns_csv != nullptr) {
            q.displayedTypeIds = splitCsv(columns_csv);
        } else {
            for (const auto& t : base.types()) q.displayedTypeIds.push_back(t.id);
        }
        if (links_csv != nullptr) {
            for (auto& l : splitCsv(links_csv)) q.enabledLinkTypeIds.insert(std::move(l));
        } else {
            for (const auto& t : base.linkTypes()) q.enabledLinkTypeIds.insert(t.id);
        }
        for (std::size_t k = 0; k < check_count; ++k) {
            require(checks[k], "check");
            for (const auto& id : resolveCheck(base, checks[k])) {
                q.checked[base.findObject(id)->typeId].insert(id);
            }
        }
        const VisibilityResult result = computeVisibility(base, q);
        std::string text;
        for (const auto& t : q.displayedTypeIds) {
            const auto& ids = result.visible.at(t);
            text += t + " (" + std::to_string(ids.size()) + ")\n";
            for (const auto& id : ids) {
                text += "  " + base.findObject(id)->qualifiedName + "\n";
            }
        }
        *out = copyString(text);
    });
}

tg_status tg_kb_query_json(const tg_kb* kb, const char* query_json, char** out) {
    return call([&] {
        require(kb, "kb");
        require(query_json, "query_json");
        require(out, "out");
        json::Json body;
        try {
            body = json::Json::parse(query_json);
        } catch (const nlohmann::json::exception& e) {
            throw ApiError{TG_ERR_INVALID_QUERY, e.what()};
        }
        SelectionQuery q;
        try {
            q = json::queryFromJson(body, kb->kb);
        } catch (const KbError& e) {
            throw ApiError{TG_ERR_INVALID_QUERY, e.what()};
        }
        *out = copyString(json::toJson(computeVisibility(kb->kb, q), q).dump());
    });
}

tg_status tg_kb_export_dot(const tg_kb* kb, char** out) {
    return call([&] {
        require(kb, "kb");
        require(out, "out");
        *out = copyString(exportDot(kb->kb));
    });
}

// ---- service ------------------------------------------------------------

tg_status tg_service_start(const char* kb_path, const char* bind, tg_service** out) {
    return call([&] {
        require(kb_path, "kb_path");
        require(bind, "bind");
        require(out, "out");
        const BindAddress address = parseBind(effectiveBind(bind));
        auto handle = std::make_unique<tg_service>();
        handle->service = std::make_unique<TraceService>(load(readFile(kb_path)), kb_path);
        try {
            handle->port = handle->service->start(address);
        } catch (const std::runtime_error& e) {
            throw ApiError{TG_ERR_BIND, e.what()};
        }
        *out = handle.release();
    });
}

int tg_service_port(const tg_service* service) { return service ? service->port : 0; }

void tg_service_stop(tg_service* service) {
    if (service != nullptr) {
        service->service->stop();
        delete service;
    }
}

tg_status tg_serve(const char* kb_path, const char* bind) {
    return call([&] {
        require(kb_path, "kb_path");
        require(bind, "bind");
        const BindAddress address = parseBind(effectiveBind(bind));
        TraceService service(load(readFile(kb_path)), kb_path);
        try {
            service.run(address);
        } catch (const std::runtime_error& e) {
            throw ApiError{TG_ERR_BIND, e.what()};
        }
    });
}

}  // extern "C"
