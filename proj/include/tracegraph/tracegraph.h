/*
 * tracegraph C API.
 *
 * Handles are opaque and owned by the caller; release each with its *_free
 * function. Strings returned through `char** out` are heap copies released
 * with tg_string_free. Every call that can fail returns a tg_status and, on
 * failure, leaves a message for the calling thread in tg_last_error().
 */
#ifndef TRACEGRAPH_H
#define TRACEGRAPH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TG_API __declspec(dllexport)
#else
#define TG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tg_status {
    TG_OK = 0,
    TG_ERR_INVALID_ARGUMENT = 1,
    TG_ERR_IO = 2,
    TG_ERR_NO_SOURCES = 3,
    TG_ERR_SCHEMA = 4,          /* malformed or non-conforming code model XML */
    TG_ERR_VERSION = 5,         /* unsupported document version */
    TG_ERR_FORMAT = 6,          /* malformed knowledge base document */
    TG_ERR_UNKNOWN_ID = 7,
    TG_ERR_UNKNOWN_TYPE = 8,
    TG_ERR_DUPLICATE = 9,
    TG_ERR_SELF_CONTAINMENT = 10,
    TG_ERR_INVALID_URI = 11,
    TG_ERR_INVALID_QUERY = 12,
    TG_ERR_MISSING_BUILTINS = 13,
    TG_ERR_CONFLICT = 14,       /* conflicting declarations across files */
    TG_ERR_BIND = 15,
    TG_ERR_INTERNAL = 99
} tg_status;

typedef struct tg_model tg_model;
typedef struct tg_kb tg_kb;
typedef struct tg_report tg_report;
typedef struct tg_service tg_service;

typedef enum tg_ref_kind { TG_REF_CALL = 0, TG_REF_USE = 1, TG_REF_INSTANTIATE = 2 } tg_ref_kind;

TG_API const char* tg_status_name(tg_status status);
TG_API const char* tg_last_error(void);
TG_API void tg_string_free(char* s);

/* ---- code model ------------------------------------------------------- */

/* Lexes, parses and merges every .cs file below root_dir. Files that fail
 * are listed as errors on the model rather than failing the call. */
TG_API tg_status tg_extract_project(const char* root_dir, tg_model** out);
TG_API tg_status tg_model_read_xml(const char* path, tg_model** out);
TG_API tg_status tg_model_from_xml(const char* text, size_t length, tg_model** out);
TG_API tg_status tg_model_to_xml(const tg_model* model, char** out);
TG_API tg_status tg_model_write_xml(const tg_model* model, const char* path);
TG_API size_t tg_model_file_count(const tg_model* model);
TG_API size_t tg_model_error_count(const tg_model* model);
TG_API size_t tg_model_diagnostic_count(const tg_model* model);
/* "file:line:column: Kind: message" */
TG_API tg_status tg_model_error(const tg_model* model, size_t index, char** out);
TG_API tg_status tg_model_diagnostic(const tg_model* model, size_t index, char** out);
TG_API void tg_model_free(tg_model* model);

/* ---- knowledge base --------------------------------------------------- */

TG_API tg_status tg_kb_new(tg_kb** out);
TG_API tg_status tg_kb_load(const char* path, tg_kb** out);
TG_API tg_status tg_kb_save(const tg_kb* kb, const char* path);
TG_API tg_status tg_kb_to_json(const tg_kb* kb, char** out);
TG_API void tg_kb_free(tg_kb* kb);

TG_API uint64_t tg_kb_revision(const tg_kb* kb);
TG_API size_t tg_kb_object_count(const tg_kb* kb);
TG_API size_t tg_kb_link_count(const tg_kb* kb);
TG_API tg_status tg_kb_objects_of_type(const tg_kb* kb, const char* type_id, size_t* count);
TG_API tg_status tg_kb_links_of_type(const tg_kb* kb, const char* link_type_id, size_t* count);

TG_API tg_status tg_kb_populate(tg_kb* kb, const tg_model* model, tg_report** out);
/* link_id_out may be NULL. */
TG_API tg_status tg_kb_add_link(tg_kb* kb, const char* link_type_id, const char* parent_id, const char* child_id,
                                char** link_id_out);
TG_API tg_status tg_kb_remove_link(tg_kb* kb, const char* link_id);
/* is_document_link != 0 stores text as a URI. */
TG_API tg_status tg_kb_annotate(tg_kb* kb, const char* object_id, int is_document_link, const char* text);

/* ---- population report ------------------------------------------------ */

TG_API tg_status tg_report_format_table(const tg_report* report, const tg_kb* kb, char** out);
TG_API size_t tg_report_objects_of_type(const tg_report* report, const char* type_id);
TG_API size_t tg_report_links_of_type(const tg_report* report, const char* link_type_id);
TG_API size_t tg_report_unresolved(const tg_report* report, tg_ref_kind kind);
TG_API void tg_report_free(tg_report* report);

/* ---- queries and export ----------------------------------------------- */

/* columns_csv and links_csv may be NULL for "all". Each check is
 * "TYPE:NAME" where NAME is an object's qualified name or display name, or
 * a full object id. Output lists visible qualified names per column. */
TG_API tg_status tg_kb_query_text(const tg_kb* kb, const char* columns_csv, const char* links_csv,
                                  const char* const* checks, size_t check_count, char** out);
/* Request and response use the same JSON shapes as POST /api/v1/query. */
TG_API tg_status tg_kb_query_json(const tg_kb* kb, const char* query_json, char** out);
TG_API tg_status tg_kb_export_dot(const tg_kb* kb, char** out);

/* ---- service ---------------------------------------------------------- */

/* bind is "HOST:PORT"; TRACEGRAPH_BIND overrides it when set. Port 0 picks
 * a free port (see tg_service_port). */
TG_API tg_status tg_service_start(const char* kb_path, const char* bind, tg_service** out);
TG_API int tg_service_port(const tg_service* service);
TG_API void tg_service_stop(tg_service* service);
/* Blocks until the process is terminated. */
TG_API tg_status tg_serve(const char* kb_path, const char* bind);

#ifdef __cplusplus
}
#endif

#endif /* TRACEGRAPH_H */
