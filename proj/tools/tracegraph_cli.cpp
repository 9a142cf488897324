// Command-line front end. Talks to the library only through the C API.

#include "tracegraph/tracegraph.h"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitExtraction = 2;

struct Freer {
    void operator()(tg_model* p) const { tg_model_free(p); }
    void operator()(tg_kb* p) const { tg_kb_free(p); }
    void operator()(tg_report* p) const { tg_report_free(p); }
    void operator()(char* p) const { tg_string_free(p); }
};
template <typename T>
using Owned = std::unique_ptr<T, Freer>;

int report(tg_status status) {
    std::cerr << "tracegraph: " << tg_status_name(status) << ": " << tg_last_error() << "\n";
    return status == TG_ERR_NO_SOURCES ? kExitExtraction : kExitUsage;
}

// Writes text to path, or stdout when path is empty or "-".
bool emit(const std::string& path, const char* text) {
    if (path.empty() || path == "-") {
        std::fputs(text, stdout);
        return true;
    }
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (f == nullptr) {
        std::cerr << "tracegraph: cannot write '" << path << "'\n";
        return false;
    }
    const bool ok = std::fputs(text, f) >= 0;
    return std::fclose(f) == 0 && ok;
}

int extract(const std::string& dir, const std::string& output) {
    tg_model* raw = nullptr;
    if (tg_status s = tg_extract_project(dir.c_str(), &raw); s != TG_OK) {
        return report(s);
    }
    Owned<tg_model> model(raw);
    for (size_t k = 0; k < tg_model_diagnostic_count(model.get()); ++k) {
        char* msg = nullptr;
        if (tg_model_diagnostic(model.get(), k, &msg) == TG_OK) {
            std::cerr << Owned<char>(msg).get() << "\n";
        }
    }
    const size_t errors = tg_model_error_count(model.get());
    for (size_t k = 0; k < errors; ++k) {
        char* msg = nullptr;
        if (tg_model_error(model.get(), k, &msg) == TG_OK) {
            std::cerr << Owned<char>(msg).get() << "\n";
        }
    }
    char* xml = nullptr;
    if (tg_status s = tg_model_to_xml(model.get(), &xml); s != TG_OK) {
        return report(s);
    }
    if (!emit(output, Owned<char>(xml).get())) {
        return kExitUsage;
    }
    std::cerr << "extracted " << tg_model_file_count(model.get()) << " file(s), " << errors << " error(s)\n";
    return errors > 0 ? kExitExtraction : kExitOk;
}

int build(const std::string& xmlPath, const std::string& output) {
    tg_model* rawModel = nullptr;
    if (tg_status s = tg_model_read_xml(xmlPath.c_str(), &rawModel); s != TG_OK) {
        return report(s);
    }
    Owned<tg_model> model(rawModel);
    tg_kb* rawKb = nullptr;
    if (tg_status s = tg_kb_new(&rawKb); s != TG_OK) {
        return report(s);
    }
    Owned<tg_kb> kb(rawKb);
    tg_report* rawReport = nullptr;
    if (tg_status s = tg_kb_populate(kb.get(), model.get(), &rawReport); s != TG_OK) {
        return report(s);
    }
    Owned<tg_report> rep(rawReport);
    if (tg_status s = tg_kb_save(kb.get(), output.c_str()); s != TG_OK) {
        return report(s);
    }
    char* table = nullptr;
    if (tg_status s = tg_report_format_table(rep.get(), kb.get(), &table); s != TG_OK) {
        return report(s);
    }
    std::fputs(Owned<char>(table).get(), stdout);
    return kExitOk;
}

Owned<tg_kb> loadKb(const std::string& path, int& exitCode) {
    tg_kb* raw = nullptr;
    if (tg_status s = tg_kb_load(path.c_str(), &raw); s != TG_OK) {
        exitCode = report(s);
        return nullptr;
    }
    return Owned<tg_kb>(raw);
}

int query(const std::string& kbPath, const std::vector<std::string>& checks, const std::string& columns,
          const std::string& links, bool columnsGiven, bool linksGiven) {
    int code = kExitOk;
    auto kb = loadKb(kbPath, code);
    if (!kb) {
        return code;
    }
    std::vector<const char*> checkPtrs;
    for (const auto& c : checks) checkPtrs.push_back(c.c_str());
    char* text = nullptr;
    tg_status s = tg_kb_query_text(kb.get(), columnsGiven ? columns.c_str() : nullptr,
                                   linksGiven ? links.c_str() : nullptr, checkPtrs.data(), checkPtrs.size(), &text);
    if (s != TG_OK) {
        return report(s);
    }
    std::fputs(Owned<char>(text).get(), stdout);
    return kExitOk;
}

int exportDot(const std::string& kbPath, const std::string& output) {
    int code = kExitOk;
    auto kb = loadKb(kbPath, code);
    if (!kb) {
        return code;
    }
    char* dot = nullptr;
    if (tg_status s = tg_kb_export_dot(kb.get(), &dot); s != TG_OK) {
        return report(s);
    }
    return emit(output, Owned<char>(dot).get()) ? kExitOk : kExitUsage;
}

int serve(const std::string& kbPath, const std::string& bind) {
    std::cerr << "serving " << kbPath << "\n";
    if (tg_status s = tg_serve(kbPath.c_str(), bind.c_str()); s != TG_OK) {
        return report(s);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extract C# traceability graphs and query them."};
    app.require_subcommand(1);

    std::string dir, xmlPath, kbPath, output, columns, links, bind = "127.0.0.1:8080";
    std::vector<std::string> checks;

    auto* ext = app.add_subcommand("extract", "Parse a C# source tree into a code model XML file");
    ext->add_option("dir", dir, "Source directory")->required();
    ext->add_option("-o,--output", output, "Output .codemodel.xml (default stdout)");

    auto* bld = app.add_subcommand("build", "Populate a knowledge base from a code model");
    bld->add_option("model", xmlPath, "Input .codemodel.xml")->required();
    bld->add_option("-o,--output", output, "Output .tracekb.json")->required();

    auto* qry = app.add_subcommand("query", "List visible objects per column for a selection");
    qry->add_option("kb", kbPath, "Knowledge base file")->required();
    qry->add_option("--check", checks, "Checked object as TYPE:NAME (repeatable)");
    auto* colOpt = qry->add_option("--columns", columns, "Displayed types, comma separated (default all)");
    auto* linkOpt = qry->add_option("--links", links, "Enabled link types, comma separated (default all)");

    auto* dot = app.add_subcommand("export-dot", "Write the knowledge base as Graphviz DOT");
    dot->add_option("kb", kbPath, "Knowledge base file")->required();
    dot->add_option("-o,--output", output, "Output .dot (default stdout)");

    auto* srv = app.add_subcommand("serve", "Serve the HTTP API (TRACEGRAPH_BIND overrides --bind)");
    srv->add_option("kb", kbPath, "Knowledge base file")->required();
    srv->add_option("--bind", bind, "HOST:PORT")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (ext->parsed()) return extract(dir, output);
    if (bld->parsed()) return build(xmlPath, output);
    if (qry->parsed()) return query(kbPath, checks, columns, links, colOpt->count() > 0, linkOpt->count() > 0);
    if (dot->parsed()) return exportDot(kbPath, output);
    if (srv->parsed()) return serve(kbPath, bind);
    return kExitUsage;
}
