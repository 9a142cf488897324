#include "tracegraph/trace_service.hpp"

#include "kb_json.hpp"
#include "tracegraph/trace_query.hpp"

#include "httplib.h"

#include <atomic>
#include <charconv>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <shared_mutex>
#include <thread>

namespace tracegraph {

using json::Json;

BindAddress parseBind(const std::string& text) {
    BindAddress out;
    std::string portText = text;
    if (const auto colon = text.rfind(':'); colon != std::string::npos) {
        if (colon > 0) {
            out.host = text.substr(0, colon);
        }
        portText = text.substr(colon + 1);
    }
    int port = -1;
    auto [p, ec] = std::from_chars(portText.data(), portText.data() + portText.size(), port);
    if (ec != std::errc{} || p != portText.data() + portText.size() || port < 0 || port > 65535) {
        throw std::invalid_argument("bad bind address '" + text + "', expected HOST:PORT");
    }
    out.port = port;
    return out;
}

std::string effectiveBind(const std::string& flagValue) {
    const char* env = std::getenv("TRACEGRAPH_BIND");
    return env != nullptr && *env != '\0' ? std::string(env) : flagValue;
}

namespace {

// Raised inside handlers for request-level problems.
struct HttpError {
    int status;
    std::string code;
    std::string message;
};

std::vector<std::string> splitCommas(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto end = comma == std::string::npos ? s.size() : comma;
        if (end > start) {
            out.push_back(s.substr(start, end - start));
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

Json parseBody(const httplib::Request& req) {
    try {
        Json body = Json::parse(req.body);
        if (!body.is_object()) {
            throw HttpError{400, "BadRequest", "body must be a JSON object"};
        }
        return body;
    } catch (const nlohmann::json::parse_error& e) {
        throw HttpError{400, "BadRequest", e.what()};
    }
}

int statusFor(KbErrorCode c) {
    switch (c) {
        case KbErrorCode::UnknownId:
        case KbErrorCode::UnknownType: return 404;
        case KbErrorCode::SelfContainment:
        case KbErrorCode::DuplicateName: return 409;
        case KbErrorCode::RevisionTooOld: return 410;
        default: return 400;
    }
}

}  // namespace

struct TraceService::Impl {
    Impl(KnowledgeBase base, std::filesystem::path file) : kb(std::move(base)), kbFile(std::move(file)) {
        revision = kb.revision();
        routes();
    }

    KnowledgeBase kb;
    std::filesystem::path kbFile;
    mutable std::shared_mutex kbMutex;
    std::atomic<std::uint64_t> revision{0};
    std::chrono::milliseconds maxWait{30000};

    std::mutex waitMutex;
    std::condition_variable changed;
    bool stopping = false;

    httplib::Server server;
    std::thread thread;

    void reply(httplib::Response& res, int status, const Json& body, std::uint64_t rev) {
        res.status = status;
        res.set_header("X-KB-Revision", std::to_string(rev));
        res.set_content(body.dump(), "application/json");
    }

    void fail(httplib::Response& res, int status, const std::string& code, const std::string& message) {
        reply(res, status, Json{{"error", code}, {"message", message}}, revision.load());
    }

    template <typename F>
    httplib::Server::Handler guarded(F handler) {
        return [this, handler](const httplib::Request& req, httplib::Response& res) {
            try {
                handler(req, res);
            } catch (const HttpError& e) {
                fail(res, e.status, e.code, e.message);
            } catch (const KbError& e) {
                fail(res, statusFor(e.code()), std::string(to_string(e.code())), e.what());
            } catch (const QueryError& e) {
                fail(res, e.code() == QueryErrorCode::UnknownId ? 404 : 400,
                     e.code() == QueryErrorCode::UnknownId ? "UnknownId" : "InvalidQuery", e.what());
            } catch (const nlohmann::json::exception& e) {
                fail(res, 400, "BadRequest", e.what());
            } catch (const std::exception& e) {
                fail(res, 500, "InternalError", e.what());
            }
        };
    }

    // Runs a mutation under the writer lock and wakes long-polling readers.
    template <typename F>
    auto mutate(F f) {
        std::unique_lock lock(kbMutex);
        auto result = f();
        revision = kb.revision();
        lock.unlock();
        {
            std::lock_guard g(waitMutex);
        }
        changed.notify_all();
        return result;
    }

    void routes() {
        server.Get("/api/v1/types", guarded([this](const httplib::Request&, httplib::Response& res) {
            std::shared_lock lock(kbMutex);
            Json out = Json::array();
            for (const auto& t : kb.types()) out.push_back(json::toJson(t));
            reply(res, 200, out, kb.revision());
        }));

        server.Get("/api/v1/link-types", guarded([this](const httplib::Request&, httplib::Response& res) {
            std::shared_lock lock(kbMutex);
            Json out = Json::array();
            for (const auto& t : kb.linkTypes()) out.push_back(json::toJson(t));
            reply(res, 200, out, kb.revision());
        }));

        server.Get("/api/v1/objects", guarded([this](const httplib::Request& req, httplib::Response& res) {
            if (!req.has_param("type")) {
                throw HttpError{400, "BadRequest", "missing 'type' parameter"};
            }
            const std::string type = req.get_param_value("type");
            const std::string roots = req.has_param("roots") ? req.get_param_value("roots") : "false";
            if (roots != "true" && roots != "false") {
                throw HttpError{400, "BadRequest", "'roots' must be true or false"};
            }
            std::shared_lock lock(kbMutex);
            Json out = Json::array();
            if (roots == "true") {
                for (const auto& o : treeRoots(kb, type)) out.push_back(json::toJson(o, true));
            } else {
                if (kb.findType(type) == nullptr) {
                    throw HttpError{404, "UnknownId", "no knowledge type '" + type + "'"};
                }
                for (const auto& id : kb.objectsOfType(type)) out.push_back(json::toJson(*kb.findObject(id), true));
            }
            reply(res, 200, out, kb.revision());
        }));

        server.Get(R"(/api/v1/objects/(.+)/children)", guarded([this](const httplib::Request& req,
                                                                       httplib::Response& res) {
            const std::string id = req.matches[1];
            std::shared_lock lock(kbMutex);
            std::set<std::string> enabled;
            if (req.has_param("links")) {
                for (auto& l : splitCommas(req.get_param_value("links"))) enabled.insert(std::move(l));
            } else {
                for (const auto& t : kb.linkTypes()) enabled.insert(t.id);
            }
            Json out = Json::array();
            for (const auto& c : treeChildren(kb, id, enabled)) {
                out.push_back(Json{{"linkTypeName", c.linkTypeName}, {"linkId", c.linkId}, {"object", json::toJson(c.child, true)}});
            }
            reply(res, 200, out, kb.revision());
        }));

        server.Post(R"(/api/v1/objects/(.+)/annotations)", guarded([this](const httplib::Request& req,
                                                                           httplib::Response& res) {
            const std::string id = req.matches[1];
            Json body = parseBody(req);
            Annotation requested = json::annotationFromJson(body);
            auto [annotation, rev] = mutate([&] {
                const Annotation& a = kb.annotate(id, requested.kind, requested.text);
                return std::pair{a, kb.revision()};
            });
            reply(res, 201, json::toJson(annotation), rev);
        }));

        server.Get(R"(/api/v1/objects/(.+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            std::shared_lock lock(kbMutex);
            const auto* o = kb.findObject(id);
            if (o == nullptr) {
                throw HttpError{404, "UnknownId", "no object '" + id + "'"};
            }
            reply(res, 200, json::toJson(*o, true), kb.revision());
        }));

        server.Post("/api/v1/query", guarded([this](const httplib::Request& req, httplib::Response& res) {
            Json body = parseBody(req);
            std::shared_lock lock(kbMutex);
            const SelectionQuery q = json::queryFromJson(body, kb);
            const VisibilityResult result = computeVisibility(kb, q);
            reply(res, 200, json::toJson(result, q), result.revision);
        }));

        server.Post("/api/v1/links", guarded([this](const httplib::Request& req, httplib::Response& res) {
            Json body = parseBody(req);
            const std::string type = json::stringMember(body, "linkTypeId");
            const std::string parent = json::stringMember(body, "parentId");
            const std::string child = json::stringMember(body, "childId");
            auto [link, created, rev] = mutate([&] {
                const auto before = kb.revision();
                const LinkObject& l = kb.addLink(type, parent, child);
                return std::tuple{l, kb.revision() != before, kb.revision()};
            });
            reply(res, created ? 201 : 200, json::toJson(link), rev);
        }));

        server.Delete(R"(/api/v1/links/(.+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            const auto rev = mutate([&] {
                kb.removeLink(id);
                return kb.revision();
            });
            reply(res, 200, Json{{"removed", id}}, rev);
        }));

        server.Get("/api/v1/events", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const std::uint64_t since = numberParam(req, "since", 0);
            const auto wait = std::min(std::chrono::milliseconds(numberParam(req, "wait", 0)), maxWait);
            if (wait.count() > 0) {
                std::unique_lock lock(waitMutex);
                changed.wait_for(lock, wait, [&] { return stopping || revision.load() > since; });
            }
            std::shared_lock lock(kbMutex);
            Json events = Json::array();
            for (const auto& e : kb.eventsSince(since)) events.push_back(json::toJson(e));
            reply(res, 200, Json{{"revision", kb.revision()}, {"events", std::move(events)}}, kb.revision());
        }));

        server.Post("/api/v1/save", guarded([this](const httplib::Request&, httplib::Response& res) {
            std::shared_lock lock(kbMutex);
            const std::string bytes = save(kb);
            const auto tmp = std::filesystem::path(kbFile.string() + ".tmp");
            {
                std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
                out << bytes;
                if (!out.flush()) {
                    throw HttpError{500, "IoError", "cannot write '" + tmp.string() + "'"};
                }
            }
            std::filesystem::rename(tmp, kbFile);
            reply(res, 200, Json{{"saved", kbFile.string()}, {"revision", kb.revision()}}, kb.revision());
        }));
    }

    static std::uint64_t numberParam(const httplib::Request& req, const char* key, std::uint64_t fallback) {
        if (!req.has_param(key)) {
            return fallback;
        }
        const std::string text = req.get_param_value(key);
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || p != text.data() + text.size()) {
            throw HttpError{400, "BadRequest", std::string("'") + key + "' must be a non-negative integer"};
        }
        return v;
    }

    void bind(const BindAddress& address) {
        const bool ok = address.port == 0 ? server.bind_to_any_port(address.host) > 0
                                          : server.bind_to_port(address.host, address.port);
        if (!ok) {
            throw std::runtime_error("cannot bind " + address.host + ":" + std::to_string(address.port));
        }
    }
};

TraceService::TraceService(KnowledgeBase kb, std::filesystem::path kbFile)
    : impl_(std::make_unique<Impl>(std::move(kb), std::move(kbFile))) {}

TraceService::~TraceService() { stop(); }

void TraceService::setMaxWait(std::chrono::milliseconds wait) { impl_->maxWait = wait; }

int TraceService::start(const BindAddress& address) {
    int port = address.port;
    if (port == 0) {
        port = impl_->server.bind_to_any_port(address.host);
        if (port <= 0) {
            throw std::runtime_error("cannot bind " + address.host);
        }
    } else {
        impl_->bind(address);
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return port;
}

void TraceService::run(const BindAddress& address) {
    impl_->bind(address);
    impl_->server.listen_after_bind();
}

void TraceService::stop() {
    {
        std::lock_guard g(impl_->waitMutex);
        impl_->stopping = true;
    }
    impl_->changed.notify_all();
    impl_->server.stop();
    if (impl_->thread.joinable()) {
        impl_->thread.join();
    }
}

std::uint64_t TraceService::revision() const { return impl_->revision.load(); }

}  // namespace tracegraph
