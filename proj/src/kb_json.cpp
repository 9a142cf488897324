#include "kb_json.hpp"

#include <algorithm>

namespace tracegraph::json {

namespace {

[[noreturn]] void formatError(const std::string& what) { throw KbError(KbErrorCode::FormatError, what); }

template <typename F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        formatError(std::string(what) + ": " + e.what());
    }
}

}  // namespace

const Json& member(const Json& j, const char* key) {
    if (!j.is_object()) {
        formatError(std::string("expected an object holding '") + key + "'");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        formatError(std::string("missing key '") + key + "'");
    }
    return *it;
}

std::string stringMember(const Json& j, const char* key) {
    const Json& v = member(j, key);
    if (!v.is_string()) {
        formatError(std::string("key '") + key + "' must be a string");
    }
    return v.get<std::string>();
}

static bool boolMember(const Json& j, const char* key) {
    const Json& v = member(j, key);
    if (!v.is_boolean()) {
        formatError(std::string("key '") + key + "' must be a boolean");
    }
    return v.get<bool>();
}

Json toJson(const KnowledgeType& t) {
    return Json{{"id", t.id}, {"name", t.name}, {"colorKey", to_string(t.colorKey)}, {"builtin", t.builtin}};
}

Json toJson(const LinkType& t) { return Json{{"id", t.id}, {"name", t.name}, {"builtin", t.builtin}}; }

Json toJson(const Annotation& a) {
    Json j{{"kind", to_string(a.kind)}};
    j[a.kind == AnnotationKind::Note ? "text" : "uri"] = a.text;
    j["createdAt"] = a.createdAt;
    return j;
}

Json toJson(const KnowledgeObject& o, bool withAnnotations) {
    Json j{{"id", o.id},
           {"typeId", o.typeId},
           {"displayName", o.displayName},
           {"qualifiedName", o.qualifiedName},
           {"access", to_string(o.access)}};
    if (o.kindTag) {
        j["kindTag"] = *o.kindTag;
    }
    if (withAnnotations) {
        Json list = Json::array();
        for (const auto& a : o.annotations) {
            list.push_back(toJson(a));
        }
        j["annotations"] = std::move(list);
    }
    return j;
}

Json toJson(const LinkObject& l) {
    return Json{{"id", l.id}, {"linkTypeId", l.linkTypeId}, {"parentId", l.parentId}, {"childId", l.childId}};
}

Json toJson(const ChangeEvent& e) {
    Json j{{"revision", e.revision}, {"kind", to_string(e.kind)}, {"subjectId", e.subjectId}};
    if (e.type) j["type"] = toJson(*e.type);
    if (e.object) j["object"] = toJson(*e.object, false);
    if (e.link) j["link"] = toJson(*e.link);
    if (e.annotation) j["annotation"] = toJson(*e.annotation);
    return j;
}

KnowledgeType typeFromJson(const Json& j) {
    KnowledgeType t;
    t.id = stringMember(j, "id");
    t.name = stringMember(j, "name");
    t.colorKey = guarded("colorKey", [&] { return parseColorKey(stringMember(j, "colorKey")); });
    t.builtin = boolMember(j, "builtin");
    return t;
}

Annotation annotationFromJson(const Json& j) {
    Annotation a;
    const std::string kind = stringMember(j, "kind");
    if (kind == "Note") {
        a.kind = AnnotationKind::Note;
        a.text = stringMember(j, "text");
    } else if (kind == "DocumentLink") {
        a.kind = AnnotationKind::DocumentLink;
        a.text = stringMember(j, "uri");
    } else {
        formatError("unknown annotation kind '" + kind + "'");
    }
    if (j.contains("createdAt")) {
        const Json& c = j["createdAt"];
        if (!c.is_number_integer()) {
            formatError("createdAt must be an integer");
        }
        a.createdAt = c.get<std::int64_t>();
    }
    return a;
}

KnowledgeObject objectFromJson(const Json& j) {
    KnowledgeObject o;
    o.id = stringMember(j, "id");
    o.typeId = stringMember(j, "typeId");
    o.displayName = stringMember(j, "displayName");
    o.qualifiedName = stringMember(j, "qualifiedName");
    o.access = guarded("access", [&] { return parseAccess(stringMember(j, "access")); });
    if (j.contains("kindTag")) {
        o.kindTag = stringMember(j, "kindTag");
    }
    return o;
}

LinkObject linkFromJson(const Json& j) {
    return LinkObject{stringMember(j, "id"), stringMember(j, "linkTypeId"), stringMember(j, "parentId"),
                      stringMember(j, "childId")};
}

ChangeEvent eventFromJson(const Json& j) {
    ChangeEvent e;
    const Json& rev = member(j, "revision");
    if (!rev.is_number_unsigned()) {
        formatError("revision must be a non-negative integer");
    }
    e.revision = rev.get<std::uint64_t>();
    e.kind = guarded("kind", [&] { return parseChangeKind(stringMember(j, "kind")); });
    e.subjectId = stringMember(j, "subjectId");
    if (j.contains("type")) e.type = typeFromJson(j["type"]);
    if (j.contains("object")) e.object = objectFromJson(j["object"]);
    if (j.contains("link")) e.link = linkFromJson(j["link"]);
    if (j.contains("annotation")) e.annotation = annotationFromJson(j["annotation"]);
    return e;
}

static std::vector<std::string> stringArray(const Json& j, const char* key) {
    const Json& v = member(j, key);
    if (!v.is_array()) {
        formatError(std::string("'") + key + "' must be an array");
    }
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) {
            formatError(std::string("'") + key + "' must hold strings");
        }
        out.push_back(e.get<std::string>());
    }
    return out;
}

SelectionQuery queryFromJson(const Json& body, const KnowledgeBase& kb) {
    if (!body.is_object()) {
        formatError("query must be a JSON object");
    }
    SelectionQuery q;
    if (body.contains("displayedTypeIds")) {
        q.displayedTypeIds = stringArray(body, "displayedTypeIds");
    } else {
        for (const auto& t : kb.types()) q.displayedTypeIds.push_back(t.id);
    }
    if (body.contains("checked")) {
        const Json& checked = body["checked"];
        if (!checked.is_object()) {
            formatError("'checked' must map type ids to id arrays");
        }
        for (const auto& [typeId, ids] : checked.items()) {
            auto list = stringArray(checked, typeId.c_str());
            q.checked[typeId].insert(list.begin(), list.end());
        }
    }
    if (body.contains("enabledLinkTypeIds")) {
        for (auto& l : stringArray(body, "enabledLinkTypeIds")) q.enabledLinkTypeIds.insert(std::move(l));
    } else {
        for (const auto& t : kb.linkTypes()) q.enabledLinkTypeIds.insert(t.id);
    }
    return q;
}

Json toJson(const VisibilityResult& result, const SelectionQuery& query) {
    Json visible = Json::object();
    for (const auto& t : query.displayedTypeIds) {
        auto it = result.visible.find(t);
        visible[t] = it == result.visible.end() ? Json::array() : Json(it->second);
    }
    return Json{{"revision", result.revision}, {"visible", std::move(visible)}};
}

}  // namespace tracegraph::json

namespace tracegraph {

using json::Json;

std::string save(const KnowledgeBase& kb) {
    Json doc;
    doc["version"] = kKnowledgeBaseFormatVersion;
    Json types = Json::array();
    for (const auto& t : kb.types()) {
        types.push_back(json::toJson(t));
    }
    doc["knowledgeTypes"] = std::move(types);

    std::vector<const LinkType*> linkTypes;
    for (const auto& t : kb.linkTypes()) {
        linkTypes.push_back(&t);
    }
    std::sort(linkTypes.begin(), linkTypes.end(), [](auto* a, auto* b) { return a->id < b->id; });
    Json lt = Json::array();
    for (auto* t : linkTypes) {
        lt.push_back(json::toJson(*t));
    }
    doc["linkTypes"] = std::move(lt);

    // std::map iteration is already id order.
    Json objects = Json::array();
    Json annotations = Json::array();
    for (const auto& [id, o] : kb.objects()) {
        objects.push_back(json::toJson(o, false));
        for (const auto& a : o.annotations) {
            Json entry{{"objectId", id}};
            const Json body = json::toJson(a);
            for (const auto& [k, v] : body.items()) {
                entry[k] = v;
            }
            annotations.push_back(std::move(entry));
        }
    }
    doc["objects"] = std::move(objects);
    Json links = Json::array();
    for (const auto& [id, l] : kb.links()) {
        links.push_back(json::toJson(l));
    }
    doc["links"] = std::move(links);
    doc["annotations"] = std::move(annotations);
    return doc.dump(2) + "\n";
}

namespace {

KnowledgeBase loadDocument(const Json& doc) {
    if (!doc.is_object()) {
        throw KbError(KbErrorCode::FormatError, "top level must be an object");
    }
    const std::string version = json::stringMember(doc, "version");
    if (version != kKnowledgeBaseFormatVersion) {
        throw KbError(KbErrorCode::VersionMismatch,
                      "expected version " + std::string(kKnowledgeBaseFormatVersion) + ", found " + version);
    }
    auto array = [&](const char* key) -> const Json& {
        const Json& v = json::member(doc, key);
        if (!v.is_array()) {
            throw KbError(KbErrorCode::FormatError, std::string("'") + key + "' must be an array");
        }
        return v;
    };

    std::vector<KnowledgeType> types;
    for (const auto& j : array("knowledgeTypes")) {
        types.push_back(json::typeFromJson(j));
    }
    const auto& builtins = builtinKnowledgeTypes();
    const bool withBuiltins = std::any_of(types.begin(), types.end(), [](const auto& t) { return t.builtin; });
    if (withBuiltins && (types.size() < builtins.size() ||
                         !std::equal(builtins.begin(), builtins.end(), types.begin()))) {
        throw KbError(KbErrorCode::FormatError, "builtin knowledge types are incomplete or out of order");
    }

    std::vector<LinkType> linkTypes;
    for (const auto& j : array("linkTypes")) {
        linkTypes.push_back(LinkType{json::stringMember(j, "id"), json::stringMember(j, "name"),
                                     json::member(j, "builtin").is_boolean() && j["builtin"].get<bool>()});
    }
    std::vector<LinkType> expected = withBuiltins ? builtinLinkTypes() : std::vector<LinkType>{};
    std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(linkTypes.begin(), linkTypes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    if (linkTypes != expected) {
        throw KbError(KbErrorCode::FormatError, "link types must be exactly the builtin set");
    }

    KnowledgeBaseOptions options;
    options.withBuiltins = withBuiltins;
    KnowledgeBase kb(std::move(options));
    for (std::size_t k = withBuiltins ? builtins.size() : 0; k < types.size(); ++k) {
        if (types[k].builtin || types[k].id != types[k].name) {
            throw KbError(KbErrorCode::FormatError, "malformed custom type '" + types[k].id + "'");
        }
        kb.addType(types[k].name, types[k].colorKey);
    }

    try {
        for (const auto& j : array("objects")) {
            KnowledgeObject o = json::objectFromJson(j);
            const auto before = kb.revision();
            const auto& added = kb.addObject(o.typeId, o.qualifiedName, o.displayName, o.access, o.kindTag);
            if (added.id != o.id || kb.revision() == before) {
                throw KbError(KbErrorCode::FormatError, "object '" + o.id + "' is duplicated or has a foreign id");
            }
        }
        for (const auto& j : array("links")) {
            LinkObject l = json::linkFromJson(j);
            const auto before = kb.revision();
            const auto& added = kb.addLink(l.linkTypeId, l.parentId, l.childId);
            if (added.id != l.id || kb.revision() == before) {
                throw KbError(KbErrorCode::FormatError, "link '" + l.id + "' is duplicated or has a foreign id");
            }
        }
        for (const auto& j : array("annotations")) {
            kb.annotate(json::stringMember(j, "objectId"), json::annotationFromJson(j));
        }
    } catch (const KbError& e) {
        if (e.code() == KbErrorCode::FormatError) {
            throw;
        }
        throw KbError(KbErrorCode::FormatError, e.what());
    }
    return kb;
}

}  // namespace

KnowledgeBase load(std::string_view bytes) {
    Json doc;
    try {
        doc = Json::parse(bytes.begin(), bytes.end());
    } catch (const nlohmann::json::exception& e) {
        throw KbError(KbErrorCode::FormatError, e.what());
    }
    try {
        return loadDocument(doc);
    } catch (const nlohmann::json::exception& e) {
        throw KbError(KbErrorCode::FormatError, e.what());
    }
}

}  // namespace tracegraph
