#pragma once

#include "tracegraph/code_model.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tracegraph {

/// Text colour of a column's entries. Parameters (Variable objects tagged
/// "parameter") use Orange regardless of their type's key.
enum class ColorKey { Neutral, Grey, Blue, Brown, Red, Teal, Magenta, Purple, Olive, Orange };

std::string_view to_string(ColorKey c);
ColorKey parseColorKey(std::string_view s);

struct KnowledgeType {
    std::string id;
    std::string name;
    ColorKey colorKey = ColorKey::Neutral;
    bool builtin = false;

    friend bool operator==(const KnowledgeType&, const KnowledgeType&) = default;
};

struct LinkType {
    std::string id;
    std::string name;
    bool builtin = false;

    friend bool operator==(const LinkType&, const LinkType&) = default;
};

enum class AnnotationKind { Note, DocumentLink };

std::string_view to_string(AnnotationKind k);

struct Annotation {
    AnnotationKind kind = AnnotationKind::Note;
    std::string text;               // Note body, or the URI of a DocumentLink
    std::int64_t createdAt = 0;     // milliseconds since the Unix epoch

    friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct KnowledgeObject {
    std::string id;
    std::string typeId;
    std::string displayName;
    std::string qualifiedName;
    Access access = Access::Other;
    std::optional<std::string> kindTag;
    std::vector<Annotation> annotations;

    friend bool operator==(const KnowledgeObject&, const KnowledgeObject&) = default;
};

struct LinkObject {
    std::string id;
    std::string linkTypeId;
    std::string parentId;
    std::string childId;

    friend bool operator==(const LinkObject&, const LinkObject&) = default;
};

enum class ChangeKind { TypeAdded, ObjectAdded, ObjectRemoved, LinkAdded, LinkRemoved, AnnotationChanged };

std::string_view to_string(ChangeKind k);
ChangeKind parseChangeKind(std::string_view s);

/// One mutation. Events carry enough data to replay the mutation.
struct ChangeEvent {
    std::uint64_t revision = 0;
    ChangeKind kind = ChangeKind::ObjectAdded;
    std::string subjectId;  // type, object or link id; the annotated object for AnnotationChanged
    std::optional<KnowledgeType> type;
    std::optional<KnowledgeObject> object;
    std::optional<LinkObject> link;
    std::optional<Annotation> annotation;

    friend bool operator==(const ChangeEvent&, const ChangeEvent&) = default;
};

namespace builtin {
inline constexpr std::string_view Namespace = "Namespace";
inline constexpr std::string_view Class = "Class";
inline constexpr std::string_view Constructor = "Constructor";
inline constexpr std::string_view Method = "Method";
inline constexpr std::string_view Property = "Property";
inline constexpr std::string_view Variable = "Variable";
inline constexpr std::string_view Delegate = "Delegate";
inline constexpr std::string_view Event = "Event";

inline constexpr std::string_view Contains = "Contains";
inline constexpr std::string_view Calls = "Calls";
inline constexpr std::string_view Uses = "Uses";
inline constexpr std::string_view ParameterOf = "ParameterOf";
inline constexpr std::string_view Handles = "Handles";
inline constexpr std::string_view Instantiates = "Instantiates";
inline constexpr std::string_view UserDefined = "UserDefined";
}  // namespace builtin

const std::vector<KnowledgeType>& builtinKnowledgeTypes();
const std::vector<LinkType>& builtinLinkTypes();

enum class KbErrorCode {
    DuplicateName,
    UnknownType,
    UnknownId,
    SelfContainment,
    InvalidUri,
    RevisionTooOld,
    FormatError,
    VersionMismatch,
    MissingBuiltins,
};

std::string_view to_string(KbErrorCode c);

class KbError : public std::runtime_error {
public:
    KbError(KbErrorCode code, const std::string& detail);
    KbErrorCode code() const noexcept { return code_; }

private:
    KbErrorCode code_;
};

std::string makeObjectId(std::string_view typeId, std::string_view qualifiedName);
std::string makeLinkId(std::string_view linkTypeId, std::string_view parentId, std::string_view childId);

/// RFC 3986 `scheme ":" rest` with only URI characters and valid %-escapes.
bool isValidUri(std::string_view uri);

/// Per-subscriber event queue. The knowledge base appends under the queue's
/// own lock, so a slow reader never blocks the writer.
class Subscription {
public:
    std::optional<ChangeEvent> poll();
    std::optional<ChangeEvent> waitNext(std::chrono::milliseconds timeout);
    std::vector<ChangeEvent> drain();

private:
    friend class KnowledgeBase;
    void push(const ChangeEvent& e);

    std::mutex mutex_;
    std::condition_variable ready_;
    std::deque<ChangeEvent> queue_;
};

struct KnowledgeBaseOptions {
    bool withBuiltins = true;
    /// Keep at most this many events for eventsSince(); unset keeps all.
    std::optional<std::size_t> historyLimit;
    std::function<std::int64_t()> clock;
};

/// The typed object/link graph. Not internally synchronised: callers keep a
/// single writer and take snapshots (copies) for concurrent readers.
class KnowledgeBase {
public:
    KnowledgeBase();
    explicit KnowledgeBase(KnowledgeBaseOptions options);

    // Copies share content and history but never subscribers.
    KnowledgeBase(const KnowledgeBase& other);
    KnowledgeBase& operator=(const KnowledgeBase& other);
    KnowledgeBase(KnowledgeBase&&) noexcept = default;
    KnowledgeBase& operator=(KnowledgeBase&&) noexcept = default;

    // ---- mutations ----------------------------------------------------------

    const KnowledgeType& addType(const std::string& name, ColorKey colorKey);
    const KnowledgeObject& addObject(const std::string& typeId, const std::string& qualifiedName,
                                     const std::string& displayName, Access access,
                                     std::optional<std::string> kindTag = std::nullopt);
    const LinkObject& addLink(const std::string& linkTypeId, const std::string& parentId,
                              const std::string& childId);
    void removeLink(const std::string& linkId);
    /// Removes incident links first (one LinkRemoved each, by link id), then
    /// the object.
    void removeObject(const std::string& objectId);
    /// Appends a note or document link stamped with the clock.
    const Annotation& annotate(const std::string& objectId, AnnotationKind kind, const std::string& text);
    /// Appends an annotation with a caller-chosen timestamp (replay, load).
    const Annotation& annotate(const std::string& objectId, const Annotation& annotation);

    /// Re-applies a recorded event; the resulting revision must equal the
    /// event's revision.
    void apply(const ChangeEvent& event);

    // ---- events -------------------------------------------------------------

    std::shared_ptr<Subscription> subscribe();
    std::vector<ChangeEvent> eventsSince(std::uint64_t revision) const;
    std::uint64_t revision() const noexcept { return revision_; }

    // ---- reads --------------------------------------------------------------

    const std::vector<KnowledgeType>& types() const noexcept { return types_; }
    const std::vector<LinkType>& linkTypes() const noexcept { return linkTypes_; }
    const KnowledgeType* findType(std::string_view id) const;
    const LinkType* findLinkType(std::string_view id) const;
    const KnowledgeObject* findObject(const std::string& id) const;
    const LinkObject* findLink(const std::string& id) const;
    const std::map<std::string, KnowledgeObject>& objects() const noexcept { return objects_; }
    const std::map<std::string, LinkObject>& links() const noexcept { return links_; }
    const std::set<std::string>& objectsOfType(const std::string& typeId) const;
    const std::set<std::string>& outgoingLinks(const std::string& objectId) const;
    const std::set<std::string>& incomingLinks(const std::string& objectId) const;
    bool hasBuiltins() const;

    /// Equality of types, link types, objects (with annotations) and links.
    bool sameContent(const KnowledgeBase& other) const;

private:
    void record(ChangeEvent event);
    void requireObject(const std::string& id) const;

    KnowledgeBaseOptions options_;
    std::vector<KnowledgeType> types_;
    std::vector<LinkType> linkTypes_;
    std::map<std::string, KnowledgeObject> objects_;
    std::map<std::string, LinkObject> links_;
    std::map<std::string, std::set<std::string>> byType_;
    std::map<std::string, std::set<std::string>> outgoing_;
    std::map<std::string, std::set<std::string>> incoming_;
    std::uint64_t revision_ = 0;
    std::deque<ChangeEvent> history_;
    std::vector<std::weak_ptr<Subscription>> subscribers_;
};

inline constexpr std::string_view kKnowledgeBaseFormatVersion = "1.0";
inline constexpr std::string_view kKnowledgeBaseExtension = ".tracekb.json";

/// Single JSON document; every array except knowledgeTypes (column order)
/// sorted by id.
std::string save(const KnowledgeBase& kb);
/// Rebuilds a knowledge base through the mutation API, so the loaded base
/// has a full event history. Throws KbError(FormatError | VersionMismatch).
KnowledgeBase load(std::string_view bytes);

}  // namespace tracegraph
