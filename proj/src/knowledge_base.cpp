#include "tracegraph/knowledge_base.hpp"

#include <algorithm>

namespace tracegraph {

std::string_view to_string(ColorKey c) {
    switch (c) {
        case ColorKey::Neutral: return "neutral";
        case ColorKey::Grey: return "grey";
        case ColorKey::Blue: return "blue";
        case ColorKey::Brown: return "brown";
        case ColorKey::Red: return "red";
        case ColorKey::Teal: return "teal";
        case ColorKey::Magenta: return "magenta";
        case ColorKey::Purple: return "purple";
        case ColorKey::Olive: return "olive";
        case ColorKey::Orange: return "orange";
    }
    return "neutral";
}

ColorKey parseColorKey(std::string_view s) {
    for (auto c : {ColorKey::Neutral, ColorKey::Grey, ColorKey::Blue, ColorKey::Brown, ColorKey::Red,
                   ColorKey::Teal, ColorKey::Magenta, ColorKey::Purple, ColorKey::Olive, ColorKey::Orange}) {
        if (to_string(c) == s) {
            return c;
        }
    }
    throw std::invalid_argument("unknown colour key '" + std::string(s) + "'");
}

std::string_view to_string(AnnotationKind k) {
    return k == AnnotationKind::Note ? "Note" : "DocumentLink";
}

std::string_view to_string(ChangeKind k) {
    switch (k) {
        case ChangeKind::TypeAdded: return "TypeAdded";
        case ChangeKind::ObjectAdded: return "ObjectAdded";
        case ChangeKind::ObjectRemoved: return "ObjectRemoved";
        case ChangeKind::LinkAdded: return "LinkAdded";
        case ChangeKind::LinkRemoved: return "LinkRemoved";
        case ChangeKind::AnnotationChanged: return "AnnotationChanged";
    }
    return "?";
}

ChangeKind parseChangeKind(std::string_view s) {
    for (auto k : {ChangeKind::TypeAdded, ChangeKind::ObjectAdded, ChangeKind::ObjectRemoved, ChangeKind::LinkAdded,
                   ChangeKind::LinkRemoved, ChangeKind::AnnotationChanged}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw std::invalid_argument("unknown change kind '" + std::string(s) + "'");
}

std::string_view to_string(KbErrorCode c) {
    switch (c) {
        case KbErrorCode::DuplicateName: return "DuplicateName";
        case KbErrorCode::UnknownType: return "UnknownType";
        case KbErrorCode::UnknownId: return "UnknownId";
        case KbErrorCode::SelfContainment: return "SelfContainment";
        case KbErrorCode::InvalidUri: return "InvalidUri";
        case KbErrorCode::RevisionTooOld: return "RevisionTooOld";
        case KbErrorCode::FormatError: return "FormatError";
        case KbErrorCode::VersionMismatch: return "VersionMismatch";
        case KbErrorCode::MissingBuiltins: return "MissingBuiltins";
    }
    return "?";
}

KbError::KbError(KbErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

const std::vector<KnowledgeType>& builtinKnowledgeTypes() {
    static const std::vector<KnowledgeType> kTypes = {
        {"Namespace", "Namespace", ColorKey::Grey, true},   {"Class", "Class", ColorKey::Blue, true},
        {"Constructor", "Constructor", ColorKey::Brown, true}, {"Method", "Method", ColorKey::Red, true},
        {"Property", "Property", ColorKey::Teal, true},     {"Variable", "Variable", ColorKey::Magenta, true},
        {"Delegate", "Delegate", ColorKey::Purple, true},   {"Event", "Event", ColorKey::Olive, true},
    };
    return kTypes;
}

const std::vector<LinkType>& builtinLinkTypes() {
    static const std::vector<LinkType> kLinks = {
        {"Contains", "Contains", true},         {"Calls", "Calls", true},   {"Uses", "Uses", true},
        {"ParameterOf", "ParameterOf", true},   {"Handles", "Handles", true},
        {"Instantiates", "Instantiates", true}, {"UserDefined", "UserDefined", true},
    };
    return kLinks;
}

std::string makeObjectId(std::string_view typeId, std::string_view qualifiedName) {
    return std::string(typeId) + ":" + std::string(qualifiedName);
}

std::string makeLinkId(std::string_view linkTypeId, std::string_view parentId, std::string_view childId) {
    return std::string(linkTypeId) + ":" + std::string(parentId) + "->" + std::string(childId);
}

namespace {

bool isAlpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool isDigitChar(char c) { return c >= '0' && c <= '9'; }
bool isHex(char c) { return isDigitChar(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F'); }

bool isUriChar(char c) {
    static constexpr std::string_view kAllowed = "-._~:/?#[]@!$&'()*+,;=";
    return isAlpha(c) || isDigitChar(c) || kAllowed.find(c) != std::string_view::npos;
}

const std::set<std::string> kEmptySet;

std::int64_t systemClock() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace

bool isValidUri(std::string_view uri) {
    const auto colon = uri.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == uri.size() || !isAlpha(uri[0])) {
        return false;
    }
    for (std::size_t k = 1; k < colon; ++k) {
        const char c = uri[k];
        if (!(isAlpha(c) || isDigitChar(c) || c == '+' || c == '-' || c == '.')) {
            return false;
        }
    }
    for (std::size_t k = colon + 1; k < uri.size(); ++k) {
        const char c = uri[k];
        if (c == '%') {
            if (k + 2 >= uri.size() || !isHex(uri[k + 1]) || !isHex(uri[k + 2])) {
                return false;
            }
            k += 2;
        } else if (!isUriChar(c)) {
            return false;
        }
    }
    return true;
}

// ---- Subscription -------------------------------------------------------------

void Subscription::push(const ChangeEvent& e) {
    {
        std::lock_guard lock(mutex_);
        queue_.push_back(e);
    }
    ready_.notify_all();
}

std::optional<ChangeEvent> Subscription::poll() {
    std::lock_guard lock(mutex_);
    if (queue_.empty()) {
        return std::nullopt;
    }
    ChangeEvent e = std::move(queue_.front());
    queue_.pop_front();
    return e;
}

std::optional<ChangeEvent> Subscription::waitNext(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mutex_);
    if (!ready_.wait_for(lock, timeout, [this] { return !queue_.empty(); })) {
        return std::nullopt;
    }
    ChangeEvent e = std::move(queue_.front());
    queue_.pop_front();
    return e;
}

std::vector<ChangeEvent> Subscription::drain() {
    std::lock_guard lock(mutex_);
    std::vector<ChangeEvent> out(std::make_move_iterator(queue_.begin()), std::make_move_iterator(queue_.end()));
    queue_.clear();
    return out;
}

// ---- KnowledgeBase ------------------------------------------------------------

KnowledgeBase::KnowledgeBase() : KnowledgeBase(KnowledgeBaseOptions{}) {}

KnowledgeBase::KnowledgeBase(KnowledgeBaseOptions options) : options_(std::move(options)) {
    if (!options_.clock) {
        options_.clock = systemClock;
    }
    if (options_.withBuiltins) {
        types_ = builtinKnowledgeTypes();
        linkTypes_ = builtinLinkTypes();
    }
}

KnowledgeBase::KnowledgeBase(const KnowledgeBase& other)
    : options_(other.options_),
      types_(other.types_),
      linkTypes_(other.linkTypes_),
      objects_(other.objects_),
      links_(other.links_),
      byType_(other.byType_),
      outgoing_(other.outgoing_),
      incoming_(other.incoming_),
      revision_(other.revision_),
      history_(other.history_) {}

KnowledgeBase& KnowledgeBase::operator=(const KnowledgeBase& other) {
    if (this != &other) {
        KnowledgeBase copy(other);
        *this = std::move(copy);
    }
    return *this;
}

void KnowledgeBase::record(ChangeEvent event) {
    event.revision = ++revision_;
    for (auto it = subscribers_.begin(); it != subscribers_.end();) {
        if (auto sub = it->lock()) {
            sub->push(event);
            ++it;
        } else {
            it = subscribers_.erase(it);
        }
    }
    history_.push_back(std::move(event));
    if (options_.historyLimit) {
        while (history_.size() > *options_.historyLimit) {
            history_.pop_front();
        }
    }
}

void KnowledgeBase::requireObject(const std::string& id) const {
    if (!objects_.count(id)) {
        throw KbError(KbErrorCode::UnknownId, "no object '" + id + "'");
    }
}

const KnowledgeType& KnowledgeBase::addType(const std::string& name, ColorKey colorKey) {
    if (name.empty()) {
        throw KbError(KbErrorCode::FormatError, "type name must not be empty");
    }
    for (const auto& t : types_) {
        if (t.name == name || t.id == name) {
            throw KbError(KbErrorCode::DuplicateName, "type '" + name + "' already exists");
        }
    }
    types_.push_back(KnowledgeType{name, name, colorKey, false});
    record(ChangeEvent{0, ChangeKind::TypeAdded, name, types_.back(), {}, {}, {}});
    return types_.back();
}

const KnowledgeObject& KnowledgeBase::addObject(const std::string& typeId, const std::string& qualifiedName,
                                                const std::string& displayName, Access access,
                                                std::optional<std::string> kindTag) {
    if (findType(typeId) == nullptr) {
        throw KbError(KbErrorCode::UnknownType, "no type '" + typeId + "'");
    }
    std::string id = makeObjectId(typeId, qualifiedName);
    if (auto it = objects_.find(id); it != objects_.end()) {
        return it->second;
    }
    KnowledgeObject obj{id, typeId, displayName, qualifiedName, access, std::move(kindTag), {}};
    auto [it, inserted] = objects_.emplace(id, std::move(obj));
    byType_[typeId].insert(id);
    record(ChangeEvent{0, ChangeKind::ObjectAdded, id, {}, it->second, {}, {}});
    return it->second;
}

const LinkObject& KnowledgeBase::addLink(const std::string& linkTypeId, const std::string& parentId,
                                         const std::string& childId) {
    if (findLinkType(linkTypeId) == nullptr) {
        throw KbError(KbErrorCode::UnknownId, "no link type '" + linkTypeId + "'");
    }
    requireObject(parentId);
    requireObject(childId);
    if (linkTypeId == builtin::Contains && parentId == childId) {
        throw KbError(KbErrorCode::SelfContainment, "'" + parentId + "' cannot contain itself");
    }
    std::string id = makeLinkId(linkTypeId, parentId, childId);
    if (auto it = links_.find(id); it != links_.end()) {
        return it->second;
    }
    auto [it, inserted] = links_.emplace(id, LinkObject{id, linkTypeId, parentId, childId});
    outgoing_[parentId].insert(id);
    incoming_[childId].insert(id);
    record(ChangeEvent{0, ChangeKind::LinkAdded, id, {}, {}, it->second, {}});
    return it->second;
}

void KnowledgeBase::removeLink(const std::string& id) {
    const std::string linkId = id;  // id may refer into links_
    auto it = links_.find(linkId);
    if (it == links_.end()) {
        throw KbError(KbErrorCode::UnknownId, "no link '" + linkId + "'");
    }
    LinkObject link = std::move(it->second);
    links_.erase(it);
    outgoing_[link.parentId].erase(linkId);
    incoming_[link.childId].erase(linkId);
    record(ChangeEvent{0, ChangeKind::LinkRemoved, linkId, {}, {}, std::move(link), {}});
}

void KnowledgeBase::removeObject(const std::string& id) {
    const std::string objectId = id;
    requireObject(objectId);
    std::set<std::string> incident = outgoingLinks(objectId);
    const auto& in = incomingLinks(objectId);
    incident.insert(in.begin(), in.end());
    for (const auto& linkId : incident) {
        removeLink(linkId);
    }
    auto it = objects_.find(objectId);
    const std::string typeId = it->second.typeId;
    objects_.erase(it);
    byType_[typeId].erase(objectId);
    outgoing_.erase(objectId);
    incoming_.erase(objectId);
    record(ChangeEvent{0, ChangeKind::ObjectRemoved, objectId, {}, {}, {}, {}});
}

const Annotation& KnowledgeBase::annotate(const std::string& objectId, AnnotationKind kind, const std::string& text) {
    return annotate(objectId, Annotation{kind, text, options_.clock()});
}

const Annotation& KnowledgeBase::annotate(const std::string& objectId, const Annotation& annotation) {
    auto it = objects_.find(objectId);
    if (it == objects_.end()) {
        throw KbError(KbErrorCode::UnknownId, "no object '" + objectId + "'");
    }
    if (annotation.kind == AnnotationKind::DocumentLink && !isValidUri(annotation.text)) {
        throw KbError(KbErrorCode::InvalidUri, "'" + annotation.text + "' is not a valid URI");
    }
    it->second.annotations.push_back(annotation);
    record(ChangeEvent{0, ChangeKind::AnnotationChanged, objectId, {}, {}, {}, annotation});
    return it->second.annotations.back();
}

void KnowledgeBase::apply(const ChangeEvent& event) {
    auto missing = [&](const char* what) {
        return KbError(KbErrorCode::FormatError,
                       std::string(to_string(event.kind)) + " event without " + what + " payload");
    };
    switch (event.kind) {
        case ChangeKind::TypeAdded:
            if (!event.type) throw missing("type");
            addType(event.type->name, event.type->colorKey);
            break;
        case ChangeKind::ObjectAdded:
            if (!event.object) throw missing("object");
            addObject(event.object->typeId, event.object->qualifiedName, event.object->displayName,
                      event.object->access, event.object->kindTag);
            break;
        case ChangeKind::ObjectRemoved:
            removeObject(event.subjectId);
            break;
        case ChangeKind::LinkAdded:
            if (!event.link) throw missing("link");
            addLink(event.link->linkTypeId, event.link->parentId, event.link->childId);
            break;
        case ChangeKind::LinkRemoved:
            removeLink(event.subjectId);
            break;
        case ChangeKind::AnnotationChanged:
            if (!event.annotation) throw missing("annotation");
            annotate(event.subjectId, *event.annotation);
            break;
    }
    if (revision_ != event.revision) {
        throw KbError(KbErrorCode::FormatError, "replayed event " + std::to_string(event.revision) +
                                                    " landed at revision " + std::to_string(revision_));
    }
}

std::shared_ptr<Subscription> KnowledgeBase::subscribe() {
    auto sub = std::make_shared<Subscription>();
    subscribers_.push_back(sub);
    return sub;
}

std::vector<ChangeEvent> KnowledgeBase::eventsSince(std::uint64_t revision) const {
    if (revision >= revision_) {
        return {};
    }
    const std::uint64_t firstRetained = history_.empty() ? revision_ + 1 : history_.front().revision;
    if (revision + 1 < firstRetained) {
        throw KbError(KbErrorCode::RevisionTooOld, "history before revision " + std::to_string(firstRetained) +
                                                       " has been compacted");
    }
    std::vector<ChangeEvent> out;
    out.reserve(revision_ - revision);
    for (const auto& e : history_) {
        if (e.revision > revision) {
            out.push_back(e);
        }
    }
    return out;
}

const KnowledgeType* KnowledgeBase::findType(std::string_view id) const {
    for (const auto& t : types_) {
        if (t.id == id) {
            return &t;
        }
    }
    return nullptr;
}

const LinkType* KnowledgeBase::findLinkType(std::string_view id) const {
    for (const auto& t : linkTypes_) {
        if (t.id == id) {
            return &t;
        }
    }
    return nullptr;
}

const KnowledgeObject* KnowledgeBase::findObject(const std::string& id) const {
    auto it = objects_.find(id);
    return it == objects_.end() ? nullptr : &it->second;
}

const LinkObject* KnowledgeBase::findLink(const std::string& id) const {
    auto it = links_.find(id);
    return it == links_.end() ? nullptr : &it->second;
}

const std::set<std::string>& KnowledgeBase::objectsOfType(const std::string& typeId) const {
    auto it = byType_.find(typeId);
    return it == byType_.end() ? kEmptySet : it->second;
}

const std::set<std::string>& KnowledgeBase::outgoingLinks(const std::string& objectId) const {
    auto it = outgoing_.find(objectId);
    return it == outgoing_.end() ? kEmptySet : it->second;
}

const std::set<std::string>& KnowledgeBase::incomingLinks(const std::string& objectId) const {
    auto it = incoming_.find(objectId);
    return it == incoming_.end() ? kEmptySet : it->second;
}

bool KnowledgeBase::hasBuiltins() const {
    for (const auto& t : builtinKnowledgeTypes()) {
        if (findType(t.id) == nullptr) {
            return false;
        }
    }
    for (const auto& t : builtinLinkTypes()) {
        if (findLinkType(t.id) == nullptr) {
            return false;
        }
    }
    return true;
}

bool KnowledgeBase::sameContent(const KnowledgeBase& other) const {
    return types_ == other.types_ && linkTypes_ == other.linkTypes_ && objects_ == other.objects_ &&
           links_ == other.links_;
}

}  // namespace tracegraph
