#include "support.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <sys/wait.h>

namespace tgtest {

using namespace tracegraph;

fs::path fixturesDir() { return TRACEGRAPH_FIXTURES_DIR; }
fs::path cliPath() { return TRACEGRAPH_CLI_PATH; }

std::string readFile(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void writeFile(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out.flush()) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

TempDir::TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "tgtest-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr) {
        throw std::runtime_error("mkdtemp failed");
    }
    path_ = tmpl;
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

namespace {

std::string shellQuote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    return out + "'";
}

}  // namespace

CliResult runCli(const std::vector<std::string>& args, const std::vector<std::string>& env) {
    TempDir tmp;
    const fs::path errFile = tmp / "stderr.txt";
    std::string cmd;
    for (const auto& e : env) cmd += e + " ";
    cmd += shellQuote(cliPath().string());
    for (const auto& a : args) cmd += " " + shellQuote(a);
    cmd += " 2>" + shellQuote(errFile.string());

    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        throw std::runtime_error("popen failed");
    }
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
        r.out.append(buf, n);
    }
    const int status = pclose(pipe);
    r.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (fs::exists(errFile)) {
        r.err = readFile(errFile);
    }
    return r;
}

Enumeration readEnumeration(const fs::path& path) {
    Enumeration e;
    std::istringstream in(readFile(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string tag, a, b, c;
        fields >> tag >> a >> b >> c;
        if (tag == "object") {
            e.objectIds.insert(makeObjectId(a, b));
            ++e.objectsPerType[a];
        } else if (tag == "link") {
            e.linkIds.insert(makeLinkId(a, b, c));
            ++e.linksPerType[a];
        } else if (tag == "unresolved") {
            e.unresolved.insert(a + " " + b + " " + c);
        } else if (tag == "ambiguous") {
            e.ambiguous.insert(a + " " + b + " " + c);
        } else {
            throw std::runtime_error("bad enumeration line: " + line);
        }
    }
    return e;
}

std::string tokenTable(const std::vector<Token>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        out += std::to_string(t.pos.line) + ":" + std::to_string(t.pos.column) + " ";
        out += std::string(to_string(t.kind)) + " ";
        for (char c : t.text) {
            switch (c) {
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\r': out += "\\r"; break;
                case '\t': out += "\\t"; break;
                default: out += c;
            }
        }
        out += '\n';
    }
    return out;
}

// ---- random code models -------------------------------------------------------

namespace {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

int upTo(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n)(rng); }
bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

const std::vector<std::string> kIdents = {"a", "b", "Run", "Init", "Item", "Value", "x1", "_tmp", "Data", "Node", "Zeta", "Éclair"};
const std::vector<std::string> kTypes = {
    "int", "void", "string", "List<int>", "Dictionary<string,List<int>>", "a&b", "say \"hi\"",
    "it's", "<>", "tab\there", "line\nbreak", "cr\rx", "int[]", "Ns.Type", " padded ", "]]>"};
const std::vector<std::string> kFiles = {"A.cs", "dir/B.cs", "we ird & \"odd\".cs", "<x>.cs"};

Access randomAccess(Rng& rng) { return pick(rng, std::vector<Access>{Access::Public, Access::Private, Access::Other}); }

std::vector<Reference> randomRefs(Rng& rng) {
    std::vector<Reference> refs;
    for (int k = upTo(rng, 4); k > 0; --k) {
        Reference r;
        r.kind = pick(rng, std::vector<RefKind>{RefKind::Call, RefKind::Use, RefKind::Instantiate});
        r.name = pick(rng, kIdents);
        r.pos = SourcePosition{pick(rng, kFiles), static_cast<std::uint32_t>(1 + upTo(rng, 5000)),
                               static_cast<std::uint32_t>(1 + upTo(rng, 300))};
        refs.push_back(r);
    }
    return refs;
}

std::vector<ParamDecl> randomParams(Rng& rng) {
    std::vector<ParamDecl> ps;
    for (int k = upTo(rng, 3); k > 0; --k) ps.push_back(ParamDecl{pick(rng, kIdents), pick(rng, kTypes), ""});
    return ps;
}

DelegateDecl randomDelegate(Rng& rng) {
    return DelegateDecl{pick(rng, kIdents), "", randomAccess(rng), pick(rng, kTypes) + "(" + pick(rng, kTypes) + " p)"};
}

ClassDecl randomClass(Rng& rng, int depth) {
    ClassDecl c;
    c.name = pick(rng, kIdents);
    c.access = randomAccess(rng);
    // Same-named classes merge, so the kind follows the name.
    c.kind = TypeKind(std::hash<std::string>{}(c.name) % 3);
    for (int k = upTo(rng, 2); k > 0; --k) c.baseTypes.push_back(pick(rng, std::vector<std::string>{"Base", "IFoo<T,U>", "a&b", "Ns.Root"}));
    for (int k = upTo(rng, 2); k > 0; --k) {
        c.constructors.push_back(ConstructorDecl{c.name, "", randomAccess(rng), randomParams(rng), randomRefs(rng), coin(rng, 0.2)});
    }
    for (int k = upTo(rng, 3); k > 0; --k) {
        c.methods.push_back(MethodDecl{pick(rng, kIdents), "", randomAccess(rng), pick(rng, kTypes), randomParams(rng),
                                       randomRefs(rng), coin(rng, 0.2)});
    }
    for (int k = upTo(rng, 2); k > 0; --k) {
        c.properties.push_back(PropertyDecl{pick(rng, kIdents), "", randomAccess(rng), pick(rng, kTypes), randomRefs(rng)});
    }
    for (int k = upTo(rng, 3); k > 0; --k) c.fields.push_back(FieldDecl{pick(rng, kIdents), "", randomAccess(rng), pick(rng, kTypes)});
    for (int k = upTo(rng, 1); k > 0; --k) c.events.push_back(EventDecl{pick(rng, kIdents), "", randomAccess(rng), pick(rng, kTypes)});
    for (int k = upTo(rng, 1); k > 0; --k) c.delegates.push_back(randomDelegate(rng));
    if (depth < 2) {
        for (int k = upTo(rng, 1); k > 0; --k) c.nestedClasses.push_back(randomClass(rng, depth + 1));
    }
    return c;
}

}  // namespace

CodeModel randomModel(Rng& rng) {
    CodeModel m;
    const std::vector<std::string> nsNames = {"global", "A", "A.B", "Geom.Kernel", "Z"};
    for (int k = upTo(rng, 3); k > 0; --k) {
        NamespaceDecl ns;
        ns.qualifiedName = pick(rng, nsNames);
        for (int j = upTo(rng, 3); j > 0; --j) {
            ns.classes.push_back(randomClass(rng, 0));
        }
        for (int j = upTo(rng, 1); j > 0; --j) ns.delegates.push_back(randomDelegate(rng));
        m.namespaces.push_back(std::move(ns));
    }
    canonicalize(m);
    return m;
}

// ---- random knowledge bases ---------------------------------------------------

namespace {

const std::vector<std::string>& builtinTypeIds() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& t : builtinKnowledgeTypes()) v.push_back(t.id);
        return v;
    }();
    return ids;
}

const std::vector<std::string>& builtinLinkIds() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& t : builtinLinkTypes()) v.push_back(t.id);
        return v;
    }();
    return ids;
}

std::string randomId(Rng& rng, const KnowledgeBase& kb) {
    auto it = kb.objects().begin();
    std::advance(it, std::uniform_int_distribution<std::size_t>(0, kb.objects().size() - 1)(rng));
    return it->first;
}

}  // namespace

KnowledgeBase randomKb(Rng& rng, std::size_t maxObjects, std::size_t maxLinks) {
    KnowledgeBase kb;
    const std::size_t nObjects = std::uniform_int_distribution<std::size_t>(1, maxObjects)(rng);
    for (std::size_t k = 0; k < nObjects; ++k) {
        const std::string& type = pick(rng, builtinTypeIds());
        const std::string qn = "O" + std::to_string(k);
        kb.addObject(type, qn, qn, randomAccess(rng));
    }
    const std::size_t nLinks = std::uniform_int_distribution<std::size_t>(0, maxLinks)(rng);
    for (std::size_t k = 0; k < nLinks; ++k) {
        const std::string& lt = pick(rng, builtinLinkIds());
        const std::string a = randomId(rng, kb);
        const std::string b = randomId(rng, kb);
        if (lt == builtin::Contains && a == b) continue;
        kb.addLink(lt, a, b);
    }
    return kb;
}

std::size_t randomMutations(Rng& rng, KnowledgeBase& kb, std::size_t steps) {
    const std::vector<std::string> names = {"Req", "Doc", "Test", "Class", "Risk", "Method"};
    const std::vector<std::string> uris = {"http://example.org/doc#1", "file:///tmp/a.txt", "urn:isbn:123",
                                           "not a uri", "mailto:someone@example.org", "x:%zz"};
    std::size_t accepted = 0;
    for (std::size_t s = 0; s < steps; ++s) {
        const auto before = kb.revision();
        try {
            switch (upTo(rng, 9)) {
                case 0:
                    kb.addType(pick(rng, names) + std::to_string(upTo(rng, 3)), ColorKey(upTo(rng, 9)));
                    break;
                case 1:
                case 2:
                case 3: {
                    const auto& t = kb.types()[std::uniform_int_distribution<std::size_t>(0, kb.types().size() - 1)(rng)];
                    const std::string qn = "N" + std::to_string(upTo(rng, 30));
                    std::optional<std::string> tag;
                    if (coin(rng, 0.3)) tag = pick(rng, std::vector<std::string>{"field", "parameter"});
                    kb.addObject(coin(rng, 0.05) ? "NoSuchType" : t.id, qn, qn + " shown", randomAccess(rng), tag);
                    break;
                }
                case 4:
                case 5:
                    if (kb.objects().empty()) break;
                    kb.addLink(coin(rng, 0.05) ? "NoSuchLink" : pick(rng, builtinLinkIds()), randomId(rng, kb),
                               randomId(rng, kb));
                    break;
                case 6:
                    if (kb.links().empty()) break;
                    {
                        auto it = kb.links().begin();
                        std::advance(it, std::uniform_int_distribution<std::size_t>(0, kb.links().size() - 1)(rng));
                        kb.removeLink(it->first);
                    }
                    break;
                case 7:
                    if (kb.objects().empty()) break;
                    kb.removeObject(randomId(rng, kb));
                    break;
                default:
                    if (kb.objects().empty()) break;
                    if (coin(rng)) {
                        kb.annotate(randomId(rng, kb), AnnotationKind::Note, "note \"" + std::to_string(s) + "\"\n<&>");
                    } else {
                        kb.annotate(randomId(rng, kb), AnnotationKind::DocumentLink, pick(rng, uris));
                    }
                    break;
            }
        } catch (const KbError&) {
        }
        if (kb.revision() != before) ++accepted;
    }
    return accepted;
}

std::map<std::string, std::set<std::string>> bfsVisibility(const KnowledgeBase& kb, const SelectionQuery& q) {
    std::map<std::string, std::set<std::string>> all;
    for (const auto& [id, obj] : kb.objects()) all[obj.typeId].insert(id);

    std::map<std::string, std::set<std::string>> out;
    bool anyChecked = false;
    for (const auto& [t, ids] : q.checked) anyChecked = anyChecked || !ids.empty();
    if (!anyChecked) {
        for (const auto& t : q.displayedTypeIds) out[t] = all[t];
        return out;
    }

    std::set<std::string> active;
    std::set<std::string> seeds;
    for (const auto& t : q.displayedTypeIds) {
        auto it = q.checked.find(t);
        const auto& chosen = it != q.checked.end() && !it->second.empty() ? it->second : all[t];
        active.insert(chosen.begin(), chosen.end());
        if (it != q.checked.end()) seeds.insert(it->second.begin(), it->second.end());
    }
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [id, link] : kb.links()) {
        if (q.enabledLinkTypeIds.count(link.linkTypeId) && active.count(link.parentId) && active.count(link.childId)) {
            adj[link.parentId].push_back(link.childId);
            adj[link.childId].push_back(link.parentId);
        }
    }
    std::set<std::string> seen = seeds;
    std::deque<std::string> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
        const std::string v = queue.front();
        queue.pop_front();
        for (const auto& w : adj[v]) {
            if (seen.insert(w).second) queue.push_back(w);
        }
    }
    for (const auto& t : q.displayedTypeIds) {
        auto& col = out[t];
        for (const auto& id : all[t]) {
            if (seen.count(id)) col.insert(id);
        }
    }
    return out;
}

// ---- DOT syntax -----------------------------------------------------------------

namespace {

class DotChecker {
public:
    explicit DotChecker(const std::string& text) : s_(text) {}

    void graph() {
        skip();
        std::string kw = keyword();
        if (lower(kw) == "strict") kw = keyword();
        if (lower(kw) == "digraph") {
            directed_ = true;
        } else if (lower(kw) != "graph") {
            fail("expected graph or digraph");
        }
        skip();
        if (peek() != '{') id();
        expect('{');
        stmtList();
        expect('}');
        skip();
        if (i_ != s_.size()) fail("trailing text");
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("offset " + std::to_string(i_) + ": " + what);
    }

private:
    static std::string lower(std::string s) {
        for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    }

    void skip() {
        while (i_ < s_.size()) {
            const char c = s_[i_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i_;
            } else if (s_.compare(i_, 2, "//") == 0 || (c == '#' && (i_ == 0 || s_[i_ - 1] == '\n'))) {
                while (i_ < s_.size() && s_[i_] != '\n') ++i_;
            } else if (s_.compare(i_, 2, "/*") == 0) {
                const auto end = s_.find("*/", i_ + 2);
                if (end == std::string::npos) fail("unterminated comment");
                i_ = end + 2;
            } else {
                break;
            }
        }
    }

    char peek() {
        skip();
        return i_ < s_.size() ? s_[i_] : '\0';
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++i_;
    }

    bool accept(char c) {
        if (peek() == c) {
            ++i_;
            return true;
        }
        return false;
    }

    std::string keyword() {
        skip();
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        return s_.substr(start, i_ - start);
    }

    bool atId() {
        const char c = peek();
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '"' || c == '<' || c == '.' || c == '-' ||
               static_cast<unsigned char>(c) >= 0x80;
    }

    std::string id() {
        const char c = peek();
        const std::size_t start = i_;
        if (c == '"') {
            ++i_;
            while (i_ < s_.size() && s_[i_] != '"') {
                if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
                ++i_;
            }
            if (i_ >= s_.size()) fail("unterminated string");
            ++i_;
            // "a" + "b" concatenation
            if (peek() == '+') {
                ++i_;
                if (peek() != '"') fail("expected string after '+'");
                id();
            }
            return s_.substr(start, i_ - start);
        }
        if (c == '<') {
            int depth = 0;
            do {
                if (i_ >= s_.size()) fail("unterminated HTML string");
                if (s_[i_] == '<') ++depth;
                if (s_[i_] == '>') --depth;
                ++i_;
            } while (depth > 0);
            return s_.substr(start, i_ - start);
        }
        if (c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
            if (c == '-') ++i_;
            bool digits = false;
            bool dot = false;
            while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || (s_[i_] == '.' && !dot))) {
                if (s_[i_] == '.') dot = true; else digits = true;
                ++i_;
            }
            if (!digits) fail("malformed numeral");
            return s_.substr(start, i_ - start);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80) {
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' ||
                                      static_cast<unsigned char>(s_[i_]) >= 0x80)) {
                ++i_;
            }
            return s_.substr(start, i_ - start);
        }
        fail("expected an ID");
    }

    bool isKeywordAhead(const char* kw) {
        skip();
        const std::size_t save = i_;
        const std::string w = keyword();
        const bool match = lower(w) == kw;
        i_ = save;
        return match;
    }

    void stmtList() {
        while (peek() != '}' && peek() != '\0') {
            stmt();
            accept(';');
        }
    }

    void attrList() {
        while (accept('[')) {
            while (peek() != ']') {
                id();
                if (accept('=')) id();
                if (!accept(';')) accept(',');
                if (peek() == '\0') fail("unterminated attribute list");
            }
            expect(']');
        }
    }

    void subgraph() {
        if (isKeywordAhead("subgraph")) {
            keyword();
            if (peek() != '{') id();
        }
        expect('{');
        stmtList();
        expect('}');
    }

    void nodeId() {
        id();
        if (accept(':')) {
            id();
            if (accept(':')) id();
        }
    }

    bool edgeOp() {
        skip();
        if (s_.compare(i_, 2, "->") == 0) {
            if (!directed_) fail("'->' in undirected graph");
            i_ += 2;
            return true;
        }
        if (s_.compare(i_, 2, "--") == 0) {
            if (directed_) fail("'--' in directed graph");
            i_ += 2;
            return true;
        }
        return false;
    }

    void stmt() {
        if (isKeywordAhead("graph") || isKeywordAhead("node") || isKeywordAhead("edge")) {
            keyword();
            if (peek() != '[') fail("expected attribute list");
            attrList();
            return;
        }
        if (peek() == '{' || isKeywordAhead("subgraph")) {
            subgraph();
        } else {
            nodeId();
            if (accept('=')) {
                id();
                return;
            }
        }
        bool edge = false;
        while (edgeOp()) {
            edge = true;
            if (peek() == '{' || isKeywordAhead("subgraph")) {
                subgraph();
            } else {
                nodeId();
            }
        }
        (void)edge;
        attrList();
    }

    const std::string& s_;
    std::size_t i_ = 0;
    bool directed_ = false;
};

}  // namespace

bool checkDotSyntax(const std::string& text, std::string* error) {
    try {
        DotChecker(text).graph();
        return true;
    } catch (const std::runtime_error& e) {
        if (error != nullptr) *error = e.what();
        return false;
    }
}

}  // namespace tgtest
