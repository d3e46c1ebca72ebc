#include "pivotheso/turtle.hpp"

#include "pivotheso/text.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>
#include <unordered_map>

namespace pivotheso::skos {
namespace {

std::string iri(std::string_view space, std::string_view local) {
    std::string s(space);
    s += local;
    return s;
}

const std::string kType = iri(ns::rdf, "type");
const std::string kConcept = iri(ns::skos, "Concept");
const std::string kConceptScheme = iri(ns::skos, "ConceptScheme");
const std::string kPrefLabel = iri(ns::skos, "prefLabel");
const std::string kAltLabel = iri(ns::skos, "altLabel");
const std::string kDefinition = iri(ns::skos, "definition");
const std::string kBroader = iri(ns::skos, "broader");
const std::string kNarrower = iri(ns::skos, "narrower");
const std::string kRelated = iri(ns::skos, "related");
const std::string kInScheme = iri(ns::skos, "inScheme");
const std::string kTopConceptOf = iri(ns::skos, "topConceptOf");
const std::string kExactMatch = iri(ns::skos, "exactMatch");
const std::string kCloseMatch = iri(ns::skos, "closeMatch");
const std::string kBroadMatch = iri(ns::skos, "broadMatch");
const std::string kNarrowMatch = iri(ns::skos, "narrowMatch");
const std::string kRelatedMatch = iri(ns::skos, "relatedMatch");
const std::string kSource = iri(ns::dcterms, "source");
const std::string kSeeAlso = iri(ns::rdfs, "seeAlso");

const std::set<std::string>& known_predicates() {
    static const std::set<std::string> known{
        kType,      kPrefLabel,   kAltLabel,   kDefinition,  kBroader,     kNarrower,
        kRelated,   kInScheme,    kTopConceptOf, kExactMatch, kCloseMatch,  kBroadMatch,
        kNarrowMatch, kRelatedMatch, kSource,  kSeeAlso};
    return known;
}

std::optional<MatchType> match_type_of(const std::string& predicate) {
    if (predicate == kExactMatch) return MatchType::Exact;
    if (predicate == kCloseMatch) return MatchType::Close;
    if (predicate == kBroadMatch) return MatchType::Broad;
    if (predicate == kNarrowMatch) return MatchType::Narrow;
    if (predicate == kRelatedMatch) return MatchType::Related;
    return std::nullopt;
}

std::string_view match_predicate_name(MatchType t) {
    return to_string(t);  // exactMatch, broadMatch, ...
}

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    SkosDocument run() {
        check_encoding();
        for (;;) {
            skip_space();
            if (eof()) break;
            if (peek() == '@') {
                advance();
                std::string keyword = read_while([](char c) { return is_ascii_alpha(c); });
                if (keyword == "prefix") {
                    parse_prefix_body();
                    skip_space();
                    expect('.', "expected '.' after @prefix directive");
                } else {
                    fail("unsupported directive '@" + keyword + "'");
                }
            } else if (at_keyword("PREFIX")) {
                pos_ += 6;
                col_ += 6;
                parse_prefix_body();
            } else if (at_keyword("BASE")) {
                fail("BASE directives are not supported");
            } else {
                parse_statement();
            }
        }
        return std::move(doc_);
    }

private:
    bool eof() const { return pos_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        const char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
            ++col_;
        }
    }

    [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(line_, col_, message); }

    void check_encoding() {
        if (text::is_valid_utf8(src_)) return;
        // Locate the first invalid sequence for the diagnostic.
        std::size_t lo = 0;
        std::size_t hi = src_.size();
        while (lo + 1 < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (text::is_valid_utf8(src_.substr(0, mid))) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        while (pos_ < lo) advance();
        fail("invalid UTF-8");
    }

    bool at_keyword(std::string_view kw) const {
        if (src_.size() - pos_ < kw.size() + 1) return false;
        for (std::size_t i = 0; i < kw.size(); ++i) {
            char c = src_[pos_ + i];
            if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
            if (c != kw[i]) return false;
        }
        const char next = src_[pos_ + kw.size()];
        return next == ' ' || next == '\t' || next == '\n' || next == '\r';
    }

    template <class Pred>
    std::string read_while(Pred pred) {
        std::string out;
        while (!eof() && pred(peek())) {
            out.push_back(peek());
            advance();
        }
        return out;
    }

    void skip_space() {
        while (!eof()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else if (c == '#') {
                while (!eof() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    void expect(char c, const std::string& message) {
        if (eof() || peek() != c) fail(message);
        advance();
    }

    static bool is_pn_char(char c) {
        return is_ascii_alpha(c) || is_ascii_digit(c) || c == '_' || c == '-' || c == '.' ||
               (static_cast<unsigned char>(c) >= 0x80);
    }

    void parse_prefix_body() {
        skip_space();
        std::string name = read_while(is_pn_char);
        if (!name.empty() && name.back() == '.') fail("prefix name cannot end with '.'");
        expect(':', "expected ':' after prefix name");
        skip_space();
        if (peek() != '<') fail("expected IRI in prefix directive");
        doc_.prefixes[name] = read_iriref();
    }

    std::uint32_t read_hex(int digits) {
        std::uint32_t value = 0;
        for (int i = 0; i < digits; ++i) {
            const char c = peek();
            int d;
            if (c >= '0' && c <= '9') d = c - '0';
            else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
            else fail("bad hexadecimal escape");
            value = value * 16 + static_cast<std::uint32_t>(d);
            advance();
        }
        return value;
    }

    void append_code_point(std::string& out, std::uint32_t cp) {
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("escape is not a Unicode scalar value");
        append_utf8(out, cp);
    }

    std::string read_iriref() {
        advance();  // '<'
        std::string out;
        for (;;) {
            if (eof()) fail("unterminated IRI");
            const char c = peek();
            if (c == '>') {
                advance();
                break;
            }
            if (c == '\\') {
                advance();
                if (peek() == 'u') {
                    advance();
                    append_code_point(out, read_hex(4));
                } else if (peek() == 'U') {
                    advance();
                    append_code_point(out, read_hex(8));
                } else {
                    fail("bad IRI escape");
                }
                continue;
            }
            const auto uc = static_cast<unsigned char>(c);
            if (uc <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`') {
                fail("bad IRI: forbidden character");
            }
            out.push_back(c);
            advance();
        }
        if (out.empty()) fail("bad IRI: empty");
        return out;
    }

    std::string read_iri() {
        const char c = peek();
        if (c == '<') return read_iriref();
        if (c == '[' || (c == '_' && peek(1) == ':')) fail("blank nodes are not supported");
        if (c == '(') fail("collections are not supported");
        if (!is_pn_char(c) && c != ':') fail("expected an IRI or prefixed name");
        const std::size_t start_line = line_;
        const std::size_t start_col = col_;
        std::string prefix = read_while(is_pn_char);
        if (peek() != ':') fail("expected an IRI or prefixed name");
        advance();
        std::string local = read_while([](char ch) { return is_pn_char(ch) || ch == ':' || ch == '%'; });
        while (!local.empty() && local.back() == '.') {
            local.pop_back();
            --pos_;
            --col_;
        }
        auto it = doc_.prefixes.find(prefix);
        if (it == doc_.prefixes.end()) {
            throw SyntaxError(start_line, start_col, "unresolved prefix '" + prefix + ":'");
        }
        return it->second + local;
    }

    Term read_literal() {
        Term t;
        t.kind = Term::Kind::Literal;
        const std::size_t start_line = line_;
        const std::size_t start_col = col_;
        const bool long_form = peek(1) == '"' && peek(2) == '"';
        for (int i = 0; i < (long_form ? 3 : 1); ++i) advance();
        for (;;) {
            if (eof()) throw SyntaxError(start_line, start_col, "unterminated literal");
            const char c = peek();
            if (long_form) {
                if (c == '"' && peek(1) == '"' && peek(2) == '"') {
                    advance();
                    advance();
                    advance();
                    break;
                }
            } else {
                if (c == '"') {
                    advance();
                    break;
                }
                if (c == '\n' || c == '\r') throw SyntaxError(start_line, start_col, "unterminated literal");
            }
            if (c == '\\') {
                advance();
                const char e = peek();
                if (eof()) throw SyntaxError(start_line, start_col, "unterminated literal");
                advance();
                switch (e) {
                    case 't': t.value.push_back('\t'); break;
                    case 'b': t.value.push_back('\b'); break;
                    case 'n': t.value.push_back('\n'); break;
                    case 'r': t.value.push_back('\r'); break;
                    case 'f': t.value.push_back('\f'); break;
                    case '"': t.value.push_back('"'); break;
                    case '\'': t.value.push_back('\''); break;
                    case '\\': t.value.push_back('\\'); break;
                    case 'u': append_code_point(t.value, read_hex(4)); break;
                    case 'U': append_code_point(t.value, read_hex(8)); break;
                    default: fail("bad string escape");
                }
                continue;
            }
            t.value.push_back(c);
            advance();
        }
        if (peek() == '@') {
            advance();
            std::string lang = read_while([](char ch) { return is_ascii_alpha(ch); });
            if (lang.empty()) fail("empty language tag");
            while (peek() == '-') {
                advance();
                std::string sub = read_while([](char ch) { return is_ascii_alpha(ch) || is_ascii_digit(ch); });
                if (sub.empty()) fail("bad language tag");
                lang += "-" + sub;
            }
            for (char& ch : lang) {
                if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch + 32);
            }
            t.lang = std::move(lang);
        } else if (peek() == '^' && peek(1) == '^') {
            fail("typed literals are not supported");
        }
        return t;
    }

    Term read_object() {
        if (peek() == '"') return read_literal();
        if (peek() == '\'') fail("single-quoted literals are not supported");
        if (is_ascii_digit(peek()) || peek() == '+' || peek() == '-') fail("numeric literals are not supported");
        Term t;
        t.kind = Term::Kind::Iri;
        t.value = read_iri();
        return t;
    }

    void emit(const std::string& subject, const std::string& predicate, Term object, std::size_t line,
              std::size_t col) {
        if (!known_predicates().contains(predicate)) {
            doc_.warnings.push_back({line, col, "unsupported predicate <" + predicate + "> ignored"});
            return;
        }
        if (predicate == kType && (!object.is_iri() || (object.value != kConcept && object.value != kConceptScheme))) {
            doc_.warnings.push_back({line, col, "unsupported rdf:type <" + object.value + "> ignored"});
            return;
        }
        Triple t{subject, predicate, std::move(object)};
        if (seen_.insert(t).second) doc_.triples.push_back(std::move(t));
    }

    void parse_statement() {
        const std::string subject = read_iri();
        skip_space();
        for (;;) {
            const std::size_t pred_line = line_;
            const std::size_t pred_col = col_;
            std::string predicate;
            const char after = peek(1);
            if (peek() == 'a' && (after == ' ' || after == '\t' || after == '\n' || after == '\r' ||
                                  after == '<' || after == '"' || after == '#')) {
                advance();
                predicate = kType;
            } else {
                predicate = read_iri();
            }
            skip_space();
            for (;;) {
                Term object = read_object();
                emit(subject, predicate, std::move(object), pred_line, pred_col);
                skip_space();
                if (peek() == ',') {
                    advance();
                    skip_space();
                    continue;
                }
                break;
            }
            if (peek() == ';') {
                while (peek() == ';') {
                    advance();
                    skip_space();
                }
                if (peek() == '.') break;
                continue;
            }
            break;
        }
        expect('.', "expected '.' at end of statement");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    SkosDocument doc_;
    std::set<Triple> seen_;
};

[[noreturn]] void graph_error(const std::string& message) { throw Error(ErrorCode::GraphError, message); }

// "https://ark.mom.fr/ark:/39676/x" -> ("ark:/39676/x", "https://ark.mom.fr/")
std::pair<std::string, std::string> split_ark(const std::string& value) {
    const std::size_t at = value.find("ark:/");
    if (at == std::string::npos || at == 0) return {value, ""};
    return {value.substr(at), value.substr(0, at)};
}

const std::set<std::string>& concept_predicates() {
    static const std::set<std::string> preds{kAltLabel, kDefinition, kSource, kSeeAlso, kInScheme,
                                             kTopConceptOf, kBroader, kNarrower, kRelated};
    return preds;
}

}  // namespace

SkosDocument parse_turtle(std::string_view text) {
    return Parser(text).run();
}

Store to_graph(const SkosDocument& doc, const ImportOptions& options) {
    struct SubjectData {
        bool typed_concept = false;
        bool typed_scheme = false;
        bool has_concept_predicate = false;
        std::vector<std::pair<const std::string*, Term>> statements;
        std::string resolver_base;
    };
    std::map<std::string, SubjectData> subjects;
    std::vector<std::string> subject_order;

    auto normalized = [](const std::string& value, std::string* base) {
        auto [id, b] = split_ark(value);
        if (base != nullptr && !b.empty()) *base = b;
        return id;
    };

    for (const Triple& t : doc.triples) {
        std::string base;
        const std::string subject = normalized(t.subject, &base);
        auto [it, inserted] = subjects.try_emplace(subject);
        if (inserted) subject_order.push_back(subject);
        SubjectData& data = it->second;
        if (!base.empty() && data.resolver_base.empty()) data.resolver_base = base;
        Term object = t.object;
        if (object.is_iri()) object.value = normalized(object.value, nullptr);
        if (t.predicate == kType) {
            (object.value == kConceptScheme ? data.typed_scheme : data.typed_concept) = true;
            continue;
        }
        if (concept_predicates().contains(t.predicate)) data.has_concept_predicate = true;
        data.statements.emplace_back(&t.predicate, std::move(object));
    }

    Store store;
    // Schemes first.
    for (const auto& subject : subject_order) {
        const SubjectData& data = subjects.at(subject);
        if (!data.typed_scheme) continue;
        if (data.typed_concept || data.has_concept_predicate) {
            graph_error("<" + subject + "> is typed as a concept scheme but used as a concept");
        }
        std::string title;
        for (const auto& [pred, obj] : data.statements) {
            if (*pred == kPrefLabel) {
                if (obj.is_iri()) graph_error("scheme title must be a literal: <" + subject + ">");
                if (title.empty()) title = obj.value;
            }
        }
        store.add_scheme(SchemeId(subject), title, options.profile);
    }

    const bool single_scheme = store.schemes().size() == 1;
    std::set<std::string> concept_ids;
    for (const auto& subject : subject_order) {
        const SubjectData& data = subjects.at(subject);
        if (data.typed_scheme) continue;
        bool has_label = std::any_of(data.statements.begin(), data.statements.end(),
                                     [](const auto& s) { return *s.first == kPrefLabel; });
        if (data.typed_concept || data.has_concept_predicate || has_label) concept_ids.insert(subject);
    }

    struct PendingMapping {
        std::string source;
        std::string target;
        MatchType type;
    };
    std::vector<PendingMapping> pending_mappings;
    std::map<ConceptId, Concept> built;
    std::vector<std::pair<std::string, std::string>> broader_edges;  // (child, parent)
    std::vector<std::pair<std::string, std::string>> related_edges;

    for (const auto& subject : subject_order) {
        const SubjectData& data = subjects.at(subject);
        for (const auto& [pred, obj] : data.statements) {
            if (auto mt = match_type_of(*pred)) {
                if (!obj.is_iri()) graph_error("mapping target must be an IRI on <" + subject + ">");
                pending_mappings.push_back({subject, obj.value, *mt});
            }
        }
        if (!concept_ids.contains(subject)) continue;

        Concept c;
        c.id = ConceptId(subject);
        std::optional<std::string> scheme_from_in;
        std::optional<std::string> scheme_from_top;
        bool top = false;
        for (const auto& [pred, obj] : data.statements) {
            const std::string& p = *pred;
            auto need_literal = [&] {
                if (obj.is_iri()) graph_error("expected a literal object on <" + subject + ">");
            };
            auto need_iri = [&] {
                if (!obj.is_iri()) graph_error("expected an IRI object on <" + subject + ">");
            };
            if (p == kPrefLabel) {
                need_literal();
                Label l = Label::make(obj.value, obj.lang.empty() ? default_lang : std::string_view(obj.lang));
                if (c.pref_labels.contains(l.lang)) {
                    graph_error("two pref labels in language '" + l.lang + "' on <" + subject + ">");
                }
                c.pref_labels.emplace(l.lang, std::move(l));
            } else if (p == kAltLabel) {
                need_literal();
                c.alt_labels.push_back(Label::make(obj.value, obj.lang.empty() ? default_lang : std::string_view(obj.lang)));
            } else if (p == kDefinition) {
                need_literal();
                if (!c.definition) c.definition.emplace();
                if (!c.definition->text.empty()) graph_error("more than one definition on <" + subject + ">");
                c.definition->text = obj.value;
            } else if (p == kSource) {
                if (!c.definition) c.definition.emplace();
                c.definition->sources.push_back(obj.value);
            } else if (p == kSeeAlso) {
                need_iri();
                if (!c.definition) c.definition.emplace();
                c.definition->external_resources.push_back(obj.value);
            } else if (p == kInScheme) {
                need_iri();
                if (scheme_from_in && *scheme_from_in != obj.value) {
                    graph_error("<" + subject + "> is in more than one scheme");
                }
                scheme_from_in = obj.value;
            } else if (p == kTopConceptOf) {
                need_iri();
                scheme_from_top = obj.value;
                top = true;
            } else if (p == kBroader || p == kNarrower || p == kRelated) {
                need_iri();
                if (!concept_ids.contains(obj.value)) {
                    graph_error("<" + subject + "> refers to unknown concept <" + obj.value + ">");
                }
                if (p == kBroader) broader_edges.emplace_back(subject, obj.value);
                else if (p == kNarrower) broader_edges.emplace_back(obj.value, subject);
                else related_edges.emplace_back(subject, obj.value);
            }
        }
        if (c.pref_labels.empty()) graph_error("concept without skos:prefLabel: <" + subject + ">");
        for (const auto& alt : c.alt_labels) {
            auto it = c.pref_labels.find(alt.lang);
            if (it != c.pref_labels.end() && text::normalize_label(it->second.text) == text::normalize_label(alt.text)) {
                graph_error("alt label repeats the pref label on <" + subject + ">");
            }
        }
        std::string scheme_id;
        if (scheme_from_in) scheme_id = *scheme_from_in;
        else if (scheme_from_top) scheme_id = *scheme_from_top;
        else if (single_scheme) scheme_id = store.schemes().begin()->first.str();
        else graph_error("cannot tell which scheme <" + subject + "> belongs to");
        if (scheme_from_top && *scheme_from_top != scheme_id) {
            graph_error("<" + subject + "> is top concept of a scheme it is not in");
        }
        if (store.find_scheme(SchemeId(scheme_id)) == nullptr) {
            graph_error("<" + subject + "> refers to undeclared scheme <" + scheme_id + ">");
        }
        c.scheme = SchemeId(scheme_id);
        if (top) store.scheme_mut(c.scheme).top_concepts.insert(c.id);
        if (!data.resolver_base.empty() && store.scheme(c.scheme).resolver_base.empty()) {
            store.scheme_mut(c.scheme).resolver_base = data.resolver_base;
        }
        built.emplace(c.id, std::move(c));
    }

    for (const auto& [child, parent] : broader_edges) {
        Concept& ch = built.at(ConceptId(child));
        Concept& pa = built.at(ConceptId(parent));
        if (child == parent) graph_error("<" + child + "> is broader than itself");
        if (ch.scheme != pa.scheme) graph_error("hierarchy crosses schemes: <" + child + "> / <" + parent + ">");
        ch.broader.insert(pa.id);
        pa.narrower.insert(ch.id);
    }
    for (const auto& [a, b] : related_edges) {
        Concept& ca = built.at(ConceptId(a));
        Concept& cb = built.at(ConceptId(b));
        if (a == b) graph_error("<" + a + "> is related to itself");
        if (ca.scheme != cb.scheme) graph_error("associative relation crosses schemes: <" + a + "> / <" + b + ">");
        ca.related.insert(cb.id);
        cb.related.insert(ca.id);
    }

    // Acyclicity (Kahn over the broader relation).
    {
        std::map<ConceptId, std::size_t> pending;
        std::vector<ConceptId> ready;
        for (const auto& [id, c] : built) {
            pending[id] = c.broader.size();
            if (c.broader.empty()) ready.push_back(id);
        }
        std::size_t visited = 0;
        while (!ready.empty()) {
            ConceptId id = ready.back();
            ready.pop_back();
            ++visited;
            for (const auto& child : built.at(id).narrower) {
                if (--pending[child] == 0) ready.push_back(child);
            }
        }
        if (visited != built.size()) graph_error("the broader relation contains a cycle");
    }

    for (auto& [id, c] : built) {
        for (const auto& [lang, label] : c.pref_labels) {
            if (auto other = store.find_by_pref_label(c.scheme, label.text, lang)) {
                graph_error("duplicate pref label '" + label.text + "'@" + lang + " on <" + id.str() + "> and <" +
                            other->str() + ">");
            }
        }
        store.insert_concept(c);
    }

    std::sort(pending_mappings.begin(), pending_mappings.end(), [](const auto& a, const auto& b) {
        return std::tie(a.source, a.target, a.type) < std::tie(b.source, b.target, b.type);
    });
    std::uint64_t counter = 0;
    for (const auto& pm : pending_mappings) {
        const Concept* s = store.find(ConceptId(pm.source));
        const Concept* t = store.find(ConceptId(pm.target));
        if (s != nullptr && t != nullptr && s->scheme == t->scheme) {
            graph_error("mapping inside one scheme: <" + pm.source + "> -> <" + pm.target + ">");
        }
        Mapping m;
        std::string digits = std::to_string(++counter);
        if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
        m.id = MappingId("m" + digits);
        m.source = ConceptId(pm.source);
        m.target = ConceptId(pm.target);
        m.match_type = pm.type;
        m.status = MappingStatus::Accepted;
        m.score = 1.0;
        m.rationale = "imported";
        store.put_mapping(std::move(m));
    }
    return store;
}

namespace {

std::string escape_iri(const std::string& value) {
    std::string out = "<";
    for (unsigned char c : value) {
        if (c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
            c == '`' || c == '\\') {
            std::array<char, 8> buf{};
            std::snprintf(buf.data(), buf.size(), "\\u%04X", c);
            out += buf.data();
        } else {
            out.push_back(static_cast<char>(c));
        }
    }
    out += ">";
    return out;
}

std::string escape_literal(const std::string& value) {
    std::string out = "\"";
    for (unsigned char c : value) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20 || c == 0x7F) {
                    std::array<char, 8> buf{};
                    std::snprintf(buf.data(), buf.size(), "\\u%04X", c);
                    out += buf.data();
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    out += "\"";
    return out;
}

std::string lang_literal(const Label& l) { return escape_literal(l.text) + "@" + l.lang; }

class BlockWriter {
public:
    void add(std::string predicate, std::vector<std::string> objects) {
        if (!objects.empty()) lines_.emplace_back(std::move(predicate), std::move(objects));
    }

    void write(std::string& out, const std::string& subject) const {
        if (lines_.empty()) return;
        out += escape_iri(subject);
        for (std::size_t i = 0; i < lines_.size(); ++i) {
            out += i == 0 ? " " : "    ";
            out += lines_[i].first;
            out += " ";
            for (std::size_t j = 0; j < lines_[i].second.size(); ++j) {
                if (j > 0) out += ", ";
                out += lines_[i].second[j];
            }
            out += i + 1 == lines_.size() ? " .\n" : " ;\n";
        }
        out += "\n";
    }

private:
    std::vector<std::pair<std::string, std::vector<std::string>>> lines_;
};

// Bare arks are written under the resolver base of their scheme.
std::string full_iri(const Store& store, const std::string& id) {
    if (!id.starts_with("ark:/")) return id;
    const ConceptScheme* scheme = store.find_scheme(SchemeId(id));
    if (const Concept* c = store.find(ConceptId(id)); c != nullptr) scheme = store.find_scheme(c->scheme);
    return scheme != nullptr ? scheme->resolver_base + id : id;
}

std::vector<std::string> iris(const Store& store, const std::set<ConceptId>& ids) {
    std::vector<std::string> out;
    for (const auto& id : ids) out.push_back(escape_iri(full_iri(store, id.str())));
    return out;
}

void add_mapping_lines(const Store& store, BlockWriter& block, const std::vector<const Mapping*>& mappings) {
    for (MatchType t : {MatchType::Exact, MatchType::Close, MatchType::Broad, MatchType::Narrow, MatchType::Related}) {
        std::set<std::string> targets;
        for (const Mapping* m : mappings) {
            if (m->match_type == t) targets.insert(full_iri(store, m->target.str()));
        }
        std::vector<std::string> objects;
        for (const auto& target : targets) objects.push_back(escape_iri(target));
        block.add("skos:" + std::string(match_predicate_name(t)), std::move(objects));
    }
}

}  // namespace

std::string serialize_turtle(const Store& store) {
    std::string out;
    out += "@prefix dcterms: <" + std::string(ns::dcterms) + "> .\n";
    out += "@prefix rdf: <" + std::string(ns::rdf) + "> .\n";
    out += "@prefix rdfs: <" + std::string(ns::rdfs) + "> .\n";
    out += "@prefix skos: <" + std::string(ns::skos) + "> .\n";
    out += "\n";

    for (const auto& [id, scheme] : store.schemes()) {
        BlockWriter block;
        block.add("a", {"skos:ConceptScheme"});
        if (!scheme.title.empty()) block.add("skos:prefLabel", {escape_literal(scheme.title)});
        block.write(out, full_iri(store, id.str()));
    }

    std::map<ConceptId, std::vector<const Mapping*>> by_source;
    for (const auto& [id, m] : store.mappings()) {
        if (m.status == MappingStatus::Accepted) by_source[m.source].push_back(&m);
    }

    const bool write_in_scheme = store.schemes().size() > 1;
    for (const auto& [id, c] : store.concepts()) {
        BlockWriter block;
        block.add("a", {"skos:Concept"});
        std::vector<std::string> prefs;
        for (const auto& [lang, label] : c.pref_labels) prefs.push_back(lang_literal(label));
        block.add("skos:prefLabel", std::move(prefs));
        std::vector<std::string> alts;
        for (const auto& label : c.alt_labels) alts.push_back(lang_literal(label));
        block.add("skos:altLabel", std::move(alts));
        if (c.definition) {
            block.add("skos:definition", {escape_literal(c.definition->text)});
            std::vector<std::string> sources;
            for (const auto& s : c.definition->sources) sources.push_back(escape_literal(s));
            block.add("dcterms:source", std::move(sources));
            std::vector<std::string> resources;
            for (const auto& r : c.definition->external_resources) resources.push_back(escape_iri(r));
            block.add("rdfs:seeAlso", std::move(resources));
        }
        const std::string scheme_iri = escape_iri(full_iri(store, c.scheme.str()));
        if (write_in_scheme) block.add("skos:inScheme", {scheme_iri});
        if (const ConceptScheme* s = store.find_scheme(c.scheme); s != nullptr && s->top_concepts.contains(id)) {
            block.add("skos:topConceptOf", {scheme_iri});
        }
        block.add("skos:broader", iris(store, c.broader));
        block.add("skos:narrower", iris(store, c.narrower));
        block.add("skos:related", iris(store, c.related));
        if (auto it = by_source.find(id); it != by_source.end()) add_mapping_lines(store, block, it->second);
        block.write(out, full_iri(store, id.str()));
    }

    for (const auto& [source, mappings] : by_source) {
        if (store.find(source) != nullptr) continue;
        BlockWriter block;
        add_mapping_lines(store, block, mappings);
        block.write(out, full_iri(store, source.str()));
    }
    return out;
}

Store project_scheme(const Store& store, const SchemeId& scheme_id) {
    const ConceptScheme& scheme = store.scheme(scheme_id);
    Store out;
    ConceptScheme& s = out.add_scheme(scheme.id, scheme.title, scheme.profile);
    s.top_concepts = scheme.top_concepts;
    s.resolver_base = scheme.resolver_base;
    std::set<ConceptId> members;
    for (const auto& [id, c] : store.concepts()) {
        if (c.scheme != scheme_id) continue;
        out.insert_concept(c);
        members.insert(id);
    }
    for (const auto& [id, m] : store.mappings()) {
        if (m.status != MappingStatus::Accepted) continue;
        if (members.contains(m.source) || members.contains(m.target)) out.put_mapping(m);
    }
    return out;
}

void merge_graph(Store& dst, const Store& src) {
    for (const auto& [id, scheme] : src.schemes()) {
        if (dst.find_scheme(id) != nullptr) {
            throw Error(ErrorCode::DuplicateId, "scheme already present in store: " + id.str());
        }
    }
    for (const auto& [id, c] : src.concepts()) {
        if (dst.find(id) != nullptr || dst.is_deleted(id)) {
            throw Error(ErrorCode::DuplicateId, "concept already present in store: " + id.str());
        }
    }
    for (const auto& [id, scheme] : src.schemes()) {
        ConceptScheme& s = dst.add_scheme(id, scheme.title, scheme.profile);
        s.top_concepts = scheme.top_concepts;
        s.resolver_base = scheme.resolver_base;
    }
    for (const auto& [id, c] : src.concepts()) dst.insert_concept(c);
    for (const auto& [id, m] : src.mappings()) {
        const bool duplicate = std::any_of(dst.mappings().begin(), dst.mappings().end(), [&](const auto& kv) {
            const Mapping& d = kv.second;
            return d.status == m.status && d.source == m.source && d.target == m.target && d.match_type == m.match_type;
        });
        if (duplicate) continue;
        Mapping copy = m;
        copy.id = dst.next_mapping_id();
        dst.put_mapping(std::move(copy));
    }
}

}  // namespace pivotheso::skos
