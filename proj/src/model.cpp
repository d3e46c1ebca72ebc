#include "pivotheso/model.hpp"

#include "pivotheso/text.hpp"

#include <algorithm>
#include <cctype>

namespace pivotheso {

Label Label::make(std::string_view text, std::string_view lang) {
    Label l;
    l.text = text::nfc(text::trim(text));
    if (l.text.empty()) {
        throw Error(ErrorCode::InvalidLabel, "label text is empty");
    }
    if (lang.size() != 2) {
        throw Error(ErrorCode::InvalidLabel, "language tag must be two letters: '" + std::string(lang) + "'");
    }
    for (char ch : lang) {
        if (!std::isalpha(static_cast<unsigned char>(ch))) {
            throw Error(ErrorCode::InvalidLabel, "language tag must be two letters: '" + std::string(lang) + "'");
        }
        l.lang.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    return l;
}

std::string_view to_string(Profile p) {
    return p == Profile::Research ? "research" : "documentary";
}

Profile parse_profile(std::string_view s) {
    if (s == "research" || s == "Research") return Profile::Research;
    if (s == "documentary" || s == "Documentary") return Profile::Documentary;
    throw Error(ErrorCode::CorruptStore, "unknown profile '" + std::string(s) + "'");
}

const std::string& Concept::label(std::string_view lang) const {
    static const std::string empty;
    if (auto it = pref_labels.find(std::string(lang)); it != pref_labels.end()) {
        return it->second.text;
    }
    return pref_labels.empty() ? empty : pref_labels.begin()->second.text;
}

bool Concept::is_grouping() const {
    return std::any_of(pref_labels.begin(), pref_labels.end(),
                       [](const auto& kv) { return text::is_grouping_label(kv.second.text); });
}

std::string_view to_string(MatchType t) {
    switch (t) {
        case MatchType::Exact: return "exactMatch";
        case MatchType::Close: return "closeMatch";
        case MatchType::Broad: return "broadMatch";
        case MatchType::Narrow: return "narrowMatch";
        case MatchType::Related: return "relatedMatch";
    }
    return "exactMatch";
}

std::optional<MatchType> parse_match_type(std::string_view s) {
    std::string lower;
    for (char ch : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (lower.ends_with("match")) lower.resize(lower.size() - 5);
    if (lower == "exact") return MatchType::Exact;
    if (lower == "close") return MatchType::Close;
    if (lower == "broad") return MatchType::Broad;
    if (lower == "narrow") return MatchType::Narrow;
    if (lower == "related") return MatchType::Related;
    return std::nullopt;
}

MatchType inverse(MatchType t) {
    if (t == MatchType::Broad) return MatchType::Narrow;
    if (t == MatchType::Narrow) return MatchType::Broad;
    return t;
}

std::string_view to_string(MappingStatus s) {
    switch (s) {
        case MappingStatus::Suggested: return "suggested";
        case MappingStatus::Accepted: return "accepted";
        case MappingStatus::Rejected: return "rejected";
    }
    return "suggested";
}

std::optional<MappingStatus> parse_mapping_status(std::string_view s) {
    std::string lower;
    for (char ch : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (lower == "suggested") return MappingStatus::Suggested;
    if (lower == "accepted") return MappingStatus::Accepted;
    if (lower == "rejected") return MappingStatus::Rejected;
    return std::nullopt;
}

std::string_view to_string(Role r) {
    switch (r) {
        case Role::Categorie: return "categorie";
        case Role::Forme: return "forme";
        case Role::Type: return "type";
        case Role::Periodisation: return "periodisation";
    }
    return "categorie";
}

std::optional<Role> parse_role(std::string_view s) {
    if (s == "categorie") return Role::Categorie;
    if (s == "forme") return Role::Forme;
    if (s == "type") return Role::Type;
    if (s == "periodisation") return Role::Periodisation;
    return std::nullopt;
}

// ---------------------------------------------------------------- schemes

ConceptScheme& Store::add_scheme(const SchemeId& id, std::string title, Profile profile) {
    if (id.empty()) {
        throw Error(ErrorCode::UnknownScheme, "scheme id is empty");
    }
    if (schemes_.contains(id)) {
        throw Error(ErrorCode::DuplicateId, "scheme already exists: " + id.str());
    }
    ConceptScheme s;
    s.id = id;
    s.title = std::move(title);
    s.profile = profile;
    return schemes_.emplace(id, std::move(s)).first->second;
}

const ConceptScheme& Store::scheme(const SchemeId& id) const {
    if (auto it = schemes_.find(id); it != schemes_.end()) return it->second;
    throw Error(ErrorCode::UnknownScheme, "unknown scheme: " + id.str());
}

ConceptScheme& Store::scheme_mut(const SchemeId& id) {
    if (auto it = schemes_.find(id); it != schemes_.end()) return it->second;
    throw Error(ErrorCode::UnknownScheme, "unknown scheme: " + id.str());
}

const ConceptScheme* Store::find_scheme(const SchemeId& id) const {
    auto it = schemes_.find(id);
    return it == schemes_.end() ? nullptr : &it->second;
}

void Store::set_top_concept(const SchemeId& scheme_id, const ConceptId& c, bool top) {
    ConceptScheme& s = scheme_mut(scheme_id);
    const Concept& con = concept_at(c);
    if (con.scheme != scheme_id) {
        throw Error(ErrorCode::CrossScheme, c.str() + " is not in scheme " + scheme_id.str());
    }
    if (top) {
        if (!con.broader.empty()) {
            throw Error(ErrorCode::GraphError, "top concept must not have a broader concept: " + c.str());
        }
        s.top_concepts.insert(c);
    } else {
        s.top_concepts.erase(c);
    }
}

// ---------------------------------------------------------------- concepts

bool Store::id_in_use(const std::string& id) const {
    ConceptId cid(id);
    return concepts_.contains(cid) || tombstones_.contains(cid);
}

void Store::check_unique_pref(const Concept& c, const Label& label) const {
    if (auto other = find_by_pref_label(c.scheme, label.text, label.lang); other && *other != c.id) {
        throw Error(ErrorCode::DuplicatePrefLabel,
                    "pref label '" + label.text + "'@" + label.lang + " already used by " + other->str());
    }
}

ConceptId Store::add_concept(const SchemeId& scheme_id, Label pref_label, std::optional<Definition> definition) {
    scheme(scheme_id);
    pref_label = Label::make(pref_label.text, pref_label.lang);
    Concept c;
    c.scheme = scheme_id;
    check_unique_pref(c, pref_label);
    c.id = ConceptId(minter_.mint([this](const std::string& id) { return id_in_use(id); }, mint_cursor_));
    c.pref_labels.emplace(pref_label.lang, std::move(pref_label));
    c.definition = std::move(definition);
    ConceptId id = c.id;
    index_pref_labels(c, true);
    concepts_.emplace(id, std::move(c));
    return id;
}

void Store::insert_concept(Concept c) {
    if (c.id.empty()) {
        throw Error(ErrorCode::GraphError, "concept id is empty");
    }
    if (id_in_use(c.id.str())) {
        throw Error(ErrorCode::DuplicateId, "concept id already in use: " + c.id.str());
    }
    scheme(c.scheme);
    index_pref_labels(c, true);
    ConceptId id = c.id;
    concepts_.emplace(std::move(id), std::move(c));
}

void Store::index_pref_labels(const Concept& c, bool add) {
    for (const auto& [lang, label] : c.pref_labels) {
        auto key = std::make_tuple(c.scheme, lang, text::normalize_label(label.text));
        if (add) {
            pref_index_[key].insert(c.id);
        } else if (auto it = pref_index_.find(key); it != pref_index_.end()) {
            it->second.erase(c.id);
            if (it->second.empty()) pref_index_.erase(it);
        }
    }
}

void Store::add_tombstone(const ConceptId& id) {
    if (concepts_.contains(id)) {
        throw Error(ErrorCode::DuplicateId, "cannot tombstone a live concept: " + id.str());
    }
    tombstones_.insert(id);
}

Concept& Store::concept_mut(const ConceptId& id) {
    if (auto it = concepts_.find(id); it != concepts_.end()) return it->second;
    throw Error(ErrorCode::UnknownConcept, "unknown concept: " + id.str());
}

const Concept& Store::concept_at(const ConceptId& id) const {
    if (auto it = concepts_.find(id); it != concepts_.end()) return it->second;
    throw Error(ErrorCode::UnknownConcept, "unknown concept: " + id.str());
}

const Concept* Store::find(const ConceptId& id) const {
    auto it = concepts_.find(id);
    return it == concepts_.end() ? nullptr : &it->second;
}

void Store::check_not_frozen(const ConceptId& c) const {
    for (const auto& [rid, ref] : referentials_) {
        if (ref.frozen && branch_members(rid).contains(c)) {
            throw Error(ErrorCode::FrozenReferential,
                        c.str() + " belongs to frozen referential " + rid.str());
        }
    }
}

void Store::add_alt_label(const ConceptId& id, Label label) {
    label = Label::make(label.text, label.lang);
    Concept& c = concept_mut(id);
    check_not_frozen(id);
    if (auto it = c.pref_labels.find(label.lang);
        it != c.pref_labels.end() && text::normalize_label(it->second.text) == text::normalize_label(label.text)) {
        throw Error(ErrorCode::InvalidLabel, "alt label equals the concept's own pref label: " + label.text);
    }
    if (std::find(c.alt_labels.begin(), c.alt_labels.end(), label) == c.alt_labels.end()) {
        c.alt_labels.push_back(std::move(label));
    }
}

void Store::set_definition(const ConceptId& id, std::optional<Definition> definition) {
    Concept& c = concept_mut(id);
    check_not_frozen(id);
    c.definition = std::move(definition);
}

void Store::add_hierarchical_relation(const ConceptId& parent, const ConceptId& child) {
    Concept& p = concept_mut(parent);
    Concept& ch = concept_mut(child);
    if (p.scheme != ch.scheme) {
        throw Error(ErrorCode::CrossScheme, parent.str() + " and " + child.str() + " are in different schemes");
    }
    if (parent == child || descendants(child).contains(parent)) {
        throw Error(ErrorCode::CycleDetected, "linking " + parent.str() + " above " + child.str() + " closes a cycle");
    }
    check_not_frozen(parent);
    check_not_frozen(child);
    ch.broader.insert(parent);
    p.narrower.insert(child);
    schemes_.at(ch.scheme).top_concepts.erase(child);
}

void Store::remove_hierarchical_relation(const ConceptId& parent, const ConceptId& child) {
    Concept& p = concept_mut(parent);
    Concept& ch = concept_mut(child);
    check_not_frozen(parent);
    check_not_frozen(child);
    ch.broader.erase(parent);
    p.narrower.erase(child);
}

void Store::add_associative_relation(const ConceptId& a, const ConceptId& b) {
    if (a == b) {
        throw Error(ErrorCode::SelfRelation, "a concept cannot be related to itself: " + a.str());
    }
    Concept& ca = concept_mut(a);
    Concept& cb = concept_mut(b);
    if (ca.scheme != cb.scheme) {
        throw Error(ErrorCode::CrossScheme, "associative relations stay within one scheme; use a mapping");
    }
    if (ancestors(a).contains(b) || ancestors(b).contains(a)) {
        throw Error(ErrorCode::HierarchicallyLinked, a.str() + " and " + b.str() + " are hierarchically linked");
    }
    if (ca.related.contains(b) && cb.related.contains(a)) {
        return;
    }
    check_not_frozen(a);
    check_not_frozen(b);
    ca.related.insert(b);
    cb.related.insert(a);
}

void Store::remove_associative_relation(const ConceptId& a, const ConceptId& b) {
    Concept& ca = concept_mut(a);
    Concept& cb = concept_mut(b);
    check_not_frozen(a);
    check_not_frozen(b);
    ca.related.erase(b);
    cb.related.erase(a);
}

void Store::remove_concept(const ConceptId& id) {
    const Concept& c = concept_at(id);
    check_not_frozen(id);
    for (const auto& other : c.broader) {
        if (auto it = concepts_.find(other); it != concepts_.end()) it->second.narrower.erase(id);
    }
    for (const auto& other : c.narrower) {
        if (auto it = concepts_.find(other); it != concepts_.end()) it->second.broader.erase(id);
    }
    for (const auto& other : c.related) {
        if (auto it = concepts_.find(other); it != concepts_.end()) it->second.related.erase(id);
    }
    if (auto s = schemes_.find(c.scheme); s != schemes_.end()) {
        s->second.top_concepts.erase(id);
    }
    index_pref_labels(c, false);
    concepts_.erase(id);
    tombstones_.insert(id);
}

std::vector<ConceptId> Store::concepts_in(const SchemeId& scheme_id) const {
    std::vector<ConceptId> out;
    for (const auto& [id, c] : concepts_) {
        if (c.scheme == scheme_id) out.push_back(id);
    }
    return out;
}

std::optional<ConceptId> Store::find_by_pref_label(const SchemeId& scheme_id, std::string_view label,
                                                   std::string_view lang) const {
    auto it = pref_index_.find(std::make_tuple(scheme_id, std::string(lang), text::normalize_label(label)));
    if (it == pref_index_.end() || it->second.empty()) return std::nullopt;
    return *it->second.begin();
}

namespace {

std::set<ConceptId> closure(const std::map<ConceptId, Concept>& concepts, const ConceptId& start,
                            std::set<ConceptId> Concept::*edges) {
    std::set<ConceptId> seen;
    std::vector<ConceptId> stack{start};
    while (!stack.empty()) {
        ConceptId cur = std::move(stack.back());
        stack.pop_back();
        auto it = concepts.find(cur);
        if (it == concepts.end()) continue;
        for (const auto& next : it->second.*edges) {
            if (seen.insert(next).second) stack.push_back(next);
        }
    }
    return seen;
}

}  // namespace

std::set<ConceptId> Store::ancestors(const ConceptId& c) const {
    return closure(concepts_, c, &Concept::broader);
}

std::set<ConceptId> Store::descendants(const ConceptId& c) const {
    return closure(concepts_, c, &Concept::narrower);
}

std::vector<std::vector<ConceptId>> Store::id_paths_to_top(const ConceptId& start) const {
    const Concept& first = concept_at(start);
    std::vector<std::vector<ConceptId>> out;
    std::vector<ConceptId> chain{start};
    std::set<ConceptId> on_chain{start};

    std::function<void(const Concept&)> walk = [&](const Concept& cur) {
        if (cur.broader.empty()) {
            const ConceptScheme* s = find_scheme(cur.scheme);
            if (s != nullptr && s->top_concepts.contains(cur.id)) {
                out.emplace_back(chain.rbegin(), chain.rend());
            }
            return;
        }
        for (const auto& parent : cur.broader) {
            const Concept* p = find(parent);
            if (p == nullptr || on_chain.contains(parent)) continue;
            chain.push_back(parent);
            on_chain.insert(parent);
            walk(*p);
            on_chain.erase(parent);
            chain.pop_back();
        }
    };
    walk(first);
    return out;
}

std::vector<std::string> Store::paths_to_top(const ConceptId& c) const {
    std::vector<std::string> rendered;
    for (const auto& path : id_paths_to_top(c)) {
        std::string s;
        for (const auto& id : path) {
            if (!s.empty()) s += " > ";
            s += concept_at(id).label();
        }
        rendered.push_back(std::move(s));
    }
    std::sort(rendered.begin(), rendered.end());
    rendered.erase(std::unique(rendered.begin(), rendered.end()), rendered.end());
    return rendered;
}

// ---------------------------------------------------------------- mappings

const Mapping& Store::mapping(const MappingId& id) const {
    if (auto it = mappings_.find(id); it != mappings_.end()) return it->second;
    throw Error(ErrorCode::UnknownMapping, "unknown mapping: " + id.str());
}

Mapping& Store::mapping_mut(const MappingId& id) {
    if (auto it = mappings_.find(id); it != mappings_.end()) return it->second;
    throw Error(ErrorCode::UnknownMapping, "unknown mapping: " + id.str());
}

MappingId Store::next_mapping_id() const {
    std::uint64_t highest = 0;
    for (const auto& [id, m] : mappings_) {
        const std::string& s = id.str();
        if (s.size() > 1 && s[0] == 'm') {
            try {
                highest = std::max<std::uint64_t>(highest, std::stoull(s.substr(1)));
            } catch (const std::exception&) {
            }
        }
    }
    std::string digits = std::to_string(highest + 1);
    if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
    return MappingId("m" + digits);
}

void Store::put_mapping(Mapping m) {
    MappingId id = m.id;
    mappings_.insert_or_assign(std::move(id), std::move(m));
}

// ---------------------------------------------------------------- referentials

const Referential& Store::referential(const ReferentialId& id) const {
    if (auto it = referentials_.find(id); it != referentials_.end()) return it->second;
    throw Error(ErrorCode::UnknownReferential, "unknown referential: " + id.str());
}

Referential& Store::referential_mut(const ReferentialId& id) {
    if (auto it = referentials_.find(id); it != referentials_.end()) return it->second;
    throw Error(ErrorCode::UnknownReferential, "unknown referential: " + id.str());
}

void Store::put_referential(Referential r) {
    ReferentialId id = r.id;
    referentials_.insert_or_assign(std::move(id), std::move(r));
}

std::set<ConceptId> Store::branch_members(const ReferentialId& id) const {
    const Referential& ref = referential(id);
    std::set<ConceptId> members;
    const Concept* root = find(ref.root_concept);
    if (root == nullptr) return members;
    members.insert(root->id);
    members.merge(descendants(root->id));
    for (const auto& rel : root->related) {
        if (!concepts_.contains(rel)) continue;
        members.insert(rel);
        members.merge(descendants(rel));
    }
    for (const auto& [role, branch_root] : ref.role_overrides) {
        if (!concepts_.contains(branch_root)) continue;
        members.insert(branch_root);
        members.merge(descendants(branch_root));
    }
    return members;
}

// ---------------------------------------------------------------- descriptions

const ArtifactDescription* Store::find_description(const std::string& artifact_id) const {
    auto it = descriptions_.find(artifact_id);
    return it == descriptions_.end() ? nullptr : &it->second;
}

void Store::put_description(ArtifactDescription d) {
    std::string key = d.artifact_id;
    descriptions_.insert_or_assign(std::move(key), std::move(d));
}

bool Store::operator==(const Store& other) const {
    return schemes_ == other.schemes_ && concepts_ == other.concepts_ && tombstones_ == other.tombstones_ &&
           mappings_ == other.mappings_ && referentials_ == other.referentials_ &&
           descriptions_ == other.descriptions_;
}

}  // namespace pivotheso
