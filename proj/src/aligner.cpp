#include "pivotheso/aligner.hpp"

#include "pivotheso/csv.hpp"
#include "pivotheso/text.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <tuple>

namespace pivotheso::aligner {

std::string_view to_string(Tier t) {
    switch (t) {
        case Tier::ExactNormalized: return "ExactNormalized";
        case Tier::ExactStripped: return "ExactStripped";
        case Tier::TokenOverlap: return "TokenOverlap";
    }
    return "TokenOverlap";
}

std::pair<std::size_t, std::size_t> jaccard_counts(const std::vector<std::string>& a,
                                                   const std::vector<std::string>& b) {
    std::size_t i = 0, j = 0, common = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return {common, a.size() + b.size() - common};
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    auto [common, total] = jaccard_counts(a, b);
    return total == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(total);
}

bool is_chronology(const Store& store, const ConceptId& c) {
    auto check = [&](const ConceptId& id) {
        const Concept* x = store.find(id);
        return x != nullptr && text::stripped_key(x->label()).starts_with("periodisation");
    };
    if (check(c)) return true;
    for (const auto& a : store.ancestors(c)) {
        if (check(a)) return true;
    }
    return false;
}

namespace {

const Mapping* find_mapping(const Store& store, const ConceptId& s, const ConceptId& t, MappingStatus status) {
    for (const auto& [id, m] : store.mappings()) {
        if (m.source == s && m.target == t && m.status == status) return &m;
    }
    return nullptr;
}

// Checks the forward pair and returns true when the inverse is already present.
bool check_pair(const Store& store, const ConceptId& source, const ConceptId& target, MatchType type,
                const MappingId& ignore) {
    const Concept& s = store.concept_at(source);
    const Concept& t = store.concept_at(target);
    if (s.scheme == t.scheme) {
        throw Error(ErrorCode::SameScheme, "mapping endpoints " + source.str() + " and " + target.str() +
                                               " belong to the same scheme");
    }
    bool inverse_present = false;
    for (const auto& [id, m] : store.mappings()) {
        if (id == ignore || m.status != MappingStatus::Accepted) continue;
        if (m.source == source && m.target == target) {
            if (m.match_type == type) {
                throw Error(ErrorCode::DuplicateAccepted, "an accepted " + std::string(to_string(type)) +
                                                              " already links " + source.str() + " to " +
                                                              target.str() + " (" + id.str() + ")");
            }
            throw Error(ErrorCode::ConflictingType, "an accepted " + std::string(to_string(m.match_type)) +
                                                        " already links " + source.str() + " to " + target.str() +
                                                        " (" + id.str() + ")");
        }
        if (m.source == target && m.target == source) {
            if (m.match_type != inverse(type)) {
                throw Error(ErrorCode::ConflictingType, "an accepted " + std::string(to_string(m.match_type)) +
                                                            " already links " + target.str() + " to " +
                                                            source.str() + " (" + id.str() + ")");
            }
            inverse_present = true;
        }
    }
    return inverse_present;
}

Mapping materialize_inverse(Store& store, const Mapping& forward, bool inverse_present) {
    if (inverse_present) {
        for (const auto& [id, m] : store.mappings()) {
            if (m.status == MappingStatus::Accepted && m.source == forward.target && m.target == forward.source) {
                return m;
            }
        }
    }
    // A pending suggestion for the reverse pair is promoted instead of duplicated.
    if (const Mapping* pending = find_mapping(store, forward.target, forward.source, MappingStatus::Suggested)) {
        Mapping m = *pending;
        m.match_type = inverse(forward.match_type);
        m.status = MappingStatus::Accepted;
        m.rationale = "inverse of " + forward.id.str();
        store.put_mapping(m);
        return m;
    }
    Mapping inv;
    inv.id = store.next_mapping_id();
    inv.source = forward.target;
    inv.target = forward.source;
    inv.match_type = inverse(forward.match_type);
    inv.status = MappingStatus::Accepted;
    inv.score = forward.score;
    inv.rationale = "inverse of " + forward.id.str();
    store.put_mapping(inv);
    return inv;
}

}  // namespace

std::pair<Mapping, Mapping> add_mapping(Store& store, const ConceptId& source, const ConceptId& target,
                                        MatchType type) {
    const bool inverse_present = check_pair(store, source, target, type, MappingId{});
    Mapping m;
    if (const Mapping* pending = find_mapping(store, source, target, MappingStatus::Suggested)) {
        m = *pending;
    } else {
        m.id = store.next_mapping_id();
        m.source = source;
        m.target = target;
        m.score = 1.0;
    }
    m.match_type = type;
    m.status = MappingStatus::Accepted;
    m.rationale = "curated";
    store.put_mapping(m);
    Mapping inv = materialize_inverse(store, m, inverse_present);
    return {m, inv};
}

Mapping decide(Store& store, const MappingId& id, Decision decision, std::optional<MatchType> override_type) {
    if (!store.mappings().contains(id)) throw Error(ErrorCode::UnknownMapping, "no mapping " + id.str());
    Mapping m = store.mapping(id);
    if (m.status != MappingStatus::Suggested) {
        throw Error(ErrorCode::AlreadyDecided,
                    "mapping " + id.str() + " is already " + std::string(to_string(m.status)));
    }
    if (decision == Decision::Reject) {
        m.status = MappingStatus::Rejected;
        store.put_mapping(m);
        return m;
    }
    if (override_type) m.match_type = *override_type;
    const bool inverse_present = check_pair(store, m.source, m.target, m.match_type, id);
    m.status = MappingStatus::Accepted;
    store.put_mapping(m);
    materialize_inverse(store, m, inverse_present);
    return m;
}

std::vector<Diagnostic> check_mappings(const Store& store) {
    std::vector<Diagnostic> out;
    std::vector<const Mapping*> accepted;
    for (const auto& [id, m] : store.mappings()) {
        if (m.status == MappingStatus::Accepted) accepted.push_back(&m);
    }

    // M1: types seen on each unordered pair.
    std::map<std::pair<ConceptId, ConceptId>, std::set<MatchType>> pair_types;
    for (const Mapping* m : accepted) {
        auto key = std::minmax(m->source, m->target);
        pair_types[{key.first, key.second}].insert(m->match_type);
    }
    for (const auto& [pair, types] : pair_types) {
        if (types.contains(MatchType::Exact) &&
            (types.contains(MatchType::Broad) || types.contains(MatchType::Narrow))) {
            out.push_back({"M1", Severity::Error, {pair.first, pair.second},
                           "pair carries both exactMatch and a hierarchical match"});
        }
    }

    // M2
    std::set<std::tuple<ConceptId, ConceptId, MatchType>> present;
    for (const Mapping* m : accepted) present.insert({m->source, m->target, m->match_type});
    for (const Mapping* m : accepted) {
        if (m->match_type != MatchType::Broad && m->match_type != MatchType::Narrow) continue;
        const MatchType inv = inverse(m->match_type);
        if (!present.contains({m->target, m->source, inv})) {
            out.push_back({"M2", Severity::Error, {m->source, m->target},
                           std::string(to_string(m->match_type)) + " " + m->id.str() + " lacks its inverse " +
                               std::string(to_string(inv))});
        }
    }

    // M3
    std::map<std::pair<ConceptId, SchemeId>, std::set<ConceptId>> exact_targets;
    for (const Mapping* m : accepted) {
        if (m->match_type != MatchType::Exact) continue;
        const Concept* t = store.find(m->target);
        if (t == nullptr) continue;
        exact_targets[{m->source, t->scheme}].insert(m->target);
    }
    for (const auto& [key, targets] : exact_targets) {
        if (targets.size() < 2) continue;
        std::vector<ConceptId> subjects{key.first};
        subjects.insert(subjects.end(), targets.begin(), targets.end());
        out.push_back({"M3", Severity::Warning, subjects,
                       std::to_string(targets.size()) + " exactMatch targets in scheme " + key.second.str()});
    }

    // M4
    for (const Mapping* m : accepted) {
        if (store.is_deleted(m->source) || store.is_deleted(m->target)) {
            out.push_back({"M4", Severity::Error, {m->source, m->target},
                           "mapping " + m->id.str() + " points to a deleted concept"});
        }
    }

    sort_diagnostics(out);
    return out;
}

namespace {

struct LabelInfo {
    std::set<std::string> normalized;
    std::set<std::string> stripped;
    std::vector<std::vector<std::string>> tokens;  // one token set per label
    std::vector<std::string> definition_tokens;
    bool has_definition = false;
    bool chronology = false;
};

LabelInfo describe(const Store& store, const Concept& c) {
    LabelInfo info;
    auto add = [&](const std::string& label) {
        info.normalized.insert(text::normalize_label(label));
        info.stripped.insert(text::stripped_key(label));
        info.tokens.push_back(
            text::content_tokens(text::strip_grouping_brackets(text::strip_source_suffix(label))));
    };
    for (const auto& [lang, l] : c.pref_labels) add(l.text);
    for (const auto& l : c.alt_labels) add(l.text);
    if (c.definition && !text::trim(c.definition->text).empty()) {
        info.has_definition = true;
        info.definition_tokens = text::content_tokens(c.definition->text);
    }
    info.chronology = is_chronology(store, c.id);
    return info;
}

bool intersects(const std::set<std::string>& a, const std::set<std::string>& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            return true;
        }
    }
    return false;
}

bool superset(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return std::includes(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::vector<SuggestionCandidate> suggest_mappings(const Store& store, const SchemeId& source_scheme,
                                                  const SchemeId& target_scheme, double min_score) {
    if (store.find_scheme(source_scheme) == nullptr) {
        throw Error(ErrorCode::UnknownScheme, "no scheme " + source_scheme.str());
    }
    if (store.find_scheme(target_scheme) == nullptr) {
        throw Error(ErrorCode::UnknownScheme, "no scheme " + target_scheme.str());
    }
    if (source_scheme == target_scheme) {
        throw Error(ErrorCode::SameScheme, "source and target scheme are both " + source_scheme.str());
    }

    std::set<std::pair<ConceptId, ConceptId>> excluded;
    for (const auto& [id, m] : store.mappings()) {
        if (m.status == MappingStatus::Rejected) {
            excluded.insert({m.source, m.target});
        } else if (m.status == MappingStatus::Accepted) {
            excluded.insert({m.source, m.target});
            excluded.insert({m.target, m.source});
        }
    }

    std::vector<std::pair<ConceptId, LabelInfo>> targets;
    for (const auto& id : store.concepts_in(target_scheme)) {
        targets.emplace_back(id, describe(store, store.concept_at(id)));
    }

    std::vector<SuggestionCandidate> out;
    for (const auto& sid : store.concepts_in(source_scheme)) {
        const LabelInfo src = describe(store, store.concept_at(sid));
        for (const auto& [tid, tgt] : targets) {
            if (src.chronology != tgt.chronology) continue;
            if (excluded.contains({sid, tid})) continue;

            SuggestionCandidate cand;
            cand.source = sid;
            cand.target = tid;
            if (src.has_definition && tgt.has_definition) {
                cand.definition_jaccard = jaccard(src.definition_tokens, tgt.definition_tokens);
            }
            if (intersects(src.normalized, tgt.normalized)) {
                cand.tier = Tier::ExactNormalized;
                cand.score = 1.0;
            } else if (intersects(src.stripped, tgt.stripped)) {
                cand.tier = Tier::ExactStripped;
                cand.score = stripped_tier_score;
            } else {
                cand.tier = Tier::TokenOverlap;
                const std::vector<std::string>* best_a = nullptr;
                const std::vector<std::string>* best_b = nullptr;
                for (const auto& a : src.tokens) {
                    for (const auto& b : tgt.tokens) {
                        auto [common, total] = jaccard_counts(a, b);
                        if (total == 0 || common == 0) continue;
                        // Compare common/total against the best fraction without rounding.
                        const bool better = best_a == nullptr || common * cand.union_size > cand.overlap * total;
                        if (better) {
                            cand.overlap = common;
                            cand.union_size = total;
                            best_a = &a;
                            best_b = &b;
                        }
                    }
                }
                if (best_a == nullptr) continue;
                cand.score = static_cast<double>(cand.overlap) / static_cast<double>(cand.union_size);
                cand.recommended =
                    superset(*best_a, *best_b) || superset(*best_b, *best_a) ? MatchType::Broad : MatchType::Related;
            }
            if (cand.score < min_score) continue;
            if (cand.tier != Tier::TokenOverlap) {
                const bool exact = src.has_definition && tgt.has_definition &&
                                   cand.definition_jaccard >= exactness_threshold;
                cand.recommended = exact ? MatchType::Exact : MatchType::Broad;
            }
            out.push_back(std::move(cand));
        }
    }

    std::sort(out.begin(), out.end(), [](const SuggestionCandidate& a, const SuggestionCandidate& b) {
        return std::make_tuple(a.source, static_cast<int>(a.tier), -a.score, -a.definition_jaccard, a.target) <
               std::make_tuple(b.source, static_cast<int>(b.tier), -b.score, -b.definition_jaccard, b.target);
    });
    return out;
}

std::string format_score(double score) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, score);
    return std::string(buf, res.ptr);
}

std::vector<MappingId> record_suggestions(Store& store, const std::vector<SuggestionCandidate>& candidates) {
    std::map<std::pair<ConceptId, ConceptId>, MappingId> pending;
    for (const auto& [id, m] : store.mappings()) {
        if (m.status == MappingStatus::Suggested) pending.emplace(std::make_pair(m.source, m.target), id);
    }
    std::vector<MappingId> ids;
    ids.reserve(candidates.size());
    for (const auto& c : candidates) {
        Mapping m;
        auto it = pending.find({c.source, c.target});
        if (it != pending.end()) {
            m = store.mapping(it->second);
        } else {
            m.id = store.next_mapping_id();
            m.source = c.source;
            m.target = c.target;
            m.status = MappingStatus::Suggested;
            pending.emplace(std::make_pair(c.source, c.target), m.id);
        }
        m.match_type = c.recommended;
        m.score = c.score;
        m.rationale = std::string(to_string(c.tier));
        store.put_mapping(m);
        ids.push_back(m.id);
    }
    return ids;
}

std::string suggestions_csv(const Store& store, const std::vector<SuggestionCandidate>& candidates) {
    std::string out = "source_ark,source_label,target_ark,target_label,tier,score,recommended_type\n";
    for (const auto& c : candidates) {
        out += csv::format_row({c.source.str(), store.concept_at(c.source).label(), c.target.str(),
                                store.concept_at(c.target).label(), std::string(to_string(c.tier)),
                                format_score(c.score), std::string(to_string(c.recommended))});
    }
    return out;
}

ConceptId create_grouping_concept(Store& store, const SchemeId& scheme, std::string_view label_core,
                                  const std::vector<ConceptId>& members, const std::optional<ConceptId>& parent) {
    if (store.find_scheme(scheme) == nullptr) throw Error(ErrorCode::UnknownScheme, "no scheme " + scheme.str());
    const std::string core = text::trim(label_core);
    if (core.empty()) throw Error(ErrorCode::InvalidLabel, "grouping label is empty");
    for (const auto& m : members) {
        const Concept* c = store.find(m);
        if (c == nullptr || c->scheme != scheme) {
            throw Error(ErrorCode::UnknownMember, m.str() + " is not a concept of scheme " + scheme.str());
        }
    }
    if (parent) {
        const Concept* p = store.find(*parent);
        if (p == nullptr || p->scheme != scheme) {
            throw Error(ErrorCode::UnknownConcept, parent->str() + " is not a concept of scheme " + scheme.str());
        }
    }
    Store work = store;
    const ConceptId id = work.add_concept(scheme, Label::make("[" + core + "]"));
    for (const auto& m : members) work.add_hierarchical_relation(id, m);
    if (parent) {
        work.add_hierarchical_relation(*parent, id);
    } else {
        work.set_top_concept(scheme, id, true);
    }
    store = std::move(work);
    return id;
}

}  // namespace pivotheso::aligner
