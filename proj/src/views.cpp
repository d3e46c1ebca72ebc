#include "pivotheso/views.hpp"

#include "pivotheso/descriptor.hpp"
#include "pivotheso/referential.hpp"
#include "pivotheso/store_json.hpp"
#include "pivotheso/text.hpp"

#include <algorithm>

namespace pivotheso::views {

json concept_view(const Store& store, const ConceptId& id) {
    const Concept& c = store.concept_at(id);
    json j = store_json::concept_to_json(c);
    j["label"] = c.label();
    j["is_grouping"] = c.is_grouping();
    j["paths"] = store.paths_to_top(id);
    json neighbors = json::object();
    for (const auto* set : {&c.broader, &c.narrower, &c.related}) {
        for (const auto& n : *set) {
            if (const Concept* x = store.find(n)) neighbors[n.str()] = x->label();
        }
    }
    j["neighbor_labels"] = neighbors;
    return j;
}

namespace {

std::vector<ConceptId> sorted_by_label(const Store& store, const std::set<ConceptId>& ids) {
    std::vector<std::pair<std::string, ConceptId>> keyed;
    for (const auto& id : ids) {
        if (const Concept* c = store.find(id)) keyed.emplace_back(text::normalize_label(c->label()), id);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<ConceptId> out;
    for (auto& [k, id] : keyed) out.push_back(id);
    return out;
}

json tree_node(const Store& store, const ConceptId& id, int depth, std::set<ConceptId>& on_path) {
    const Concept& c = store.concept_at(id);
    json node = {{"id", id.str()},
                 {"label", c.label()},
                 {"is_grouping", c.is_grouping()},
                 {"narrower_count", c.narrower.size()}};
    if (depth != 0 && on_path.insert(id).second) {
        json children = json::array();
        for (const auto& child : sorted_by_label(store, c.narrower)) {
            children.push_back(tree_node(store, child, depth < 0 ? depth : depth - 1, on_path));
        }
        node["children"] = std::move(children);
        on_path.erase(id);
    }
    return node;
}

}  // namespace

json tree_view(const Store& store, const SchemeId& scheme, const std::optional<ConceptId>& root, int depth) {
    const ConceptScheme& s = store.scheme(scheme);
    std::set<ConceptId> on_path;
    json roots = json::array();
    if (root) {
        const Concept& c = store.concept_at(*root);
        if (c.scheme != scheme) throw Error(ErrorCode::CrossScheme, root->str() + " is not in scheme " + scheme.str());
        roots.push_back(tree_node(store, *root, depth, on_path));
    } else {
        for (const auto& top : sorted_by_label(store, s.top_concepts)) roots.push_back(tree_node(store, top, depth, on_path));
    }
    return {{"scheme", scheme.str()}, {"title", s.title}, {"roots", roots}};
}

json diagnostic_json(const Diagnostic& d) {
    json subjects = json::array();
    for (const auto& s : d.subjects) subjects.push_back(s.str());
    return {{"rule", d.rule}, {"severity", to_string(d.severity)}, {"subjects", subjects}, {"message", d.message}};
}

json diagnostics_json(const std::vector<Diagnostic>& diagnostics) {
    json arr = json::array();
    for (const auto& d : diagnostics) arr.push_back(diagnostic_json(d));
    return arr;
}

namespace {

json definition_text(const Concept& c) {
    if (!c.definition) return nullptr;
    return c.definition->text;
}

}  // namespace

json suggestion_view(const Store& store, const aligner::SuggestionCandidate& c, const MappingId& id) {
    const Concept& s = store.concept_at(c.source);
    const Concept& t = store.concept_at(c.target);
    return {{"mapping_id", id.str()},
            {"source", c.source.str()},
            {"source_label", s.label()},
            {"source_definition", definition_text(s)},
            {"target", c.target.str()},
            {"target_label", t.label()},
            {"target_definition", definition_text(t)},
            {"tier", aligner::to_string(c.tier)},
            {"score", c.score},
            {"definition_jaccard", c.definition_jaccard},
            {"recommended", to_string(c.recommended)}};
}

json mapping_view(const Store& store, const Mapping& m) {
    json j = store_json::mapping_to_json(m);
    const Concept* s = store.find(m.source);
    const Concept* t = store.find(m.target);
    j["source_label"] = s ? json(s->label()) : json(nullptr);
    j["target_label"] = t ? json(t->label()) : json(nullptr);
    return j;
}

json referential_view(const Store& store, const ReferentialId& id) {
    json j = store_json::referential_to_json(store.referential(id));
    const auto counts = referential::role_counts(store, id);
    j["counts"] = {{"categories", counts.categories},
                   {"formes", counts.formes},
                   {"types", counts.types},
                   {"periodisation", counts.periodisation}};
    const auto ceiling = descriptor::combination_ceiling(store, id);
    j["ceiling"] = ceiling.ceiling;
    j["realized_combinations"] = ceiling.realized;
    return j;
}

json scheme_view(const Store& store, const ConceptScheme& s) {
    json j = store_json::scheme_to_json(s);
    j["concept_count"] = store.concepts_in(s.id).size();
    return j;
}

}  // namespace pivotheso::views
