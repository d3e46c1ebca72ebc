#include "pivotheso/validator.hpp"

#include "pivotheso/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <tuple>

namespace pivotheso {

std::string_view to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
    std::sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.rule, a.subjects, a.message) < std::tie(b.rule, b.subjects, b.message);
    });
    diagnostics.erase(std::unique(diagnostics.begin(), diagnostics.end()), diagnostics.end());
}

std::string render_text(const Diagnostic& d) {
    std::string out = d.rule + " " + std::string(to_string(d.severity)) + " [";
    for (std::size_t i = 0; i < d.subjects.size(); ++i) {
        if (i > 0) out += ", ";
        out += d.subjects[i].str();
    }
    out += "] " + d.message;
    return out;
}

std::string render_json_line(const Diagnostic& d) {
    nlohmann::json subjects = nlohmann::json::array();
    for (const auto& s : d.subjects) subjects.push_back(s.str());
    nlohmann::json j = {{"rule", d.rule},
                        {"severity", to_string(d.severity)},
                        {"subjects", subjects},
                        {"message", d.message}};
    return j.dump();
}

namespace validator {
namespace {

std::string quoted(const Store& store, const ConceptId& id) {
    const Concept* c = store.find(id);
    return c == nullptr ? "<" + id.str() + ">" : "'" + c->label() + "'";
}

// Strongly connected components of the broader relation (iterative Tarjan).
std::vector<std::vector<ConceptId>> broader_cycles(const Store& store, const std::vector<ConceptId>& ids,
                                                   const SchemeId& scheme) {
    std::map<ConceptId, int> index;
    std::map<ConceptId, int> low;
    std::set<ConceptId> on_stack;
    std::vector<ConceptId> stack;
    std::vector<std::vector<ConceptId>> out;
    int counter = 0;

    auto successors = [&](const ConceptId& id) {
        std::vector<ConceptId> next;
        for (const auto& b : store.concept_at(id).broader) {
            const Concept* p = store.find(b);
            if (p != nullptr && p->scheme == scheme) next.push_back(b);
        }
        return next;
    };

    for (const auto& start : ids) {
        if (index.contains(start)) continue;
        struct Frame {
            ConceptId id;
            std::vector<ConceptId> next;
            std::size_t pos = 0;
        };
        std::vector<Frame> frames;
        auto open = [&](const ConceptId& id) {
            index[id] = low[id] = counter++;
            stack.push_back(id);
            on_stack.insert(id);
            frames.push_back({id, successors(id), 0});
        };
        open(start);
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.pos < f.next.size()) {
                const ConceptId w = f.next[f.pos++];
                if (!index.contains(w)) {
                    open(w);
                } else if (on_stack.contains(w)) {
                    low[f.id] = std::min(low[f.id], index[w]);
                }
                continue;
            }
            const ConceptId v = f.id;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().id] = std::min(low[frames.back().id], low[v]);
            if (low[v] == index[v]) {
                std::vector<ConceptId> component;
                for (;;) {
                    ConceptId w = stack.back();
                    stack.pop_back();
                    on_stack.erase(w);
                    component.push_back(w);
                    if (w == v) break;
                }
                const bool self_loop = component.size() == 1 && store.concept_at(v).broader.contains(v);
                if (component.size() > 1 || self_loop) {
                    std::sort(component.begin(), component.end());
                    out.push_back(std::move(component));
                }
            }
        }
    }
    return out;
}

}  // namespace

std::vector<Diagnostic> validate(const Store& store, const SchemeId& scheme_id) {
    return validate(store, scheme_id, store.scheme(scheme_id).profile);
}

std::vector<Diagnostic> validate(const Store& store, const SchemeId& scheme_id, Profile profile) {
    const ConceptScheme& scheme = store.scheme(scheme_id);
    const std::vector<ConceptId> ids = store.concepts_in(scheme_id);
    std::vector<Diagnostic> out;

    // R1 / R2
    std::map<std::pair<std::string, std::string>, std::vector<ConceptId>> prefs;
    for (const auto& id : ids) {
        for (const auto& [lang, label] : store.concept_at(id).pref_labels) {
            prefs[{lang, text::normalize_label(label.text)}].push_back(id);
        }
    }
    for (const auto& [key, group] : prefs) {
        if (group.size() < 2) continue;
        out.push_back({"R1", Severity::Error, group,
                       "pref label '" + key.second + "'@" + key.first + " is shared by " +
                           std::to_string(group.size()) + " concepts"});
    }
    for (const auto& id : ids) {
        const Concept& c = store.concept_at(id);
        for (const auto& alt : c.alt_labels) {
            auto it = prefs.find({alt.lang, text::normalize_label(alt.text)});
            if (it == prefs.end()) continue;
            for (const auto& other : it->second) {
                if (other == id) continue;
                out.push_back({"R2", Severity::Warning, {id, other},
                               "alt label '" + alt.text + "' of " + quoted(store, id) + " is the pref label of " +
                                   quoted(store, other)});
            }
        }
    }

    // R3
    for (auto& component : broader_cycles(store, ids, scheme_id)) {
        out.push_back({"R3", Severity::Error, component,
                       "broader cycle through " + std::to_string(component.size()) + " concept(s)"});
    }

    // R4 / R5 / R8
    std::map<ConceptId, std::set<ConceptId>> ancestor_cache;
    auto ancestors_of = [&](const ConceptId& id) -> const std::set<ConceptId>& {
        auto it = ancestor_cache.find(id);
        if (it == ancestor_cache.end()) it = ancestor_cache.emplace(id, store.ancestors(id)).first;
        return it->second;
    };
    for (const auto& id : ids) {
        const Concept& c = store.concept_at(id);
        for (const auto& r : c.related) {
            const Concept* other = store.find(r);
            if (other == nullptr || !other->related.contains(id)) {
                out.push_back({"R4", Severity::Error, {id, r},
                               quoted(store, id) + " is related to " + quoted(store, r) + " but not the reverse"});
            }
            if (other != nullptr && id < r && (ancestors_of(id).contains(r) || ancestors_of(r).contains(id))) {
                out.push_back({"R5", Severity::Error, {id, r},
                               quoted(store, id) + " and " + quoted(store, r) +
                                   " are associatively related but hierarchically linked"});
            }
        }
        for (const auto& b : c.broader) {
            const Concept* parent = store.find(b);
            if (parent == nullptr || !parent->narrower.contains(id)) {
                out.push_back({"R8", Severity::Error, {id, b},
                               quoted(store, b) + " is broader than " + quoted(store, id) +
                                   " without the matching narrower link"});
            }
        }
        for (const auto& n : c.narrower) {
            const Concept* child = store.find(n);
            if (child == nullptr || !child->broader.contains(id)) {
                out.push_back({"R8", Severity::Error, {n, id},
                               quoted(store, id) + " lists " + quoted(store, n) +
                                   " as narrower without the matching broader link"});
            }
        }
    }

    // R6
    const Severity r6 = profile == Profile::Research ? Severity::Error : Severity::Warning;
    for (const auto& id : ids) {
        const Concept& c = store.concept_at(id);
        if (c.is_grouping()) continue;
        if (!c.definition || text::trim(c.definition->text).empty()) {
            out.push_back({"R6", r6, {id}, quoted(store, id) + " has no definition"});
        } else if (c.definition->sources.empty()) {
            out.push_back({"R6", r6, {id}, quoted(store, id) + " has an unsourced definition"});
        }
    }

    // R7: reachability from the top concepts along reversed broader links.
    std::map<ConceptId, std::vector<ConceptId>> children;
    for (const auto& id : ids) {
        for (const auto& b : store.concept_at(id).broader) children[b].push_back(id);
    }
    std::set<ConceptId> reached;
    std::vector<ConceptId> frontier;
    for (const auto& top : scheme.top_concepts) {
        const Concept* t = store.find(top);
        if (t != nullptr && t->scheme == scheme_id && reached.insert(top).second) frontier.push_back(top);
    }
    while (!frontier.empty()) {
        ConceptId cur = frontier.back();
        frontier.pop_back();
        for (const auto& child : children[cur]) {
            if (reached.insert(child).second) frontier.push_back(child);
        }
    }
    for (const auto& id : ids) {
        if (!reached.contains(id)) {
            out.push_back({"R7", Severity::Warning, {id}, quoted(store, id) + " does not reach any top concept"});
        }
    }

    sort_diagnostics(out);
    return out;
}

std::string explain(std::string_view rule_code) {
    if (rule_code == "R1")
        return "R1 (error): two concepts of a scheme may not share the same preferred term in one language; "
               "labels are compared after normalization (ISO 25964-1 forbids strictly identical terms).";
    if (rule_code == "R2")
        return "R2 (warning): an alternative label equals another concept's preferred term in the same scheme; "
               "legal, but usually a sign of an ambiguous synonym.";
    if (rule_code == "R3")
        return "R3 (error): the hierarchy must run from generic to specific concepts without cycles.";
    if (rule_code == "R4")
        return "R4 (error): associative relations are reciprocal; if A is related to B, B must be related to A.";
    if (rule_code == "R5")
        return "R5 (error): an associative relation links concepts that are not hierarchically linked; "
               "a concept related to one of its ancestors or descendants is redundant.";
    if (rule_code == "R6")
        return "R6 (error under the research profile, warning under the documentary profile): every concept "
               "carries a definition and the definition is sourced, usually by a bibliographic reference. "
               "Grouping terms in square brackets are exempt.";
    if (rule_code == "R7")
        return "R7 (warning): every concept should be reachable from a top concept of its scheme through "
               "broader links.";
    if (rule_code == "R8")
        return "R8 (error): hierarchical relations are mutually consistent: A broader than B holds exactly "
               "when B is narrower than A.";
    throw Error(ErrorCode::UnknownRule, "unknown rule code '" + std::string(rule_code) + "'");
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace validator
}  // namespace pivotheso
