#include "pivotheso/referential.hpp"

#include "pivotheso/text.hpp"

#include <json.hpp>

#include <algorithm>

namespace pivotheso::referential {
namespace {

std::string slug(std::string_view s) {
    std::string out;
    for (char c : text::normalize_label(s)) {
        const bool alnum = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
        if (alnum) {
            out.push_back(c);
        } else if (!out.empty() && out.back() != '-') {
            out.push_back('-');
        }
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out;
}

std::optional<Role> conventional_role(const Concept& c) {
    const std::string key = text::stripped_key(c.label());
    if (key == "categories") return Role::Categorie;
    if (key == "formes") return Role::Forme;
    if (key == "types") return Role::Type;
    if (key.starts_with("periodisation")) return Role::Periodisation;
    return std::nullopt;
}

}  // namespace

Referential register_referential(Store& store, const RegisterRequest& req) {
    if (store.find_scheme(req.scheme) == nullptr) throw Error(ErrorCode::UnknownScheme, "no scheme " + req.scheme.str());
    const Concept* root = store.find(req.root);
    if (root == nullptr || root->scheme != req.scheme) {
        throw Error(ErrorCode::UnknownConcept, req.root.str() + " is not a concept of scheme " + req.scheme.str());
    }
    if (text::trim(req.biblio_key).empty()) throw Error(ErrorCode::InvalidLabel, "bibliographic key is empty");
    if (req.millesime < 1800 || req.millesime > 2100) {
        throw Error(ErrorCode::InvalidMillesime, "millesime " + std::to_string(req.millesime) + " is outside 1800-2100");
    }
    for (const auto& [role, branch_root] : req.role_overrides) {
        const Concept* c = store.find(branch_root);
        if (c == nullptr || c->scheme != req.scheme) {
            throw Error(ErrorCode::UnknownConcept, branch_root.str() + " is not a concept of scheme " + req.scheme.str());
        }
    }
    const std::string biblio = text::trim(req.biblio_key);
    for (const auto& [id, r] : store.referentials()) {
        if (r.scheme == req.scheme && r.millesime == req.millesime &&
            text::normalize_label(r.biblio_key) == text::normalize_label(biblio)) {
            throw Error(ErrorCode::DuplicateReferential,
                        "referential " + id.str() + " already registers '" + biblio + "' " + std::to_string(req.millesime));
        }
    }
    ReferentialId id;
    if (req.id) {
        id = *req.id;
    } else {
        std::string s = slug(biblio);
        const std::string year = std::to_string(req.millesime);
        if (!s.ends_with(year)) s += (s.empty() ? "" : "-") + year;
        id = ReferentialId{s};
    }
    if (id.empty()) throw Error(ErrorCode::InvalidLabel, "referential id is empty");
    if (store.referentials().contains(id)) {
        throw Error(ErrorCode::DuplicateReferential, "referential id " + id.str() + " is already taken");
    }
    Referential r;
    r.id = id;
    r.scheme = req.scheme;
    r.root_concept = req.root;
    r.biblio_key = biblio;
    r.millesime = req.millesime;
    r.keywords = req.keywords;
    r.role_overrides = req.role_overrides;
    store.put_referential(r);
    return r;
}

const std::set<ConceptId>& RoleIndex::of(Role r) const {
    static const std::set<ConceptId> none;
    auto it = members.find(r);
    return it == members.end() ? none : it->second;
}

RoleIndex classify(const Store& store, const ReferentialId& id) {
    const Referential& ref = store.referential(id);
    RoleIndex idx;
    idx.branch = store.branch_members(id);
    for (const auto& c : idx.branch) {
        if (auto role = conventional_role(store.concept_at(c)); role && !ref.role_overrides.contains(*role)) {
            idx.roots[*role].insert(c);
        }
    }
    for (const auto& [role, c] : ref.role_overrides) {
        if (store.find(c) != nullptr) idx.roots[role].insert(c);
    }
    for (const auto& [role, roots] : idx.roots) {
        std::set<ConceptId> under;
        for (const auto& r : roots) {
            under.insert(r);
            under.merge(store.descendants(r));
        }
        auto& members = idx.members[role];
        for (const auto& c : under) {
            if (roots.contains(c)) continue;
            const Concept& x = store.concept_at(c);
            if (!x.narrower.empty() || x.is_grouping()) continue;
            if (role == Role::Type && text::stripped_key(x.label()).starts_with("types ")) continue;
            members.insert(c);
        }
        if (role == Role::Type) idx.type_branch = std::move(under);
    }
    return idx;
}

RoleCounts role_counts(const Store& store, const ReferentialId& id) {
    const RoleIndex idx = classify(store, id);
    return {idx.of(Role::Categorie).size(), idx.of(Role::Forme).size(), idx.of(Role::Type).size(),
            idx.of(Role::Periodisation).size()};
}

void freeze(Store& store, const ReferentialId& id) {
    Referential& r = store.referential_mut(id);
    if (r.frozen) throw Error(ErrorCode::AlreadyFrozen, "referential " + id.str() + " is already frozen");
    r.frozen = true;
}

namespace {

struct Snapshot {
    std::set<std::string> digests;
    std::set<std::string> paths;
};

std::map<std::string, Snapshot> snapshot(const Store& store, const ReferentialId& id) {
    const std::set<ConceptId> branch = store.branch_members(id);
    std::map<std::string, Snapshot> out;
    for (const auto& c : branch) {
        const Concept& x = store.concept_at(c);
        Snapshot& s = out[text::stripped_key(x.label())];
        s.digests.insert(x.definition ? text::definition_digest(x.definition->text) : std::string());
        for (const auto& path : store.id_paths_to_top(c)) {
            auto first = std::find_if(path.begin(), path.end(), [&](const ConceptId& p) { return branch.contains(p); });
            std::string rendered;
            for (auto it = first; it != path.end(); ++it) {
                if (!rendered.empty()) rendered += " > ";
                rendered += text::stripped_key(store.concept_at(*it).label());
            }
            s.paths.insert(rendered);
        }
    }
    return out;
}

std::string joined(const std::set<std::string>& s) {
    std::string out;
    for (const auto& x : s) {
        if (!out.empty()) out += "|";
        out += x;
    }
    return out;
}

}  // namespace

ReferentialDiff diff_referentials(const Store& store, const ReferentialId& old_id, const ReferentialId& new_id) {
    store.referential(old_id);
    store.referential(new_id);
    const auto before = snapshot(store, old_id);
    const auto after = snapshot(store, new_id);
    ReferentialDiff d;
    for (const auto& [label, s] : before) {
        auto it = after.find(label);
        if (it == after.end()) {
            d.removed.insert(label);
            continue;
        }
        if (s.digests != it->second.digests) d.redefined.push_back({label, joined(s.digests), joined(it->second.digests)});
        if (s.paths != it->second.paths) {
            d.moved.push_back({label, {s.paths.begin(), s.paths.end()},
                               {it->second.paths.begin(), it->second.paths.end()}});
        }
    }
    for (const auto& [label, s] : after) {
        if (!before.contains(label)) d.added.insert(label);
    }
    return d;
}

std::string render_text(const ReferentialDiff& d) {
    if (d.empty()) return "no differences\n";
    std::string out;
    for (const auto& l : d.added) out += "added " + l + "\n";
    for (const auto& l : d.removed) out += "removed " + l + "\n";
    for (const auto& r : d.redefined) {
        out += "redefined " + r.label + " " + (r.old_digest.empty() ? "none" : r.old_digest) + " -> " +
               (r.new_digest.empty() ? "none" : r.new_digest) + "\n";
    }
    for (const auto& m : d.moved) {
        out += "moved " + m.label + "\n";
        for (const auto& p : m.old_paths) out += "  - " + p + "\n";
        for (const auto& p : m.new_paths) out += "  + " + p + "\n";
    }
    return out;
}

std::string render_json(const ReferentialDiff& d) {
    nlohmann::json j;
    j["added"] = d.added;
    j["removed"] = d.removed;
    j["redefined"] = nlohmann::json::array();
    for (const auto& r : d.redefined) {
        j["redefined"].push_back({{"label", r.label}, {"old_digest", r.old_digest}, {"new_digest", r.new_digest}});
    }
    j["moved"] = nlohmann::json::array();
    for (const auto& m : d.moved) {
        j["moved"].push_back({{"label", m.label}, {"old_paths", m.old_paths}, {"new_paths", m.new_paths}});
    }
    return j.dump(2) + "\n";
}

}  // namespace pivotheso::referential
