#include "pivotheso/descriptor.hpp"

#include "pivotheso/csv.hpp"
#include "pivotheso/text.hpp"

#include <json.hpp>

#include <array>

namespace pivotheso::descriptor {
namespace {

const char* role_name(Role r) {
    switch (r) {
        case Role::Categorie: return "categorie";
        case Role::Forme: return "forme";
        case Role::Type: return "type";
        case Role::Periodisation: return "chronologie";
    }
    return "";
}

void require_member(const Store& store, const referential::RoleIndex& index, Role role, const ConceptId& id,
                    const ReferentialId& ref) {
    const Concept* c = store.find(id);
    if (c == nullptr) {
        throw Error(ErrorCode::NotInReferential, std::string(role_name(role)) + " " + id.str() + " is unknown");
    }
    if (!index.of(role).contains(id)) {
        throw Error(ErrorCode::NotInReferential, std::string(role_name(role)) + " '" + c->label() +
                                                     "' is not a member of referential " + ref.str());
    }
}

}  // namespace

void check_description(const Store& store, const referential::RoleIndex& index, const DescriptionInput& in) {
    require_member(store, index, Role::Forme, in.forme, in.referential);
    require_member(store, index, Role::Type, in.type, in.referential);
    require_member(store, index, Role::Categorie, in.categorie, in.referential);
    require_member(store, index, Role::Periodisation, in.chronologie, in.referential);

    const Concept& forme = store.concept_at(in.forme);
    const Concept& type = store.concept_at(in.type);
    bool form_ok = false;
    for (const auto& a : store.ancestors(in.type)) {
        if (forme.related.contains(a) && index.type_branch.contains(a)) {
            form_ok = true;
            break;
        }
    }
    if (!form_ok) {
        throw Error(ErrorCode::FormTypeMismatch,
                    "type '" + type.label() + "' is not under a type group of forme '" + forme.label() + "'");
    }
    if (!type.related.contains(in.categorie)) {
        throw Error(ErrorCode::IncompatibleTypeCategory, "categorie '" + store.concept_at(in.categorie).label() +
                                                             "' is not related to type '" + type.label() + "'");
    }
}

ArtifactDescription compose_description(Store& store, const DescriptionInput& in) {
    if (text::trim(in.artifact_id).empty()) throw Error(ErrorCode::InvalidLabel, "artifact id is empty");
    const referential::RoleIndex index = referential::classify(store, in.referential);
    check_description(store, index, in);
    ArtifactDescription d{text::trim(in.artifact_id), in.forme, in.type, in.categorie, in.chronologie, in.referential};
    store.put_description(d);
    return d;
}

ExpandedDescription expand_description(const Store& store, const ArtifactDescription& d) {
    const Referential& ref = store.referential(d.referential);
    ExpandedDescription e;
    e.artifact_id = d.artifact_id;
    e.referential = ref.id;
    e.biblio_key = ref.biblio_key;
    e.millesime = ref.millesime;
    const std::array<std::pair<const char*, ConceptId>, 5> roles{{{"forme", d.forme},
                                                                  {"type", d.type},
                                                                  {"categorie", d.categorie},
                                                                  {"chronologie", d.chronologie},
                                                                  {"referentiel", ref.root_concept}}};
    for (const auto& [role, id] : roles) {
        const Concept* c = store.find(id);
        if (c == nullptr) {
            throw Error(ErrorCode::DanglingConcept,
                        std::string(role) + " " + id.str() + " of " + d.artifact_id + " no longer exists");
        }
        e.concepts.push_back({role, id, c->label(), c->definition, store.paths_to_top(id)});
    }
    return e;
}

std::string to_json(const ExpandedDescription& e) {
    nlohmann::ordered_json j;
    j["artifact_id"] = e.artifact_id;
    j["referential"] = {{"id", e.referential.str()}, {"biblio_key", e.biblio_key}, {"millesime", e.millesime}};
    nlohmann::ordered_json concepts = nlohmann::ordered_json::object();
    for (const auto& c : e.concepts) {
        nlohmann::ordered_json def = nullptr;
        if (c.definition) {
            def = {{"text", c.definition->text},
                   {"sources", c.definition->sources},
                   {"external_resources", c.definition->external_resources}};
        }
        concepts[c.role] = {{"ark", c.ark.str()}, {"pref_label", c.pref_label}, {"definition", def}, {"paths", c.paths}};
    }
    j["concepts"] = concepts;
    return j.dump(2) + "\n";
}

CombinationCeiling combination_ceiling(const Store& store, const ReferentialId& id) {
    const referential::RoleIndex index = referential::classify(store, id);
    CombinationCeiling c;
    c.n_categories = index.of(Role::Categorie).size();
    c.n_types = index.of(Role::Type).size();
    c.n_formes = index.of(Role::Forme).size();
    c.ceiling = c.n_categories * c.n_types;
    const auto& categories = index.of(Role::Categorie);
    for (const auto& t : index.of(Role::Type)) {
        for (const auto& r : store.concept_at(t).related) {
            if (categories.contains(r)) ++c.realized;
        }
    }
    return c;
}

namespace {

class Resolver {
public:
    Resolver(const Store& store, const referential::RoleIndex& index) : store_(store), index_(index) {
        for (Role role : {Role::Forme, Role::Type, Role::Categorie, Role::Periodisation}) {
            for (const auto& id : index.of(role)) {
                const Concept& c = store.concept_at(id);
                for (const auto& [lang, l] : c.pref_labels) prefs_[role][text::stripped_key(l.text)].insert(id);
                for (const auto& l : c.alt_labels) alts_[role][text::stripped_key(l.text)].insert(id);
            }
        }
    }

    ConceptId resolve(Role role, const std::string& raw) const {
        const std::string cell = text::trim(raw);
        if (cell.empty()) throw Error(ErrorCode::MalformedRow, std::string(role_name(role)) + " cell is empty");
        if (auto pos = cell.find("ark:/"); pos != std::string::npos) {
            ConceptId id{cell.substr(pos)};
            if (store_.find(id) == nullptr || !index_.of(role).contains(id)) {
                throw Error(ErrorCode::NotInReferential,
                            std::string(role_name(role)) + " " + id.str() + " is not a member of the referential");
            }
            return id;
        }
        const std::string key = text::stripped_key(cell);
        for (const auto* table : {&prefs_, &alts_}) {
            auto by_role = table->find(role);
            if (by_role == table->end()) continue;
            auto it = by_role->second.find(key);
            if (it == by_role->second.end()) continue;
            if (it->second.size() > 1) {
                throw Error(ErrorCode::NotInReferential,
                            std::string(role_name(role)) + " '" + cell + "' is ambiguous in the referential");
            }
            return *it->second.begin();
        }
        throw Error(ErrorCode::NotInReferential,
                    std::string(role_name(role)) + " '" + cell + "' is not a member of the referential");
    }

private:
    using Table = std::map<Role, std::map<std::string, std::set<ConceptId>>>;
    const Store& store_;
    const referential::RoleIndex& index_;
    Table prefs_;
    Table alts_;
};

}  // namespace

ConceptId resolve_cell(const Store& store, const referential::RoleIndex& index, Role role, std::string_view cell) {
    return Resolver(store, index).resolve(role, std::string(cell));
}

IngestReport ingest_inventory(Store& store, std::string_view csv_text, const ReferentialId& id) {
    const referential::RoleIndex index = referential::classify(store, id);
    const std::vector<csv::Record> records = csv::parse(csv_text);
    static const std::array<std::string_view, 5> header{"artifact_id", "forme", "type", "categorie", "chronologie"};
    if (records.empty() || records.front().fields.size() != header.size()) {
        throw Error(ErrorCode::MalformedCsv, "header must be artifact_id,forme,type,categorie,chronologie");
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (text::trim(records.front().fields[i]) != header[i]) {
            throw Error(ErrorCode::MalformedCsv, "header must be artifact_id,forme,type,categorie,chronologie");
        }
    }

    const Resolver resolver(store, index);
    IngestReport report;
    std::vector<ArtifactDescription> accepted;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& f = records[i].fields;
        const std::size_t row = i;
        if (f.size() == 1 && text::trim(f[0]).empty()) continue;
        if (f.size() != header.size()) {
            report.rejects.push_back({row, ErrorCode::MalformedRow,
                                      "expected 5 fields, found " + std::to_string(f.size())});
            continue;
        }
        try {
            DescriptionInput in;
            in.artifact_id = text::trim(f[0]);
            if (in.artifact_id.empty()) throw Error(ErrorCode::MalformedRow, "artifact_id is empty");
            in.forme = resolver.resolve(Role::Forme, f[1]);
            in.type = resolver.resolve(Role::Type, f[2]);
            in.categorie = resolver.resolve(Role::Categorie, f[3]);
            in.chronologie = resolver.resolve(Role::Periodisation, f[4]);
            in.referential = id;
            check_description(store, index, in);
            accepted.push_back({in.artifact_id, in.forme, in.type, in.categorie, in.chronologie, id});
            report.stored.push_back(in.artifact_id);
        } catch (const Error& e) {
            report.rejects.push_back({row, e.code(), e.what()});
        }
    }
    for (auto& d : accepted) store.put_description(std::move(d));
    return report;
}

std::string rejects_csv(const IngestReport& report) {
    std::string out = "row,error_code,detail\n";
    for (const auto& r : report.rejects) {
        out += csv::format_row({std::to_string(r.row), std::string(to_string(r.code)), r.detail});
    }
    return out;
}

}  // namespace pivotheso::descriptor
