#include "pivotheso/store_json.hpp"

namespace pivotheso::store_json {

using nlohmann::json;

namespace {

json labels_to_json(const std::vector<Label>& labels) {
    json arr = json::array();
    for (const auto& l : labels) arr.push_back({{"lang", l.lang}, {"text", l.text}});
    return arr;
}

template <class IdT>
json ids_to_json(const std::set<IdT>& ids) {
    json arr = json::array();
    for (const auto& id : ids) arr.push_back(id.str());
    return arr;
}

[[noreturn]] void corrupt(const std::string& message) { throw Error(ErrorCode::CorruptStore, message); }

const json& field(const json& obj, const char* name) {
    if (!obj.is_object() || !obj.contains(name)) corrupt(std::string("missing field '") + name + "'");
    return obj.at(name);
}

Label label_from_json(const json& j) {
    return Label{field(j, "text").get<std::string>(), field(j, "lang").get<std::string>()};
}

template <class IdT>
std::set<IdT> ids_from_json(const json& arr) {
    std::set<IdT> out;
    for (const auto& v : arr) out.insert(IdT(v.get<std::string>()));
    return out;
}

}  // namespace

json scheme_to_json(const ConceptScheme& s) {
    json j = {{"id", s.id.str()},
              {"title", s.title},
              {"profile", to_string(s.profile)},
              {"top_concepts", ids_to_json(s.top_concepts)}};
    if (!s.resolver_base.empty()) j["resolver_base"] = s.resolver_base;
    return j;
}

json concept_to_json(const Concept& c) {
    std::vector<Label> prefs;
    for (const auto& [lang, l] : c.pref_labels) prefs.push_back(l);
    json j = {{"id", c.id.str()},
              {"scheme", c.scheme.str()},
              {"pref_labels", labels_to_json(prefs)},
              {"alt_labels", labels_to_json(c.alt_labels)},
              {"broader", ids_to_json(c.broader)},
              {"narrower", ids_to_json(c.narrower)},
              {"related", ids_to_json(c.related)}};
    if (c.definition) {
        j["definition"] = {{"text", c.definition->text},
                           {"sources", c.definition->sources},
                           {"external_resources", c.definition->external_resources}};
    } else {
        j["definition"] = nullptr;
    }
    return j;
}

json mapping_to_json(const Mapping& m) {
    return {{"id", m.id.str()},
            {"source", m.source.str()},
            {"target", m.target.str()},
            {"match_type", to_string(m.match_type)},
            {"status", to_string(m.status)},
            {"score", m.score},
            {"rationale", m.rationale}};
}

json referential_to_json(const Referential& r) {
    json overrides = json::object();
    for (const auto& [role, id] : r.role_overrides) overrides[std::string(to_string(role))] = id.str();
    return {{"id", r.id.str()},
            {"scheme", r.scheme.str()},
            {"root_concept", r.root_concept.str()},
            {"biblio_key", r.biblio_key},
            {"millesime", r.millesime},
            {"keywords", r.keywords},
            {"frozen", r.frozen},
            {"role_overrides", overrides}};
}

json description_to_json(const ArtifactDescription& d) {
    return {{"artifact_id", d.artifact_id},
            {"forme", d.forme.str()},
            {"type", d.type.str()},
            {"categorie", d.categorie.str()},
            {"chronologie", d.chronologie.str()},
            {"referential", d.referential.str()}};
}

std::string write_store(const Store& store) {
    json root;
    root["format_version"] = format_version;
    json schemes = json::array();
    for (const auto& [id, s] : store.schemes()) schemes.push_back(scheme_to_json(s));
    root["schemes"] = std::move(schemes);

    std::map<ConceptId, json> concepts;
    for (const auto& [id, c] : store.concepts()) concepts.emplace(id, concept_to_json(c));
    for (const auto& id : store.tombstones()) concepts.emplace(id, json{{"id", id.str()}, {"deleted", true}});
    json concept_arr = json::array();
    for (auto& [id, j] : concepts) concept_arr.push_back(std::move(j));
    root["concepts"] = std::move(concept_arr);

    json mappings = json::array();
    for (const auto& [id, m] : store.mappings()) mappings.push_back(mapping_to_json(m));
    root["mappings"] = std::move(mappings);

    json refs = json::array();
    for (const auto& [id, r] : store.referentials()) refs.push_back(referential_to_json(r));
    root["referentials"] = std::move(refs);

    json descs = json::array();
    for (const auto& [id, d] : store.descriptions()) descs.push_back(description_to_json(d));
    root["descriptions"] = std::move(descs);

    return root.dump(2) + "\n";
}

Store read_store(std::string_view bytes) {
    json root;
    try {
        root = json::parse(bytes.begin(), bytes.end());
    } catch (const json::exception& e) {
        corrupt(std::string("store is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) corrupt("store root is not an object");
    if (!root.contains("format_version")) corrupt("missing field 'format_version'");
    if (!root["format_version"].is_number_integer() || root["format_version"].get<int>() != format_version) {
        throw Error(ErrorCode::FormatVersionMismatch,
                    "unsupported store format_version " + root["format_version"].dump());
    }

    Store store;
    try {
        for (const auto& s : field(root, "schemes")) {
            ConceptScheme& scheme = store.add_scheme(SchemeId(field(s, "id").get<std::string>()),
                                                     field(s, "title").get<std::string>(),
                                                     parse_profile(field(s, "profile").get<std::string>()));
            scheme.top_concepts = ids_from_json<ConceptId>(field(s, "top_concepts"));
            scheme.resolver_base = s.value("resolver_base", "");
        }
        for (const auto& cj : field(root, "concepts")) {
            ConceptId id(field(cj, "id").get<std::string>());
            if (cj.value("deleted", false)) {
                store.add_tombstone(id);
                continue;
            }
            Concept c;
            c.id = id;
            c.scheme = SchemeId(field(cj, "scheme").get<std::string>());
            for (const auto& lj : field(cj, "pref_labels")) {
                Label l = label_from_json(lj);
                std::string lang = l.lang;
                c.pref_labels.emplace(std::move(lang), std::move(l));
            }
            for (const auto& lj : field(cj, "alt_labels")) c.alt_labels.push_back(label_from_json(lj));
            const json& def = field(cj, "definition");
            if (!def.is_null()) {
                Definition d;
                d.text = field(def, "text").get<std::string>();
                d.sources = field(def, "sources").get<std::vector<std::string>>();
                d.external_resources = field(def, "external_resources").get<std::vector<std::string>>();
                c.definition = std::move(d);
            }
            c.broader = ids_from_json<ConceptId>(field(cj, "broader"));
            c.narrower = ids_from_json<ConceptId>(field(cj, "narrower"));
            c.related = ids_from_json<ConceptId>(field(cj, "related"));
            store.insert_concept(std::move(c));
        }
        for (const auto& mj : field(root, "mappings")) {
            Mapping m;
            m.id = MappingId(field(mj, "id").get<std::string>());
            m.source = ConceptId(field(mj, "source").get<std::string>());
            m.target = ConceptId(field(mj, "target").get<std::string>());
            auto type = parse_match_type(field(mj, "match_type").get<std::string>());
            auto status = parse_mapping_status(field(mj, "status").get<std::string>());
            if (!type || !status) corrupt("bad mapping type or status on " + m.id.str());
            m.match_type = *type;
            m.status = *status;
            m.score = field(mj, "score").get<double>();
            m.rationale = field(mj, "rationale").get<std::string>();
            store.put_mapping(std::move(m));
        }
        for (const auto& rj : field(root, "referentials")) {
            Referential r;
            r.id = ReferentialId(field(rj, "id").get<std::string>());
            r.scheme = SchemeId(field(rj, "scheme").get<std::string>());
            r.root_concept = ConceptId(field(rj, "root_concept").get<std::string>());
            r.biblio_key = field(rj, "biblio_key").get<std::string>();
            r.millesime = field(rj, "millesime").get<int>();
            r.keywords = field(rj, "keywords").get<std::vector<std::string>>();
            r.frozen = field(rj, "frozen").get<bool>();
            for (const auto& [role_name, id] : field(rj, "role_overrides").items()) {
                auto role = parse_role(role_name);
                if (!role) corrupt("unknown role '" + role_name + "'");
                r.role_overrides[*role] = ConceptId(id.get<std::string>());
            }
            store.put_referential(std::move(r));
        }
        for (const auto& dj : field(root, "descriptions")) {
            ArtifactDescription d;
            d.artifact_id = field(dj, "artifact_id").get<std::string>();
            d.forme = ConceptId(field(dj, "forme").get<std::string>());
            d.type = ConceptId(field(dj, "type").get<std::string>());
            d.categorie = ConceptId(field(dj, "categorie").get<std::string>());
            d.chronologie = ConceptId(field(dj, "chronologie").get<std::string>());
            d.referential = ReferentialId(field(dj, "referential").get<std::string>());
            store.put_description(std::move(d));
        }
    } catch (const json::exception& e) {
        corrupt(std::string("store has unexpected structure: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CorruptStore) throw;
        corrupt(std::string("store is inconsistent: ") + e.what());
    }
    return store;
}

}  // namespace pivotheso::store_json
