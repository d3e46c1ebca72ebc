#pragma once

// Native store format: one JSON document with top-level fields
// {format_version, schemes, concepts, mappings, referentials, descriptions}.
// Deleted concepts are kept as {"id": ..., "deleted": true} entries so their
// ids are never reminted. Output is canonical (sorted keys, sorted records).

#include "pivotheso/model.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace pivotheso::store_json {

inline constexpr int format_version = 1;

Store read_store(std::string_view bytes);
std::string write_store(const Store& store);

nlohmann::json concept_to_json(const Concept& c);
nlohmann::json mapping_to_json(const Mapping& m);
nlohmann::json referential_to_json(const Referential& r);
nlohmann::json description_to_json(const ArtifactDescription& d);
nlohmann::json scheme_to_json(const ConceptScheme& s);

}  // namespace pivotheso::store_json
