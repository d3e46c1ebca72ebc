#pragma once

// Composite artifact descriptions (forme, type, catégorie, chronologie,
// référentiel), their expansion, the combination ceiling and CSV ingestion.

#include "pivotheso/model.hpp"
#include "pivotheso/referential.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pivotheso::descriptor {

struct DescriptionInput {
    std::string artifact_id;
    ConceptId forme;
    ConceptId type;
    ConceptId categorie;
    ConceptId chronologie;
    ReferentialId referential;
};

// Throws NotInReferential, FormTypeMismatch or IncompatibleTypeCategory.
void check_description(const Store& store, const referential::RoleIndex& index, const DescriptionInput& in);

// Resolves an inventory cell holding an ark or a label among the members of
// `role`; labels are matched on stripped keys, pref labels before alt labels.
ConceptId resolve_cell(const Store& store, const referential::RoleIndex& index, Role role, std::string_view cell);

// Validates, then stores (replacing any description with the same artifact id).
ArtifactDescription compose_description(Store& store, const DescriptionInput& in);

struct ExpandedConcept {
    std::string role;  // forme, type, categorie, chronologie, referentiel
    ConceptId ark;
    std::string pref_label;
    std::optional<Definition> definition;
    std::vector<std::string> paths;
};

struct ExpandedDescription {
    std::string artifact_id;
    ReferentialId referential;
    std::string biblio_key;
    int millesime = 0;
    std::vector<ExpandedConcept> concepts;
};

ExpandedDescription expand_description(const Store& store, const ArtifactDescription& d);
std::string to_json(const ExpandedDescription& e);

struct CombinationCeiling {
    std::size_t n_categories = 0;
    std::size_t n_types = 0;
    std::size_t n_formes = 0;
    std::size_t ceiling = 0;
    // (type, catégorie) pairs actually linked by an associative relation.
    std::size_t realized = 0;
};

CombinationCeiling combination_ceiling(const Store& store, const ReferentialId& id);

struct Reject {
    std::size_t row = 0;  // 1-based data row
    ErrorCode code = ErrorCode::MalformedRow;
    std::string detail;

    bool operator==(const Reject&) const = default;
};

struct IngestReport {
    std::vector<std::string> stored;  // artifact ids, file order
    std::vector<Reject> rejects;
};

// Concept cells hold an ark or a label; labels resolve within the role's
// branch of the referential, pref labels before alt labels.
IngestReport ingest_inventory(Store& store, std::string_view csv_text, const ReferentialId& id);

// row,error_code,detail
std::string rejects_csv(const IngestReport& report);

}  // namespace pivotheso::descriptor
