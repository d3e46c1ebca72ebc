#pragma once

// JSON renderings shared by the HTTP API and the CLI's --json output.

#include "pivotheso/aligner.hpp"
#include "pivotheso/model.hpp"
#include "pivotheso/validator.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace pivotheso::views {

using nlohmann::json;

// Native record plus label, is_grouping, paths and neighbor labels.
json concept_view(const Store& store, const ConceptId& id);

// depth counts levels below each root; -1 means unbounded.
json tree_view(const Store& store, const SchemeId& scheme, const std::optional<ConceptId>& root, int depth);

json diagnostic_json(const Diagnostic& d);
json diagnostics_json(const std::vector<Diagnostic>& diagnostics);

json suggestion_view(const Store& store, const aligner::SuggestionCandidate& c, const MappingId& id);
json mapping_view(const Store& store, const Mapping& m);
json referential_view(const Store& store, const ReferentialId& id);
json scheme_view(const Store& store, const ConceptScheme& s);

}  // namespace pivotheso::views
