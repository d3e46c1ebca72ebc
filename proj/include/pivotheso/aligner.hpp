#pragma once

// Cross-scheme alignment: mappings with SKOS match types, inverse-link
// materialization, mapping checks (M1-M4), label-based candidate
// suggestion, grouping-term creation and the curator decision step.

#include "pivotheso/model.hpp"
#include "pivotheso/validator.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pivotheso::aligner {

inline constexpr double default_min_score = 0.5;
// Definition-token Jaccard required before Tier 1/2 recommends exactMatch.
inline constexpr double exactness_threshold = 0.6;
inline constexpr double stripped_tier_score = 0.95;

enum class Tier { ExactNormalized = 1, ExactStripped = 2, TokenOverlap = 3 };

std::string_view to_string(Tier t);

struct SuggestionCandidate {
    ConceptId source;
    ConceptId target;
    Tier tier = Tier::TokenOverlap;
    double score = 0.0;
    MatchType recommended = MatchType::Broad;
    // Best label-pair token Jaccard as a fraction (Tier 3 only).
    std::size_t overlap = 0;
    std::size_t union_size = 0;
    double definition_jaccard = 0.0;

    bool operator==(const SuggestionCandidate&) const = default;
};

// |a ∩ b| and |a ∪ b| of two sorted, deduplicated token lists.
std::pair<std::size_t, std::size_t> jaccard_counts(const std::vector<std::string>& a,
                                                   const std::vector<std::string>& b);
double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

// True when c or one of its ancestors is a periodisation branch.
bool is_chronology(const Store& store, const ConceptId& c);

// Stores an Accepted mapping and its inverse (broad <-> narrow, the other
// types mirror themselves). Returns {forward, inverse}.
std::pair<Mapping, Mapping> add_mapping(Store& store, const ConceptId& source, const ConceptId& target,
                                        MatchType type);

std::vector<Diagnostic> check_mappings(const Store& store);

std::vector<SuggestionCandidate> suggest_mappings(const Store& store, const SchemeId& source_scheme,
                                                  const SchemeId& target_scheme,
                                                  double min_score = default_min_score);

// Persists candidates as Suggested mappings, reusing the id of an existing
// Suggested mapping for the same (source, target). Returns one id per candidate.
std::vector<MappingId> record_suggestions(Store& store, const std::vector<SuggestionCandidate>& candidates);

// source_ark,source_label,target_ark,target_label,tier,score,recommended_type
std::string suggestions_csv(const Store& store, const std::vector<SuggestionCandidate>& candidates);

ConceptId create_grouping_concept(Store& store, const SchemeId& scheme, std::string_view label_core,
                                  const std::vector<ConceptId>& members,
                                  const std::optional<ConceptId>& parent = std::nullopt);

enum class Decision { Accept, Reject };

Mapping decide(Store& store, const MappingId& id, Decision decision,
               std::optional<MatchType> override_type = std::nullopt);

std::string format_score(double score);

}  // namespace pivotheso::aligner
