#pragma once

// In-memory concept graph: schemes, concepts with labels, definitions and
// hierarchical/associative relations, plus the records owned by the
// aligner, referential and descriptor modules.
//
// A Store is a value: copying it yields an independent snapshot that is safe
// to read concurrently. Mutations follow a single-writer contract; callers
// sharing a store across threads serialize writes (see Service).

#include "pivotheso/ark.hpp"
#include "pivotheso/errors.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace pivotheso {

template <class Tag>
class Id {
public:
    Id() = default;
    explicit Id(std::string value) : value_(std::move(value)) {}

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    auto operator<=>(const Id&) const = default;
    bool operator==(const Id&) const = default;

private:
    std::string value_;
};

using ConceptId = Id<struct ConceptTag>;
using SchemeId = Id<struct SchemeTag>;
using MappingId = Id<struct MappingTag>;
using ReferentialId = Id<struct ReferentialTag>;

inline constexpr std::string_view default_lang = "fr";

struct Label {
    std::string text;
    std::string lang;

    // Trims the text and lowercases the language tag; throws InvalidLabel on
    // empty text or a tag that is not two ASCII letters.
    static Label make(std::string_view text, std::string_view lang = default_lang);

    auto operator<=>(const Label&) const = default;
};

struct Definition {
    std::string text;
    std::vector<std::string> sources;
    std::vector<std::string> external_resources;

    bool operator==(const Definition&) const = default;
};

enum class Profile { Documentary, Research };

std::string_view to_string(Profile p);
Profile parse_profile(std::string_view s);

struct Concept {
    ConceptId id;
    SchemeId scheme;
    std::map<std::string, Label> pref_labels;  // keyed by lang
    std::vector<Label> alt_labels;
    std::optional<Definition> definition;
    std::set<ConceptId> broader;
    std::set<ConceptId> narrower;
    std::set<ConceptId> related;

    // Preferred label in `lang`, falling back to the first language present.
    const std::string& label(std::string_view lang = default_lang) const;
    bool is_grouping() const;

    bool operator==(const Concept&) const = default;
};

struct ConceptScheme {
    SchemeId id;
    std::string title;
    Profile profile = Profile::Documentary;
    std::set<ConceptId> top_concepts;
    std::string resolver_base;  // e.g. "https://ark.mom.fr/", empty if none

    bool operator==(const ConceptScheme&) const = default;
};

enum class MatchType { Exact, Close, Broad, Narrow, Related };
enum class MappingStatus { Suggested, Accepted, Rejected };

std::string_view to_string(MatchType t);
std::optional<MatchType> parse_match_type(std::string_view s);
MatchType inverse(MatchType t);
std::string_view to_string(MappingStatus s);
std::optional<MappingStatus> parse_mapping_status(std::string_view s);

// Directed cross-scheme link. Broad(source -> target) reads "target is
// broader than source".
struct Mapping {
    MappingId id;
    ConceptId source;
    ConceptId target;
    MatchType match_type = MatchType::Exact;
    MappingStatus status = MappingStatus::Suggested;
    double score = 1.0;
    std::string rationale;

    bool operator==(const Mapping&) const = default;
};

enum class Role { Categorie, Forme, Type, Periodisation };

std::string_view to_string(Role r);
std::optional<Role> parse_role(std::string_view s);

struct Referential {
    ReferentialId id;
    SchemeId scheme;
    ConceptId root_concept;
    std::string biblio_key;
    int millesime = 0;
    std::vector<std::string> keywords;
    bool frozen = false;
    std::map<Role, ConceptId> role_overrides;  // explicit branch root per role

    bool operator==(const Referential&) const = default;
};

struct ArtifactDescription {
    std::string artifact_id;
    ConceptId forme;
    ConceptId type;
    ConceptId categorie;
    ConceptId chronologie;
    ReferentialId referential;

    bool operator==(const ArtifactDescription&) const = default;
};

class Store {
public:
    Store() = default;
    explicit Store(ArkMinter minter) : minter_(std::move(minter)) {}

    // --- schemes ---
    ConceptScheme& add_scheme(const SchemeId& id, std::string title, Profile profile);
    const ConceptScheme& scheme(const SchemeId& id) const;
    ConceptScheme& scheme_mut(const SchemeId& id);
    const ConceptScheme* find_scheme(const SchemeId& id) const;
    const std::map<SchemeId, ConceptScheme>& schemes() const { return schemes_; }
    void set_top_concept(const SchemeId& scheme, const ConceptId& c, bool top);

    // --- concepts ---
    ConceptId add_concept(const SchemeId& scheme, Label pref_label,
                          std::optional<Definition> definition = std::nullopt);
    // Raw insertion used by loaders; checks only id freshness and scheme.
    void insert_concept(Concept c);
    void add_alt_label(const ConceptId& c, Label label);
    void set_definition(const ConceptId& c, std::optional<Definition> definition);
    void add_hierarchical_relation(const ConceptId& parent, const ConceptId& child);
    void remove_hierarchical_relation(const ConceptId& parent, const ConceptId& child);
    void add_associative_relation(const ConceptId& a, const ConceptId& b);
    void remove_associative_relation(const ConceptId& a, const ConceptId& b);
    // Tombstones the id (never reminted) and drops every relation to it.
    void remove_concept(const ConceptId& c);

    const Concept& concept_at(const ConceptId& id) const;
    const Concept* find(const ConceptId& id) const;
    bool is_deleted(const ConceptId& id) const { return tombstones_.contains(id); }
    const std::map<ConceptId, Concept>& concepts() const { return concepts_; }
    const std::set<ConceptId>& tombstones() const { return tombstones_; }
    void add_tombstone(const ConceptId& id);
    std::vector<ConceptId> concepts_in(const SchemeId& scheme) const;

    // Concept whose normalized pref label in `lang` equals that of `text`.
    std::optional<ConceptId> find_by_pref_label(const SchemeId& scheme, std::string_view text,
                                                std::string_view lang = default_lang) const;

    std::set<ConceptId> ancestors(const ConceptId& c) const;    // transitive broader
    std::set<ConceptId> descendants(const ConceptId& c) const;  // transitive narrower

    // Every broader chain from c to a top concept, root first, labels joined
    // by " > ", sorted and deduplicated.
    std::vector<std::string> paths_to_top(const ConceptId& c) const;
    std::vector<std::vector<ConceptId>> id_paths_to_top(const ConceptId& c) const;

    // --- mappings ---
    const std::map<MappingId, Mapping>& mappings() const { return mappings_; }
    const Mapping& mapping(const MappingId& id) const;
    Mapping& mapping_mut(const MappingId& id);
    MappingId next_mapping_id() const;
    void put_mapping(Mapping m);

    // --- referentials ---
    const std::map<ReferentialId, Referential>& referentials() const { return referentials_; }
    const Referential& referential(const ReferentialId& id) const;
    Referential& referential_mut(const ReferentialId& id);
    void put_referential(Referential r);
    // Root, its narrower closure, and the narrower closure of every concept
    // associatively linked to the root.
    std::set<ConceptId> branch_members(const ReferentialId& id) const;

    // --- descriptions ---
    const std::map<std::string, ArtifactDescription>& descriptions() const { return descriptions_; }
    const ArtifactDescription* find_description(const std::string& artifact_id) const;
    void put_description(ArtifactDescription d);

    const ArkMinter& minter() const { return minter_; }
    void set_minter(ArkMinter m) { minter_ = std::move(m); mint_cursor_ = 0; }

    bool operator==(const Store& other) const;

private:
    Concept& concept_mut(const ConceptId& id);
    void check_not_frozen(const ConceptId& c) const;
    void check_unique_pref(const Concept& c, const Label& label) const;
    bool id_in_use(const std::string& id) const;
    void index_pref_labels(const Concept& c, bool add);

    std::map<SchemeId, ConceptScheme> schemes_;
    std::map<ConceptId, Concept> concepts_;
    std::set<ConceptId> tombstones_;
    std::map<MappingId, Mapping> mappings_;
    std::map<ReferentialId, Referential> referentials_;
    std::map<std::string, ArtifactDescription> descriptions_;
    ArkMinter minter_;
    std::uint64_t mint_cursor_ = 0;
    // (scheme, lang, normalized pref label) -> concepts carrying it
    std::map<std::tuple<SchemeId, std::string, std::string>, std::set<ConceptId>> pref_index_;
};

}  // namespace pivotheso
