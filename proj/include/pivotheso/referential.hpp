#pragma once

// Millésimé referentials: registration, role classification of the branch,
// freezing and version-to-version diffs.

#include "pivotheso/model.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pivotheso::referential {

struct RoleCounts {
    std::size_t categories = 0;
    std::size_t formes = 0;
    std::size_t types = 0;
    std::size_t periodisation = 0;

    bool operator==(const RoleCounts&) const = default;
};

struct RegisterRequest {
    SchemeId scheme;
    ConceptId root;
    std::string biblio_key;
    int millesime = 0;
    std::optional<ReferentialId> id;  // derived from biblio_key when absent
    std::vector<std::string> keywords;
    std::map<Role, ConceptId> role_overrides;
};

Referential register_referential(Store& store, const RegisterRequest& request);

// Role classification of a referential branch, computed once and reused.
struct RoleIndex {
    std::set<ConceptId> branch;
    std::map<Role, std::set<ConceptId>> roots;    // conventionally named or overridden branch roots
    std::map<Role, std::set<ConceptId>> members;  // leaves under each role root
    std::set<ConceptId> type_branch;              // every concept under the types roots

    const std::set<ConceptId>& of(Role r) const;
};

RoleIndex classify(const Store& store, const ReferentialId& id);
RoleCounts role_counts(const Store& store, const ReferentialId& id);

void freeze(Store& store, const ReferentialId& id);

struct Redefinition {
    std::string label;
    std::string old_digest;  // empty when the concept has no definition
    std::string new_digest;

    auto operator<=>(const Redefinition&) const = default;
};

struct Move {
    std::string label;
    std::vector<std::string> old_paths;
    std::vector<std::string> new_paths;

    auto operator<=>(const Move&) const = default;
};

// Labels are stripped keys: source suffix and grouping brackets removed,
// then normalized.
struct ReferentialDiff {
    std::set<std::string> added;
    std::set<std::string> removed;
    std::vector<Redefinition> redefined;
    std::vector<Move> moved;

    bool empty() const { return added.empty() && removed.empty() && redefined.empty() && moved.empty(); }
    bool operator==(const ReferentialDiff&) const = default;
};

ReferentialDiff diff_referentials(const Store& store, const ReferentialId& old_id, const ReferentialId& new_id);

std::string render_text(const ReferentialDiff& diff);
std::string render_json(const ReferentialDiff& diff);

}  // namespace pivotheso::referential
