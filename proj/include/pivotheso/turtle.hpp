#pragma once

// SKOS-in-Turtle import/export.
//
// Supported Turtle subset: @prefix / PREFIX directives, IRIs, prefixed names,
// plain and language-tagged string literals with escapes, the `a` keyword,
// `;` and `,` lists, and comments. Blank nodes, collections, typed and
// numeric literals are rejected with a SyntaxError.

#include "pivotheso/model.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pivotheso::skos {

namespace ns {
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view skos = "http://www.w3.org/2004/02/skos/core#";
inline constexpr std::string_view dcterms = "http://purl.org/dc/terms/";
}  // namespace ns

struct Term {
    enum class Kind { Iri, Literal };
    Kind kind = Kind::Iri;
    std::string value;
    std::string lang;  // literals only; empty for plain literals

    bool is_iri() const { return kind == Kind::Iri; }
    auto operator<=>(const Term&) const = default;
};

struct Triple {
    std::string subject;    // absolute IRI
    std::string predicate;  // absolute IRI
    Term object;

    auto operator<=>(const Triple&) const = default;
};

struct ParseWarning {
    std::size_t line = 0;
    std::size_t column = 0;
    std::string message;
};

struct SkosDocument {
    std::map<std::string, std::string> prefixes;
    std::vector<Triple> triples;  // recognized predicates only, duplicates collapsed
    std::vector<ParseWarning> warnings;
};

// Throws SyntaxError on malformed input; never crashes on arbitrary bytes.
SkosDocument parse_turtle(std::string_view text);

struct ImportOptions {
    Profile profile = Profile::Documentary;
};

// Builds a store from a parsed document. Hierarchical and associative
// relations are symmetrized; match predicates become Accepted mappings.
// Throws GraphError on dangling relations, cycles or duplicate pref labels.
Store to_graph(const SkosDocument& doc, const ImportOptions& options = {});

// Canonical Turtle: fixed prefix header, schemes then concepts sorted by id,
// predicates in a fixed order. skos:inScheme is only written when the store
// holds more than one scheme. Only Accepted mappings are exported.
std::string serialize_turtle(const Store& store);

// One scheme, its concepts, and every Accepted mapping touching them.
Store project_scheme(const Store& store, const SchemeId& scheme);

// Adds the schemes, concepts and mappings of `src` to `dst`; mapping ids are
// renumbered and exact duplicates skipped. Throws DuplicateId on collisions.
void merge_graph(Store& dst, const Store& src);

}  // namespace pivotheso::skos
