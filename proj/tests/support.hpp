#pragma once

#include "pivotheso/model.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace testsupport {

using namespace pivotheso;

inline const ConceptId assiette_id{"ark:/39676/bib25gwqwnprh"};
inline const ConceptId a15_id{"ark:/39676/bibxtjgnrpk5"};
inline const ConceptId pgfinlf_id{"ark:/39676/bibrbqbp0019d"};
inline const ConceptId etape1_id{"ark:/39676/bib2q5s0bw54c"};
inline const ConceptId referential_root_id{"ark:/39676/bibd9q291x45d"};
inline const ConceptId campa_id{"ark:/39676/bibnnnmy0me0h"};

std::filesystem::path fixture_path(std::string_view name);
std::string fixture_text(std::string_view name);

// Empty store with the given fixtures imported in order.
Store load_fixtures(const std::vector<std::string>& names, Profile profile = Profile::Research);

SchemeId scheme_titled(const Store& store, std::string_view title);
ConceptId by_label(const Store& store, std::string_view pref_label);

// Registers the Bibracte referential as "bl2021".
ReferentialId register_bibracte(Store& store);

// Random scheme of n concepts: a forest (parents always have a lower index),
// associative links between hierarchically unrelated concepts, alt labels and
// definitions drawn from a pool that includes accents, quotes and escapes.
Store random_graph(std::mt19937_64& rng, std::size_t n);

// Applies `steps` random edits through the public Store API, swallowing the
// domain errors it is expected to raise.
void random_edits(Store& store, std::mt19937_64& rng, std::size_t steps);

struct SyntheticInventory {
    std::string csv;
    std::vector<std::string> expected_stored;
    std::vector<std::pair<std::size_t, ErrorCode>> expected_rejects;  // (row, code)
};

// Inventory rows mixing valid descriptions with every failure mode; the
// expected outcome of each row is recomputed by direct graph traversal from
// the role branch roots, without the descriptor module.
SyntheticInventory synthetic_inventory(const Store& store, std::mt19937_64& rng, std::size_t rows);

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args);

}  // namespace testsupport
