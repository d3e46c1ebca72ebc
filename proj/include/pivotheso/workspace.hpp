#pragma once

// File-backed workspace: key=value config, the single native store file,
// an advisory lock for writers, atomic saves, and lookup of user-supplied
// scheme and concept references.

#include "pivotheso/model.hpp"
#include "pivotheso/turtle.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace pivotheso {

struct WorkspaceConfig {
    std::filesystem::path store_path = "pivotheso.json";
    std::string ark_naan = "99999";
    std::string ark_prefix = "pvt";
    std::string default_lang = "fr";
    std::string listen_address = "127.0.0.1:8080";
    std::uint64_t seed = 0;
};

inline constexpr std::string_view config_file_name = "pivotheso.conf";
inline constexpr std::string_view store_env_var = "PIVOTHESO_STORE";

// Lines are key=value; '#' starts a comment. Unknown keys are rejected.
WorkspaceConfig parse_config(std::string_view text);

// Reads `file` (or pivotheso.conf in the working directory when present),
// then applies the PIVOTHESO_STORE override.
WorkspaceConfig load_config(const std::optional<std::filesystem::path>& file);

struct ListenAddress {
    std::string host;
    int port = 0;
};
ListenAddress parse_listen_address(std::string_view address);

// Exclusive flock on "<store>.lock", released on destruction.
class StoreLock {
public:
    explicit StoreLock(const std::filesystem::path& store_path);
    ~StoreLock();
    StoreLock(const StoreLock&) = delete;
    StoreLock& operator=(const StoreLock&) = delete;

private:
    int fd_ = -1;
};

// Missing file -> empty store. The minter always comes from the config.
Store load_store(const WorkspaceConfig& config);

// Write to a temp file in the same directory, fsync, rename over the target.
void save_store(const Store& store, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

struct ImportSummary {
    std::size_t schemes = 0;
    std::size_t concepts = 0;
    std::size_t mappings = 0;
    std::vector<skos::ParseWarning> warnings;
};

// Parses Turtle and merges the resulting graph into `store`.
ImportSummary import_turtle(Store& store, std::string_view turtle, Profile profile);

// Exact id, else normalized title, else the single scheme whose title
// tokens include every token of `ref`.
SchemeId resolve_scheme(const Store& store, std::string_view ref);

// Bare ark or any URL containing "ark:/".
ConceptId resolve_concept(const Store& store, std::string_view ref);

}  // namespace pivotheso
