#include "pivotheso/workspace.hpp"

#include "pivotheso/store_json.hpp"
#include "pivotheso/text.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace pivotheso {
namespace fs = std::filesystem;

WorkspaceConfig parse_config(std::string_view text) {
    WorkspaceConfig cfg;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string trimmed = text::trim(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::Io, "config line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = text::trim(trimmed.substr(0, eq));
        const std::string value = text::trim(trimmed.substr(eq + 1));
        if (key == "store_path") {
            cfg.store_path = value;
        } else if (key == "ark_naan") {
            cfg.ark_naan = value;
        } else if (key == "ark_prefix") {
            cfg.ark_prefix = value;
        } else if (key == "default_lang") {
            cfg.default_lang = Label::make("x", value).lang;
        } else if (key == "listen_address") {
            parse_listen_address(value);
            cfg.listen_address = value;
        } else if (key == "seed") {
            auto res = std::from_chars(value.data(), value.data() + value.size(), cfg.seed);
            if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
                throw Error(ErrorCode::Io, "config line " + std::to_string(line_no) + ": seed is not an integer");
            }
        } else {
            throw Error(ErrorCode::Io, "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    if (cfg.store_path.empty()) throw Error(ErrorCode::Io, "store_path is empty");
    return cfg;
}

WorkspaceConfig load_config(const std::optional<fs::path>& file) {
    WorkspaceConfig cfg;
    if (file) {
        cfg = parse_config(read_file(*file));
    } else if (fs::exists(config_file_name)) {
        cfg = parse_config(read_file(fs::path(config_file_name)));
    }
    if (const char* env = std::getenv(std::string(store_env_var).c_str()); env != nullptr && *env != '\0') {
        cfg.store_path = env;
    }
    return cfg;
}

ListenAddress parse_listen_address(std::string_view address) {
    const auto colon = address.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
        throw Error(ErrorCode::Io, "listen address '" + std::string(address) + "' is not host:port");
    }
    ListenAddress out;
    out.host = std::string(address.substr(0, colon));
    const std::string_view port = address.substr(colon + 1);
    auto res = std::from_chars(port.data(), port.data() + port.size(), out.port);
    if (res.ec != std::errc{} || res.ptr != port.data() + port.size() || out.port < 0 || out.port > 65535) {
        throw Error(ErrorCode::Io, "listen address '" + std::string(address) + "' has an invalid port");
    }
    return out;
}

StoreLock::StoreLock(const fs::path& store_path) {
    const std::string lock_path = store_path.string() + ".lock";
    fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(ErrorCode::Io, "cannot open lock file " + lock_path + ": " + std::strerror(errno));
    while (::flock(fd_, LOCK_EX) != 0) {
        if (errno == EINTR) continue;
        const int err = errno;
        ::close(fd_);
        throw Error(ErrorCode::Io, "cannot lock " + lock_path + ": " + std::strerror(err));
    }
}

StoreLock::~StoreLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view bytes) {
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "directory " + dir.string() + " does not exist");
    std::string tmpl = (dir / ("." + path.filename().string() + ".XXXXXX")).string();
    const int fd = ::mkstemp(tmpl.data());
    if (fd < 0) throw Error(ErrorCode::Io, "cannot create temp file in " + dir.string() + ": " + std::strerror(errno));
    auto fail = [&](const std::string& what) {
        const int err = errno;
        ::close(fd);
        ::unlink(tmpl.c_str());
        throw Error(ErrorCode::Io, what + " " + tmpl + ": " + std::strerror(err));
    };
    std::size_t done = 0;
    while (done < bytes.size()) {
        const ssize_t n = ::write(fd, bytes.data() + done, bytes.size() - done);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail("cannot write");
        }
        done += static_cast<std::size_t>(n);
    }
    if (::fchmod(fd, 0644) != 0) fail("cannot chmod");
    if (::fsync(fd) != 0) fail("cannot fsync");
    if (::close(fd) != 0) {
        ::unlink(tmpl.c_str());
        throw Error(ErrorCode::Io, "cannot close " + tmpl);
    }
    if (::rename(tmpl.c_str(), path.c_str()) != 0) {
        const int err = errno;
        ::unlink(tmpl.c_str());
        throw Error(ErrorCode::Io, "cannot rename over " + path.string() + ": " + std::strerror(err));
    }
    const int dfd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
    if (dfd >= 0) {
        ::fsync(dfd);
        ::close(dfd);
    }
}

Store load_store(const WorkspaceConfig& config) {
    Store store;
    if (fs::exists(config.store_path)) store = store_json::read_store(read_file(config.store_path));
    store.set_minter(ArkMinter(config.ark_naan, config.ark_prefix, config.seed));
    return store;
}

void save_store(const Store& store, const fs::path& path) { write_file_atomic(path, store_json::write_store(store)); }

ImportSummary import_turtle(Store& store, std::string_view turtle, Profile profile) {
    const skos::SkosDocument doc = skos::parse_turtle(turtle);
    const Store graph = skos::to_graph(doc, {profile});
    skos::merge_graph(store, graph);
    return {graph.schemes().size(), graph.concepts().size(), graph.mappings().size(), doc.warnings};
}

SchemeId resolve_scheme(const Store& store, std::string_view ref) {
    const std::string r = text::trim(ref);
    if (store.find_scheme(SchemeId(r)) != nullptr) return SchemeId(r);
    if (auto pos = r.find("ark:/"); pos != std::string::npos && store.find_scheme(SchemeId(r.substr(pos)))) {
        return SchemeId(r.substr(pos));
    }
    const std::string norm = text::normalize_label(r);
    for (const auto& [id, s] : store.schemes()) {
        if (text::normalize_label(s.title) == norm) return id;
    }
    const auto wanted = text::content_tokens(r);
    std::vector<SchemeId> hits;
    if (!wanted.empty()) {
        for (const auto& [id, s] : store.schemes()) {
            const auto have = text::content_tokens(s.title);
            if (std::includes(have.begin(), have.end(), wanted.begin(), wanted.end())) hits.push_back(id);
        }
    }
    if (hits.size() == 1) return hits.front();
    throw Error(ErrorCode::UnknownScheme,
                hits.empty() ? "no scheme '" + r + "'" : "scheme reference '" + r + "' is ambiguous");
}

ConceptId resolve_concept(const Store& store, std::string_view ref) {
    std::string r = text::trim(ref);
    if (auto pos = r.find("ark:/"); pos != std::string::npos) r = r.substr(pos);
    ConceptId id(r);
    if (store.find(id) == nullptr) {
        throw Error(ErrorCode::UnknownConcept,
                    store.is_deleted(id) ? "concept " + r + " was deleted" : "no concept " + r);
    }
    return id;
}

}  // namespace pivotheso
