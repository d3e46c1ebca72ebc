#pragma once

// JSON-over-HTTP API. Service routes requests against an in-memory store and
// persists every successful write; HttpServer binds it to a socket.

#include "pivotheso/model.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

namespace pivotheso {

struct Response {
    int status = 200;
    std::string body;  // JSON
};

class Service {
public:
    // persist_path empty: writes stay in memory.
    explicit Service(Store store, std::optional<std::filesystem::path> persist_path = std::nullopt);

    Response handle(std::string_view method, std::string_view path,
                    const std::map<std::string, std::string>& query, std::string_view body);

    Store snapshot() const;

    static constexpr std::size_t default_page_limit = 200;

private:
    Response dispatch(std::string_view method, std::string_view path, const std::map<std::string, std::string>& query,
                      std::string_view body);

    mutable std::shared_mutex mu_;
    Store store_;
    std::optional<std::filesystem::path> persist_path_;
};

int http_status_for(ErrorCode code);

class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // port 0 picks a free port; returns the bound port.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace pivotheso
