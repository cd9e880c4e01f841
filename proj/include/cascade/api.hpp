#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "cascade/store.hpp"

namespace cascade {

struct ApiResponse {
    int status = 200;
    std::string body;
};

//! The local HTTP interface. handle() holds all routing and is safe to call
//! concurrently; serve() binds it to a socket.
//!
//! Error bodies are {"error": {"code", "message", "detail"?}} with code one
//! of bad-request (400), not-found (404), infeasible (422), storage (500).
class ApiService {
public:
    explicit ApiService(ModelStore& store) : store_(store) {}

    ApiResponse handle(const std::string& method, const std::string& path, const std::string& body) const;

    //! Blocks serving on host:port. Port 0 picks a free port. `on_bound`
    //! receives the bound port and a callable that stops the server.
    void serve(const std::string& host, int port, const std::optional<std::filesystem::path>& ui_dir = std::nullopt,
               const std::function<void(int, std::function<void()>)>& on_bound = {}) const;

private:
    Json route(const std::string& method, const std::string& path, const Json& request, int& status) const;

    ModelStore& store_;
};

inline constexpr const char* kDocumentContentType = "application/json";

}  // namespace cascade
