#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "geosir/snapshot.hpp"

namespace httplib {
class Server;
}

namespace geosir {

inline constexpr const char* kNTriplesMime = "application/n-triples";
inline constexpr const char* kJsonMime = "application/json";

// Scores are rounded to this many decimals in responses.
inline constexpr int kScoreDecimals = 6;
double round_score(double x);

// SearchResponse body. Shared by the CLI and the HTTP service.
nlohmann::ordered_json search_response(const EngineSnapshot& snap, const EngineConfig& cfg,
                                       std::string_view query, std::optional<std::size_t> limit = {});

nlohmann::ordered_json place_json(const GazetteerEntry& e);
nlohmann::ordered_json route_json(const Route& r);

struct Reply {
  int status = 200;
  std::string content_type = kJsonMime;
  std::string body;
};

// Request handlers, independent of the HTTP library. Malformed input maps
// to 400/404 with a {error, detail} body.
Reply handle_search(const EngineSnapshot& snap, const EngineConfig& cfg, const std::optional<std::string>& q,
                    const std::optional<std::string>& limit);
Reply handle_place(const EngineSnapshot& snap, std::string_view id, std::string_view accept);
Reply handle_route(const EngineSnapshot& snap, const std::optional<std::string>& from,
                   const std::optional<std::string>& to);

// Routes bound to `snap` and `cfg`, which must outlive the server.
std::unique_ptr<httplib::Server> make_server(const EngineSnapshot& snap, const EngineConfig& cfg);

}  // namespace geosir
