#include "geosir/service.hpp"

#include <cmath>

#include "httplib.h"

#include "geosir/error.hpp"
#include "geosir/query.hpp"
#include "geosir/strings.hpp"

namespace geosir {

using nlohmann::ordered_json;

namespace {

Reply error_reply(int status, std::string_view error, std::string_view detail) {
  ordered_json body{{"error", error}, {"detail", detail}};
  return {status, kJsonMime, body.dump() + "\n"};
}

Reply json_reply(const ordered_json& body) { return {200, kJsonMime, body.dump() + "\n"}; }

std::optional<PlaceId> parse_place_id(std::string_view s) {
  auto v = parse_int(s);
  if (!v) return std::nullopt;
  return static_cast<PlaceId>(*v);
}

}  // namespace

double round_score(double x) {
  const double r = std::round(x * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;
}

ordered_json search_response(const EngineSnapshot& snap, const EngineConfig& cfg, std::string_view query,
                             std::optional<std::size_t> limit) {
  EngineConfig run = cfg;
  if (limit) run.rank.top_k = *limit;
  const QueryAst ast = parse_query(query);
  const SearchOutcome out = execute(ast, snap.corpus, snap.gazetteer, snap.lexicon, run);

  ordered_json results = ordered_json::array();
  for (const auto& r : out.results) {
    ordered_json places = ordered_json::array();
    for (PlaceId id : r.places) places.push_back(entity_iri(id));
    const Document* d = snap.corpus.doc(r.doc_id);
    results.push_back({{"doc_id", r.doc_id},
                       {"uri", d ? d->uri : ""},
                       {"combined", round_score(r.combined)},
                       {"text_score", round_score(r.text_score)},
                       {"spatial_score", round_score(r.spatial_score)},
                       {"places", places}});
  }
  ordered_json body;
  body["query"] = std::string(query);
  body["parsed"] = to_string(ast);
  body["total"] = out.total_candidates;
  body["results"] = results;
  return body;
}

ordered_json place_json(const GazetteerEntry& e) {
  ordered_json j;
  j["id"] = e.id;
  j["iri"] = entity_iri(e.id);
  j["name"] = e.name;
  j["alt_names"] = e.alt_names;
  j["lat"] = e.location.lat;
  j["lon"] = e.location.lon;
  j["feature_class"] = std::string(1, e.feature_class);
  j["feature_code"] = e.feature_code;
  j["parent"] = e.parent_id ? ordered_json(entity_iri(*e.parent_id)) : ordered_json(nullptr);
  j["population"] = e.population;
  j["elevation_m"] = e.elevation_m ? ordered_json(*e.elevation_m) : ordered_json(nullptr);
  return j;
}

ordered_json route_json(const Route& r) {
  ordered_json nodes = ordered_json::array();
  for (PlaceId id : r.nodes) nodes.push_back(id);
  return {{"nodes", nodes}, {"total_km", round_score(r.total_km)}};
}

Reply handle_search(const EngineSnapshot& snap, const EngineConfig& cfg, const std::optional<std::string>& q,
                    const std::optional<std::string>& limit) {
  if (!q || trim(*q).empty()) return error_reply(400, "EmptyQuery", "missing query parameter q");
  std::optional<std::size_t> n;
  if (limit) {
    auto v = parse_int(*limit);
    if (!v || *v < 1) return error_reply(400, "InvalidArgument", "limit must be a positive integer");
    n = static_cast<std::size_t>(*v);
  }
  try {
    return json_reply(search_response(snap, cfg, *q, n));
  } catch (const SyntaxError& e) {
    return error_reply(400, e.kind(), e.what());
  } catch (const EmptyQuery& e) {
    return error_reply(400, e.kind(), e.what());
  } catch (const UnknownPlace& e) {
    return error_reply(404, e.kind(), e.what());
  } catch (const InvalidArgument& e) {
    return error_reply(400, e.kind(), e.what());
  }
}

Reply handle_place(const EngineSnapshot& snap, std::string_view id, std::string_view accept) {
  const auto pid = parse_place_id(id);
  if (!pid) return error_reply(400, "InvalidArgument", "place id must be an integer");
  const GazetteerEntry* e = snap.gazetteer.find(*pid);
  if (e == nullptr) return error_reply(404, "UnknownId", "no place with id " + std::string(id));
  if (accept.find(kNTriplesMime) != std::string_view::npos) {
    return {200, kNTriplesMime, to_ntriples(snap.gazetteer.export_rdf(*pid))};
  }
  return json_reply(place_json(*e));
}

Reply handle_route(const EngineSnapshot& snap, const std::optional<std::string>& from,
                   const std::optional<std::string>& to) {
  if (!from || !to) return error_reply(400, "InvalidArgument", "from and to are required");
  const auto a = parse_place_id(*from);
  const auto b = parse_place_id(*to);
  if (!a || !b) return error_reply(400, "InvalidArgument", "from and to must be integer place ids");
  if (!snap.network) return error_reply(404, "NotFound", "snapshot has no path network");
  try {
    return json_reply(route_json(shortest_path(*snap.network, *a, *b)));
  } catch (const UnknownNode& e) {
    return error_reply(404, e.kind(), e.what());
  } catch (const NoPath& e) {
    return error_reply(404, e.kind(), e.what());
  }
}

std::unique_ptr<httplib::Server> make_server(const EngineSnapshot& snap, const EngineConfig& cfg) {
  auto server = std::make_unique<httplib::Server>();
  auto param = [](const httplib::Request& req, const char* key) -> std::optional<std::string> {
    if (!req.has_param(key)) return std::nullopt;
    return req.get_param_value(key);
  };
  auto send = [](httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };

  server->Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });
  server->Get("/search", [&snap, &cfg, param, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_search(snap, cfg, param(req, "q"), param(req, "limit")));
  });
  server->Get(R"(/place/([^/]+))", [&snap, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_place(snap, req.matches[1].str(), req.get_header_value("Accept")));
  });
  server->Get("/route", [&snap, param, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_route(snap, param(req, "from"), param(req, "to")));
  });
  server->set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string detail = "internal error";
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      detail = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(ordered_json{{"error", "Internal"}, {"detail", detail}}.dump() + "\n", kJsonMime);
  });
  server->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    res.set_content(ordered_json{{"error", "NotFound"}, {"detail", "no such endpoint"}}.dump() + "\n",
                    kJsonMime);
  });
  return server;
}

}  // namespace geosir
