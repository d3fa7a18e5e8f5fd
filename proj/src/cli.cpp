#include "geosir/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <optional>

#include "CLI11.hpp"
#include "httplib.h"

#include "geosir/error.hpp"
#include "geosir/service.hpp"
#include "geosir/snapshot.hpp"
#include "geosir/strings.hpp"

namespace geosir {

namespace {

struct Options {
  std::string config;
  std::optional<double> alpha;
  std::optional<std::size_t> top_k;
  bool json = false;

  std::string gazetteer, corpus, lexicon, network, out_dir;
  std::string snapshot;
  std::string query;
  PlaceId from = 0, to = 0, place = 0;
  std::string host = "127.0.0.1";
  int port = 8080;
};

EngineConfig engine_config(const Options& o) {
  EngineConfig cfg = o.config.empty() ? EngineConfig{} : load_config(o.config);
  if (o.alpha) cfg.rank.alpha = *o.alpha;
  if (o.top_k) cfg.rank.top_k = *o.top_k;
  validate(cfg);
  return cfg;
}

int cmd_build(const Options& o, std::ostream& out) {
  BuildInputs in{o.gazetteer, o.corpus, std::nullopt, std::nullopt};
  if (!o.lexicon.empty()) in.lexicon = o.lexicon;
  if (!o.network.empty()) in.network = o.network;
  const BuildReport r = build_snapshot(in, o.out_dir);
  if (o.json) {
    nlohmann::ordered_json j{{"entries", r.entries}, {"docs", r.docs},         {"mentions", r.mentions},
                             {"triples", r.triples}, {"concepts", r.concepts}, {"network_edges", r.network_edges}};
    out << j.dump(2) << '\n';
  } else {
    out << "entries: " << r.entries << "\ndocs: " << r.docs << "\nmentions: " << r.mentions
        << "\ntriples: " << r.triples << "\nconcepts: " << r.concepts << "\nnetwork_edges: " << r.network_edges
        << '\n';
  }
  return kExitOk;
}

int cmd_search(const Options& o, std::ostream& out) {
  const EngineConfig cfg = engine_config(o);
  const EngineSnapshot snap = load_snapshot(o.snapshot);
  const auto body = search_response(snap, cfg, o.query);
  if (o.json) {
    out << body.dump(2) << '\n';
    return kExitOk;
  }
  out << body["results"].size() << " of " << body["total"].get<std::size_t>() << " matching documents\n";
  if (body["results"].empty()) return kExitOk;
  out << std::left << std::setw(5) << "rank" << std::setw(10) << "combined" << std::setw(10) << "text"
      << std::setw(10) << "spatial" << std::setw(12) << "doc_id"
      << "uri\n";
  std::size_t rank = 0;
  for (const auto& r : body["results"]) {
    out << std::left << std::setw(5) << ++rank << std::setw(10) << format_fixed(r["combined"], 6)
        << std::setw(10) << format_fixed(r["text_score"], 6) << std::setw(10)
        << format_fixed(r["spatial_score"], 6) << std::setw(12) << r["doc_id"].get<std::string>()
        << r["uri"].get<std::string>() << '\n';
  }
  return kExitOk;
}

int cmd_route(const Options& o, std::ostream& out) {
  const EngineSnapshot snap = load_snapshot(o.snapshot);
  if (!snap.network) throw IoError(o.snapshot + ": snapshot has no path network");
  const Route r = shortest_path(*snap.network, o.from, o.to);
  if (o.json) {
    out << route_json(r).dump(2) << '\n';
    return kExitOk;
  }
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const auto* e = snap.gazetteer.find(r.nodes[i]);
    out << (i ? " -> " : "") << r.nodes[i];
    if (e) out << " (" << e->name << ")";
  }
  out << "\ntotal: " << format_fixed(r.total_km, 3) << " km\n";
  return kExitOk;
}

int cmd_export(const Options& o, std::ostream& out) {
  const EngineSnapshot snap = load_snapshot(o.snapshot);
  if (!snap.gazetteer.find(o.place)) throw UnknownPlace("no place with id " + std::to_string(o.place));
  out << to_ntriples(snap.gazetteer.export_rdf(o.place));
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& err) {
  const EngineConfig cfg = engine_config(o);
  const EngineSnapshot snap = load_snapshot(o.snapshot);
  auto server = make_server(snap, cfg);
  err << "listening on " << o.host << ':' << o.port << std::endl;
  if (!server->listen(o.host, o.port)) throw IoError("cannot bind " + o.host + ":" + std::to_string(o.port));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Geographic semantic information retrieval engine", "geosir"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config, "JSON config (alpha, top_k, default_radius_km, footprint_pad_deg)");
  app.add_option("--alpha", o.alpha, "Text weight in [0, 1]");
  app.add_option("--top-k", o.top_k, "Maximum results")->check(CLI::PositiveNumber);
  app.add_flag("--json", o.json, "JSON output");

  auto* build = app.add_subcommand("build-index", "Annotate a corpus and write a snapshot directory");
  build->add_option("--gazetteer", o.gazetteer, "Gazetteer TSV or N-Triples (.nt)")->required();
  build->add_option("--corpus", o.corpus, "Corpus JSON Lines")->required();
  build->add_option("--lexicon", o.lexicon, "Concept lexicon JSON");
  build->add_option("--network", o.network, "Edge list TSV");
  build->add_option("--out", o.out_dir, "Snapshot directory")->required();

  auto* search = app.add_subcommand("search", "Run a query against a snapshot");
  search->add_option("--snapshot", o.snapshot)->required();
  search->add_option("query", o.query)->required();

  auto* route = app.add_subcommand("route", "Shortest path between two places");
  route->add_option("--snapshot", o.snapshot)->required();
  route->add_option("from", o.from)->required();
  route->add_option("to", o.to)->required();

  auto* serve = app.add_subcommand("serve", "Serve a snapshot over HTTP");
  serve->add_option("--snapshot", o.snapshot)->required();
  serve->add_option("--host", o.host);
  serve->add_option("--port", o.port);

  auto* xport = app.add_subcommand("export-rdf", "Linked RDF description of one place");
  xport->add_option("--snapshot", o.snapshot)->required();
  xport->add_option("id", o.place)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*build) return cmd_build(o, out);
    if (*search) return cmd_search(o, out);
    if (*route) return cmd_route(o, out);
    if (*xport) return cmd_export(o, out);
    if (*serve) return cmd_serve(o, err);
  } catch (const SyntaxError& e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    return kExitQuery;
  } catch (const UnknownPlace& e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    return kExitQuery;
  } catch (const EmptyQuery& e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    return kExitQuery;
  } catch (const UnknownNode& e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    return kExitQuery;
  } catch (const NoPath& e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    return kExitQuery;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace geosir
