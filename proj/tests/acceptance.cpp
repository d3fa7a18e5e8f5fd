// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "geosir/cli.hpp"
#include "geosir/error.hpp"
#include "geosir/path_network.hpp"
#include "geosir/query_engine.hpp"
#include "geosir/ranker.hpp"
#include "geosir/service.hpp"
#include "geosir/spatial_index.hpp"
#include "geosir/strings.hpp"
#include "live_server.hpp"
#include "support.hpp"

using namespace geosir;
using geosir::testing::Rng;
using geosir::testing::TempDir;
namespace oracle = geosir::testing::oracle;
using nlohmann::json;

namespace {

constexpr double kMotivatingLimitS = 1.0;
constexpr double kSpatialLimitS = 30.0;
constexpr double kQuarterMeridianKm = 10007.54;
constexpr double kQuarterMeridianTol = 0.01;
constexpr double kTriangleTolKm = 1e-9;
constexpr double kBm25Tol = 1e-12;
constexpr double kSuiteLimitS = 60.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Thrown by a check; carries the reason for the FAIL line.
struct Failed {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failed{why};
}

std::string join(const std::set<std::string>& s) {
  std::string out = "{";
  for (const auto& x : s) out += (out.size() > 1 ? "," : "") + x;
  return out + "}";
}

std::set<std::string> result_ids(const SearchOutcome& out) {
  std::set<std::string> ids;
  for (const auto& r : out.results) ids.insert(r.doc_id);
  return ids;
}

std::map<std::string, std::string> dir_contents(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    files[e.path().filename().string()] = geosir::testing::slurp(e.path());
  }
  return files;
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  if (out) *out = o.str();
  return code;
}

std::vector<std::string> build_args(const std::filesystem::path& dir) {
  using geosir::testing::data_path;
  return {"build-index", "--gazetteer", data_path("gazetteer.tsv").string(), "--corpus",
          data_path("hotels.jsonl").string(), "--lexicon", data_path("lexicon.json").string(), "--network",
          data_path("network.tsv").string(), "--out", dir.string()};
}

std::string motivating() {
  const auto t0 = Clock::now();
  TempDir tmp("acc-motivating");
  geosir::testing::build_fixture(tmp / "with", true, false);
  geosir::testing::build_fixture(tmp / "without", false, false);
  const auto ast = parse_query("lodging hotels IN Hyderabad");
  const EngineConfig cfg;
  const EngineSnapshot with = load_snapshot(tmp / "with");
  const auto got = result_ids(execute(ast, with.corpus, with.gazetteer, with.lexicon, cfg));
  require(got == std::set<std::string>{"d1", "d2"}, "with lexicon got " + join(got));
  const EngineSnapshot without = load_snapshot(tmp / "without");
  const auto leak = result_ids(execute(ast, without.corpus, without.gazetteer, without.lexicon, cfg));
  require(leak.contains("d3"), "catering document absent without lexicon: " + join(leak));
  require(!leak.contains("d4"), "Mumbai document matched without lexicon");
  const double s = seconds_since(t0);
  require(s < kMotivatingLimitS, "took " + std::to_string(s) + " s");
  std::ostringstream msg;
  msg << "with lexicon " << join(got) << ", without " << join(leak) << ", " << s << " s";
  return msg.str();
}

std::string spatial_oracle() {
  const auto t0 = Clock::now();
  constexpr int kSeeds = 20, kGeoms = 200, kProbes = 100;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    Rng rng(seed);
    std::vector<SpatialIndex::Item> items;
    for (int i = 0; i < kGeoms; ++i) items.push_back({"g" + std::to_string(i), rng.geometry()});
    const SpatialIndex idx = SpatialIndex::build(items);
    auto probe = [&] { return rng.coin(0.3) ? representative_point(rng.pick(items).geometry) : rng.point(85, 179); };
    for (int k = 0; k < kProbes; ++k) {
      const GeoPoint p = probe();
      std::set<std::string> want;
      for (const auto& it : items) {
        if (oracle::contains(it.geometry, p)) want.insert(it.id);
      }
      require(idx.query_point(p) == want, "query_point seed " + std::to_string(seed));
    }
    for (int k = 0; k < kProbes; ++k) {
      const Geometry region = rng.coin() ? Geometry{rng.box(40)} : Geometry{rng.polygon(20)};
      std::set<std::string> want;
      for (const auto& it : items) {
        if (oracle::intersects(it.geometry, region)) want.insert(it.id);
      }
      require(idx.query_region(region) == want, "query_region seed " + std::to_string(seed));
    }
    for (int k = 0; k < kProbes; ++k) {
      const GeoPoint c = probe();
      const double r = rng.coin(0.1) ? rng.uniform(0, 20000) : rng.uniform(0, 3000);
      std::set<std::string> want;
      for (const auto& it : items) {
        if (oracle::great_circle_km(representative_point(it.geometry), c) <= r) want.insert(it.id);
      }
      std::set<std::string> got;
      for (const auto& [id, d] : idx.query_buffer(c, r)) got.insert(id);
      require(got == want, "query_buffer seed " + std::to_string(seed));
    }
  }
  const double s = seconds_since(t0);
  require(s < kSpatialLimitS, "took " + std::to_string(s) + " s");
  std::ostringstream msg;
  msg << kSeeds << " seeds x " << kGeoms << " geometries x " << kProbes << " probes x 3 query types, " << s << " s";
  return msg.str();
}

std::string geodesy() {
  const double q = haversine_km({0, 0}, {0, 90});
  require(std::abs(q - kQuarterMeridianKm) <= kQuarterMeridianTol, "quarter meridian " + std::to_string(q));
  Rng rng(2024);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 10000; ++i) {
    const GeoPoint a = rng.point(), b = rng.point(), c = rng.point();
    require(haversine_km(a, b) == haversine_km(b, a), "asymmetric");
    require(haversine_km(a, a) == 0.0, "identity");
    worst = std::max(worst, haversine_km(a, c) - haversine_km(a, b) - haversine_km(b, c));
  }
  require(worst <= kTriangleTolKm, "triangle excess " + std::to_string(worst));
  std::ostringstream msg;
  msg.precision(10);
  msg << "quarter meridian " << q << " km, worst triangle excess " << worst << " km";
  return msg.str();
}

std::string bm25() {
  const std::vector<Document> docs{{"a", "", "alpha", "http://e/a"}, {"b", "", "beta", "http://e/b"}};
  const auto idx = InvertedIndex::build(docs);
  const std::vector<std::string> terms{"alpha"};
  const double s = idx.bm25_score(terms, "a");
  require(std::abs(s - std::log(2.0)) <= kBm25Tol, "score " + std::to_string(s));
  constexpr std::size_t kN = 1000;
  for (std::size_t df = 1; df < kN; ++df) {
    require(bm25_idf(kN, df + 1) < bm25_idf(kN, df), "idf not decreasing at df " + std::to_string(df));
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "score " << s << ", |diff| " << std::abs(s - std::log(2.0)) << ", idf decreasing over df 1.." << kN;
  return msg.str();
}

std::string routing() {
  int pairs = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(seed * 7919);
    const int n = rng.integer(2, 8);
    PathNetwork net;
    std::map<PlaceId, std::map<PlaceId, double>> adj;
    for (int i = 1; i <= n; ++i) net.add_node(i, {0, 0});
    auto connect = [&](PlaceId a, PlaceId b, double w) {
      if (a == b) return;
      net.add_edge(a, b, w);
      auto it = adj[a].find(b);
      if (it == adj[a].end() || w < it->second) adj[a][b] = adj[b][a] = w;
    };
    for (int i = 2; i <= n; ++i) connect(i, rng.integer(1, i - 1), rng.uniform(0.5, 50));
    for (int k = rng.integer(0, n * 2); k > 0; --k) connect(rng.integer(1, n), rng.integer(1, n), rng.uniform(0.5, 50));
    for (int s = 1; s <= n; ++s) {
      for (int t = 1; t <= n; ++t) {
        if (s == t) continue;
        const Route r = shortest_path(net, s, t);
        const auto best = oracle::best_simple_path(adj, s, t);
        require(r.total_km == best.cost, "cost mismatch seed " + std::to_string(seed));
        require(r.nodes == best.nodes, "path mismatch seed " + std::to_string(seed));
        ++pairs;
      }
    }
  }
  return "50 graphs, " + std::to_string(pairs) + " ordered pairs, exact cost match";
}

std::string rdf_round_trip() {
  const Gazetteer g = geosir::testing::fixture_gazetteer();
  for (const auto& [id, e] : g.entries()) {
    std::string nt = to_ntriples(g.export_rdf(id));
    for (auto p = e.parent_id; p; p = g.at(*p).parent_id) nt += to_ntriples(g.export_rdf(*p));
    std::istringstream in(nt);
    require(Gazetteer::load_ntriples(in).at(id) == e, "entry " + std::to_string(id) + " differs");
  }
  TempDir tmp("acc-rdf");
  geosir::testing::build_fixture(tmp / "snap");
  geosir::testing::LiveServer server(tmp / "snap");
  auto c = server.client();
  for (const auto& [id, e] : g.entries()) {
    auto r = c.Get("/place/" + std::to_string(id), {{"Accept", "application/n-triples"}});
    require(r && r->status == 200, "/place/" + std::to_string(id) + " failed");
    require(r->body == to_ntriples(g.export_rdf(id)), "/place/" + std::to_string(id) + " body differs");
  }
  return std::to_string(g.size()) + " entries round-trip, /place bodies byte-equal";
}

std::string monotonicity() {
  const std::vector<std::string> words{"a", "b", "c", "d", "e", "f"};
  int queries = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(seed + 5000);
    const auto docs = geosir::testing::random_corpus(rng, words, rng.integer(1, 30), 8);
    const auto idx = InvertedIndex::build(docs);
    std::vector<Concept> cs;
    std::set<std::string> used;
    for (int i = 0; i < rng.integer(1, 4); ++i) {
      Concept c{"c" + std::to_string(i), rng.pick(words), {}, std::nullopt};
      if (rng.coin()) c.preferred += " " + rng.pick(words);
      if (!used.insert(c.preferred).second) continue;
      const std::string syn = rng.pick(words);
      if (used.insert(syn).second) c.synonyms.push_back(syn);
      if (!cs.empty() && rng.coin()) c.parent = cs[0].id;
      cs.push_back(c);
    }
    const auto lex = ConceptLexicon::from_concepts(cs);
    for (int q = 0; q < 20; ++q, ++queries) {
      std::vector<std::string> tokens;
      for (int k = rng.integer(1, 4); k > 0; --k) tokens.push_back(rng.pick(words));
      std::vector<std::set<std::string>> plain;
      for (const auto& t : tokens) plain.push_back({t});
      const auto groups = expand_terms(tokens, lex);
      const auto expanded = idx.search_terms(term_sets(groups));
      const auto base = idx.search_terms(plain);
      require(std::includes(expanded.begin(), expanded.end(), base.begin(), base.end()),
              "expanded set misses a document, seed " + std::to_string(seed));
      for (const auto& t : tokens) {
        require(std::any_of(groups.begin(), groups.end(), [&](const TermGroup& g) { return g.terms.contains(t); }),
                "token '" + t + "' missing from expansion, seed " + std::to_string(seed));
      }
    }
  }
  return "50 corpora, " + std::to_string(queries) + " queries";
}

std::vector<std::string> order(const std::vector<RankedDoc>& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs) out.push_back(r.doc_id);
  return out;
}

std::vector<std::string> order_by(const std::map<std::string, double>& s) {
  std::vector<std::pair<std::string, double>> v(s.begin(), s.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (const auto& [id, x] : v) out.push_back(id);
  return out;
}

std::string ranking() {
  constexpr int kSeeds = 200;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    Rng rng(seed + 9000);
    const int n = rng.integer(1, 20);
    const bool coarse = rng.coin();
    std::map<std::string, double> text, spatial;
    for (int i = 0; i < n; ++i) {
      const std::string id = "d" + std::to_string(100 + i);
      text[id] = coarse ? rng.integer(0, 4) * 5.0 : rng.uniform(0, 20);
      spatial[id] = coarse ? rng.integer(0, 4) / 4.0 : rng.uniform(0, 1);
    }
    const double a = rng.uniform(0.01, 100), b = rng.uniform(-50, 50);
    std::map<std::string, double> scaled;
    for (const auto& [id, s] : text) scaled[id] = a * s + b;
    const RankConfig cfg{rng.uniform(0, 1), 100};
    const auto base = combine(text, spatial, cfg);
    require(order(base) == order(combine(scaled, spatial, cfg)), "affine rescale changed order, seed " +
                                                                     std::to_string(seed));
    require(order(combine(text, spatial, {1.0, 100})) == order_by(text), "alpha=1 seed " + std::to_string(seed));
    require(order(combine(text, spatial, {0.0, 100})) == order_by(spatial), "alpha=0 seed " + std::to_string(seed));
    for (int rep = 0; rep < 3; ++rep) require(combine(text, spatial, cfg) == base, "nondeterministic");
  }

  // Whole-engine repeatability on the fixture.
  TempDir tmp("acc-rank");
  geosir::testing::build_fixture(tmp / "snap");
  const EngineSnapshot snap = load_snapshot(tmp / "snap");
  for (const char* q : {"lodging hotels IN Hyderabad", "hotels", "hotels NEAR Mumbai WITHIN 800 km"}) {
    const auto first = execute(parse_query(q), snap.corpus, snap.gazetteer, snap.lexicon, {}).results;
    for (int rep = 0; rep < 5; ++rep) {
      require(execute(parse_query(q), snap.corpus, snap.gazetteer, snap.lexicon, {}).results == first,
              std::string("engine nondeterministic on ") + q);
    }
  }
  return std::to_string(kSeeds) + " score sets: affine, alpha 0/1 and repeat checks";
}

std::string end_to_end() {
  TempDir tmp("acc-e2e");
  require(cli(build_args(tmp / "a")) == kExitOk, "first build failed");
  require(cli(build_args(tmp / "b")) == kExitOk, "second build failed");
  const auto a = dir_contents(tmp / "a"), b = dir_contents(tmp / "b");
  require(a == b, "snapshots differ");
  geosir::testing::LiveServer server(tmp / "a");
  auto c = server.client();
  const std::vector<std::string> queries{"lodging hotels IN Hyderabad", "hotels", "inn", "IN Hyderabad",
                                         "hotels NEAR Mumbai WITHIN 800 km", "rooms NEAR (17.4, 78.5) WITHIN 50 km",
                                         "biryani IN Telangana"};
  for (const auto& q : queries) {
    std::string out;
    require(cli({"--json", "search", "--snapshot", (tmp / "a").string(), q}, &out) == kExitOk, "CLI failed: " + q);
    auto r = c.Get("/search", httplib::Params{{"q", q}}, httplib::Headers{});
    require(r && r->status == 200, "HTTP failed: " + q);
    require(json::parse(out) == json::parse(r->body), "CLI and HTTP differ: " + q);
  }
  return std::to_string(a.size()) + " snapshot files byte-identical, " + std::to_string(queries.size()) +
         " queries agree";
}

#ifndef GEOSIR_UNIT_BINARIES
#define GEOSIR_UNIT_BINARIES ""
#endif

std::string full_suite(double own_seconds) {
  const auto t0 = Clock::now();
  std::string failed;
  int count = 0;
  for (const auto part : split(GEOSIR_UNIT_BINARIES, '|')) {
    if (part.empty()) continue;
    ++count;
    const std::string cmd = "\"" + std::string(part) + "\" > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) failed += " " + std::filesystem::path(part).filename().string();
  }
  require(count > 0, "no unit test binaries configured");
  require(failed.empty(), "failing:" + failed);
  const double s = seconds_since(t0) + own_seconds;
  require(s < kSuiteLimitS, "took " + std::to_string(s) + " s");
  std::ostringstream msg;
  msg << count << " unit binaries plus acceptance checks, " << s << " s";
  return msg.str();
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  struct Criterion {
    const char* name;
    std::function<std::string()> check;
  };
  const std::vector<Criterion> criteria{
      {"motivating example", motivating},
      {"spatial index vs linear scan", spatial_oracle},
      {"geodesy", geodesy},
      {"bm25 hand value", bm25},
      {"routing vs path enumeration", routing},
      {"rdf round trip", rdf_round_trip},
      {"expansion monotonicity", monotonicity},
      {"ranking invariances", ranking},
      {"end-to-end determinism", end_to_end},
  };
  int failures = 0;
  auto report = [&](int n, const char* name, const std::function<std::string()>& check) {
    std::string detail;
    bool ok = false;
    try {
      detail = check();
      ok = true;
    } catch (const Failed& f) {
      detail = f.why;
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::cout << (ok ? "PASS" : "FAIL") << " " << n << " " << name << ": " << detail << std::endl;
  };
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    report(static_cast<int>(i + 1), criteria[i].name, criteria[i].check);
  }
  const double own = seconds_since(t0);
  report(10, "full suite time", [own] { return full_suite(own); });
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
