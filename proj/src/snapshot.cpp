#include "geosir/snapshot.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "geosir/annotator.hpp"
#include "geosir/error.hpp"
#include "geosir/strings.hpp"

namespace geosir {

namespace fs = std::filesystem;

namespace {

// Re-throws loader errors with the file name prefixed.
template <typename F>
auto with_file(const fs::path& path, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    std::string detail = e.what();
    if (e.line()) detail.erase(0, detail.find(": ") + 2);
    throw ParseError(e.line(), path.string() + ": " + detail);
  } catch (const MissingField& e) {
    throw MissingField(path.string() + ": " + e.what());
  } catch (const DuplicateId& e) {
    throw DuplicateId(path.string() + ": " + e.what());
  } catch (const DuplicateDocId& e) {
    throw DuplicateDocId(path.string() + ": " + e.what());
  } catch (const CyclicHierarchy& e) {
    throw CyclicHierarchy(path.string() + ": " + e.what());
  } catch (const AmbiguousTerm& e) {
    throw AmbiguousTerm(path.string() + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

Gazetteer load_gazetteer_text(const fs::path& path, const std::string& text) {
  std::istringstream in(text);
  return with_file(path, [&] {
    return path.extension() == ".nt" ? Gazetteer::load_ntriples(in) : Gazetteer::load_tsv(in);
  });
}

std::optional<GeoPoint> locator(const Gazetteer& g, PlaceId id) {
  if (const auto* e = g.find(id)) return e->location;
  return std::nullopt;
}

PathNetwork load_network_text(const fs::path& path, const std::string& text, const Gazetteer& g) {
  std::istringstream in(text);
  return with_file(path, [&] {
    return PathNetwork::load_edges(in, [&](PlaceId id) { return locator(g, id); });
  });
}

std::string network_tsv(const PathNetwork& net) {
  std::ostringstream out;
  for (const auto& [id, loc] : net.nodes()) {
    for (const auto& e : net.neighbours(id)) {
      if (id < e.to) out << id << '\t' << e.to << '\t' << format_double(e.cost) << '\n';
    }
  }
  return out.str();
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return ss.str();
}

BuildReport build_snapshot(const BuildInputs& inputs, const fs::path& out_dir) {
  const Gazetteer g = load_gazetteer_text(inputs.gazetteer, read_file(inputs.gazetteer));

  ConceptLexicon lex;
  if (inputs.lexicon) {
    std::istringstream in(read_file(*inputs.lexicon));
    lex = with_file(*inputs.lexicon, [&] { return ConceptLexicon::load_json(in); });
  }

  std::vector<Document> docs;
  {
    std::istringstream in(read_file(inputs.corpus));
    docs = with_file(inputs.corpus, [&] { return load_corpus_jsonl(in); });
  }
  std::unordered_set<std::string> ids;
  std::unordered_set<std::string> subjects;
  for (const auto& d : docs) {
    if (!ids.insert(d.doc_id).second) {
      throw DuplicateDocId(inputs.corpus.string() + ": duplicate doc_id " + d.doc_id);
    }
    if (!subjects.insert(annotation_subject(d)).second) {
      throw InvalidArgument(inputs.corpus.string() + ": documents share the uri " + d.uri);
    }
  }

  std::optional<PathNetwork> net;
  if (inputs.network) net = load_network_text(*inputs.network, read_file(*inputs.network), g);

  BuildReport report;
  report.entries = g.size();
  report.docs = docs.size();
  report.concepts = lex.size();
  std::ostringstream annotations;
  for (const auto& d : docs) {
    const DocAnnotation a = annotate(d, g, &lex);
    report.mentions += a.places.size();
    report.triples += a.triples.size() + a.concept_triples.size();
    write_ntriples(annotations, a.triples);
    write_ntriples(annotations, a.concept_triples);
  }

  std::ostringstream gaz_out, corpus_out, lex_out;
  g.write_tsv(gaz_out);
  write_corpus_jsonl(corpus_out, docs);
  lex.write_json(lex_out);

  std::map<std::string, std::string> files{
      {snapshot_files::kGazetteer, gaz_out.str()},
      {snapshot_files::kCorpus, corpus_out.str()},
      {snapshot_files::kLexicon, lex_out.str()},
      {snapshot_files::kAnnotations, annotations.str()},
  };
  if (net) {
    files.emplace(snapshot_files::kNetwork, network_tsv(*net));
    report.network_edges = net->edge_count();
  }

  nlohmann::ordered_json meta;
  meta["format"] = "geosir-snapshot";
  meta["version"] = kSnapshotFormatVersion;
  nlohmann::ordered_json stamps = nlohmann::ordered_json::object();
  for (const auto& [name, content] : files) stamps[name] = hex64(fnv1a64(content));
  meta["stamps"] = stamps;
  meta["counts"] = {{"entries", report.entries}, {"docs", report.docs},
                    {"mentions", report.mentions}, {"triples", report.triples},
                    {"concepts", report.concepts}, {"network_edges", report.network_edges}};
  files.emplace(snapshot_files::kMeta, meta.dump(2) + "\n");

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  if (!net) fs::remove(out_dir / snapshot_files::kNetwork, ec);
  for (const auto& [name, content] : files) write_file(out_dir / name, content);
  return report;
}

EngineSnapshot load_snapshot(const fs::path& dir) {
  const fs::path meta_path = dir / snapshot_files::kMeta;
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_file(meta_path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(meta_path.string() + ": " + e.what());
  }
  if (meta.value("format", "") != "geosir-snapshot" || meta.value("version", 0) != kSnapshotFormatVersion) {
    throw IoError(meta_path.string() + ": unsupported snapshot format");
  }
  const auto& stamps = meta.at("stamps");
  auto checked = [&](const char* name) {
    const fs::path p = dir / name;
    std::string content = read_file(p);
    if (!stamps.contains(name) || stamps.at(name).get<std::string>() != hex64(fnv1a64(content))) {
      throw IoError(p.string() + ": build stamp mismatch");
    }
    return content;
  };

  EngineSnapshot snap;
  const fs::path gaz_path = dir / snapshot_files::kGazetteer;
  snap.gazetteer = load_gazetteer_text(gaz_path, checked(snapshot_files::kGazetteer));
  {
    std::istringstream in(checked(snapshot_files::kLexicon));
    snap.lexicon = with_file(dir / snapshot_files::kLexicon, [&] { return ConceptLexicon::load_json(in); });
  }
  std::vector<Document> docs;
  {
    std::istringstream in(checked(snapshot_files::kCorpus));
    docs = with_file(dir / snapshot_files::kCorpus, [&] { return load_corpus_jsonl(in); });
  }
  const fs::path ann_path = dir / snapshot_files::kAnnotations;
  const std::string ann_text = checked(snapshot_files::kAnnotations);
  auto records = with_file(ann_path, [&] { return records_from_triples(docs, parse_ntriples(ann_text)); });
  snap.corpus = CorpusIndex(std::move(docs), std::move(records));
  if (stamps.contains(snapshot_files::kNetwork)) {
    snap.network = load_network_text(dir / snapshot_files::kNetwork, checked(snapshot_files::kNetwork),
                                     snap.gazetteer);
  }
  return snap;
}

EngineConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(0, "config must be a JSON object");
  EngineConfig cfg;
  auto number = [&](const char* key, double& field) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw ParseError(0, std::string("config '") + key + "' must be a number");
    field = j[key].get<double>();
  };
  number("alpha", cfg.rank.alpha);
  number("default_radius_km", cfg.default_radius_km);
  number("footprint_pad_deg", cfg.footprint_pad_deg);
  if (j.contains("top_k")) {
    if (!j["top_k"].is_number_integer() || j["top_k"].get<long long>() < 1) {
      throw ParseError(0, "config 'top_k' must be a positive integer");
    }
    cfg.rank.top_k = j["top_k"].get<std::size_t>();
  }
  validate(cfg);
  return cfg;
}

EngineConfig load_config(const fs::path& path) {
  return with_file(path, [&] { return parse_config(read_file(path)); });
}

}  // namespace geosir
