#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "geosir/gazetteer.hpp"
#include "geosir/path_network.hpp"
#include "geosir/query_engine.hpp"
#include "geosir/semantic_expander.hpp"

namespace geosir {

inline constexpr int kSnapshotFormatVersion = 1;

// Snapshot directory layout; every file is written by a canonical writer so
// identical inputs give byte-identical snapshots.
namespace snapshot_files {
inline constexpr const char* kMeta = "meta.json";
inline constexpr const char* kGazetteer = "gazetteer.tsv";
inline constexpr const char* kCorpus = "corpus.jsonl";
inline constexpr const char* kLexicon = "lexicon.json";
inline constexpr const char* kAnnotations = "annotations.nt";
inline constexpr const char* kNetwork = "network.tsv";
}  // namespace snapshot_files

struct BuildInputs {
  std::filesystem::path gazetteer;  // .nt loads as N-Triples, anything else as TSV
  std::filesystem::path corpus;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> network;
};

struct BuildReport {
  std::size_t entries = 0;
  std::size_t docs = 0;
  std::size_t mentions = 0;
  std::size_t triples = 0;
  std::size_t concepts = 0;
  std::size_t network_edges = 0;
};

struct EngineSnapshot {
  Gazetteer gazetteer;
  ConceptLexicon lexicon;
  CorpusIndex corpus;
  std::optional<PathNetwork> network;
};

std::string read_file(const std::filesystem::path& path);  // throws IoError

// Loads, annotates and writes the snapshot directory. Loader errors carry
// the file name.
BuildReport build_snapshot(const BuildInputs& inputs, const std::filesystem::path& out_dir);

// Reads a snapshot and rebuilds the indexes. Throws IoError when files are
// missing or their build stamps do not match meta.json.
EngineSnapshot load_snapshot(const std::filesystem::path& dir);

// JSON object with optional alpha, top_k, default_radius_km,
// footprint_pad_deg. Throws ParseError / InvalidArgument.
EngineConfig load_config(const std::filesystem::path& path);
EngineConfig parse_config(const std::string& json_text);

}  // namespace geosir
