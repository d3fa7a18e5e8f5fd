#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "geosir/annotator.hpp"
#include "geosir/gazetteer.hpp"
#include "geosir/query.hpp"
#include "geosir/ranker.hpp"
#include "geosir/semantic_expander.hpp"
#include "geosir/spatial_index.hpp"
#include "geosir/text_index.hpp"

namespace geosir {

struct EngineConfig {
  RankConfig rank;
  double default_radius_km = 10.0;
  double footprint_pad_deg = kDefaultFootprintPadDeg;
};

// Throws InvalidArgument on out-of-range values.
void validate(const EngineConfig& cfg);

// Indexed corpus: documents, their annotation records, the text index and
// an R-tree over document footprints.
class CorpusIndex {
 public:
  CorpusIndex() = default;
  // Every document needs a record; throws InvalidArgument otherwise.
  CorpusIndex(std::vector<Document> docs, std::map<std::string, DocRecord> records);

  const std::vector<Document>& docs() const noexcept { return docs_; }
  const Document* doc(const std::string& doc_id) const;
  const std::map<std::string, DocRecord>& records() const noexcept { return records_; }
  const DocRecord& record(const std::string& doc_id) const { return records_.at(doc_id); }
  const InvertedIndex& text() const noexcept { return text_; }
  const SpatialIndex& footprints() const noexcept { return footprints_; }

 private:
  std::vector<Document> docs_;
  std::map<std::string, std::size_t> by_id_;
  std::map<std::string, DocRecord> records_;
  InvertedIndex text_;
  SpatialIndex footprints_;
};

struct ScoredResult {
  std::string doc_id;
  double text_score = 0.0;
  double spatial_score = 0.0;
  double combined = 0.0;
  std::vector<PlaceId> places;

  friend bool operator==(const ScoredResult&, const ScoredResult&) = default;
};

struct SearchOutcome {
  std::vector<ScoredResult> results;
  std::size_t total_candidates = 0;  // matches before top-k truncation
  std::optional<PlaceSense> resolved_place;
};

// True when the document speaks only of other senses of the concept's
// parent: it carries a concept under that parent but none under
// `concept_id`.
bool concept_sense_conflict(const std::set<std::string>& doc_concepts, const std::string& concept_id,
                            const ConceptLexicon& lex);

// Expansion, boolean retrieval, concept-sense filter, spatial filter,
// ranking, top-k. Throws EmptyQuery or UnknownPlace.
SearchOutcome execute(const QueryAst& ast, const CorpusIndex& corpus, const Gazetteer& g,
                      const ConceptLexicon& lex, const EngineConfig& cfg);

}  // namespace geosir
