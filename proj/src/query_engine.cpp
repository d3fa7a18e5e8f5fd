#include "geosir/query_engine.hpp"

#include <cmath>

#include "geosir/error.hpp"

namespace geosir {

void validate(const EngineConfig& cfg) {
  validate(cfg.rank);
  if (!(cfg.default_radius_km > 0.0) || !std::isfinite(cfg.default_radius_km)) {
    throw InvalidArgument("default_radius_km must be positive");
  }
  if (!(cfg.footprint_pad_deg >= 0.0) || !std::isfinite(cfg.footprint_pad_deg)) {
    throw InvalidArgument("footprint_pad_deg must be non-negative");
  }
}

CorpusIndex::CorpusIndex(std::vector<Document> docs, std::map<std::string, DocRecord> records)
    : docs_(std::move(docs)), records_(std::move(records)) {
  text_ = InvertedIndex::build(docs_);
  std::vector<SpatialIndex::Item> items;
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    const auto& d = docs_[i];
    by_id_.emplace(d.doc_id, i);
    auto it = records_.find(d.doc_id);
    if (it == records_.end()) throw InvalidArgument("no annotation record for " + d.doc_id);
    if (it->second.footprint) items.push_back({d.doc_id, *it->second.footprint});
  }
  if (records_.size() != docs_.size()) throw InvalidArgument("annotation records for unknown documents");
  footprints_ = SpatialIndex::build(std::move(items));
}

const Document* CorpusIndex::doc(const std::string& doc_id) const {
  auto it = by_id_.find(doc_id);
  return it == by_id_.end() ? nullptr : &docs_[it->second];
}

bool concept_sense_conflict(const std::set<std::string>& doc_concepts, const std::string& concept_id,
                            const ConceptLexicon& lex) {
  const Concept* c = lex.find(concept_id);
  if (c == nullptr || !c->parent) return false;
  const auto own = lex.subtree(concept_id);
  const auto family = lex.subtree(*c->parent);
  bool other_sense = false;
  for (const auto& dc : doc_concepts) {
    if (own.contains(dc)) return false;
    if (dc != *c->parent && family.contains(dc)) other_sense = true;
  }
  return other_sense;
}

SearchOutcome execute(const QueryAst& ast, const CorpusIndex& corpus, const Gazetteer& g,
                      const ConceptLexicon& lex, const EngineConfig& cfg) {
  validate(cfg);
  if (ast.terms.empty() && !ast.spatial) throw EmptyQuery("query has neither terms nor a spatial clause");

  const auto groups = expand_terms(ast.terms, lex);
  std::set<std::string> candidates;
  if (ast.terms.empty()) {
    candidates = corpus.text().search_terms({});
  } else {
    candidates = corpus.text().search_terms(term_sets(groups));
  }

  for (const auto& group : groups) {
    if (!group.concept_id) continue;
    std::erase_if(candidates, [&](const std::string& id) {
      return concept_sense_conflict(corpus.record(id).concepts, *group.concept_id, lex);
    });
  }

  SearchOutcome outcome;
  std::map<std::string, double> spatial;
  if (!ast.spatial) {
    for (const auto& id : candidates) spatial.emplace(id, 1.0);
  } else if (const auto* in = std::get_if<InPlace>(&*ast.spatial)) {
    outcome.resolved_place = resolve_place(in->place, g);
    const BBox region = place_footprint(outcome.resolved_place->id, g, cfg.footprint_pad_deg);
    for (const auto& id : corpus.footprints().query_region(region)) {
      if (!candidates.contains(id)) continue;
      spatial.emplace(id, in_spatial_score(*corpus.record(id).footprint, region));
    }
  } else {
    GeoPoint center;
    std::optional<double> radius;
    if (const auto* np = std::get_if<NearPlace>(&*ast.spatial)) {
      outcome.resolved_place = resolve_place(np->place, g);
      center = g.at(outcome.resolved_place->id).location;
      radius = np->radius_km;
    } else {
      const auto& pt = std::get<NearPoint>(*ast.spatial);
      center = pt.point;
      radius = pt.radius_km;
    }
    const double r = radius.value_or(cfg.default_radius_km);
    for (const auto& [id, d] : corpus.footprints().query_buffer(center, r)) {
      if (!candidates.contains(id)) continue;
      spatial.emplace(id, std::max(0.0, 1.0 - d / r));
    }
  }

  std::vector<std::string> score_terms;
  for (const auto& group : groups) score_terms.insert(score_terms.end(), group.terms.begin(), group.terms.end());
  std::map<std::string, double> text;
  for (const auto& [id, s] : spatial) text.emplace(id, corpus.text().bm25_score(score_terms, id));

  outcome.total_candidates = spatial.size();
  for (auto& r : combine(text, spatial, cfg.rank)) {
    outcome.results.push_back(
        ScoredResult{r.doc_id, r.text_score, r.spatial_score, r.combined, corpus.record(r.doc_id).places});
  }
  return outcome;
}

}  // namespace geosir
