#include "geosir/text_index.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"

#include "geosir/error.hpp"
#include "geosir/text.hpp"

namespace geosir {

namespace {

const std::vector<InvertedIndex::Posting> kNoPostings;

std::string string_field(const nlohmann::json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(line, std::string("missing field '") + key + "'");
  if (!it->is_string()) throw ParseError(line, std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

}  // namespace

std::vector<Document> load_corpus_jsonl(std::istream& in) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "expected a JSON object");
    Document d;
    d.doc_id = string_field(obj, "doc_id", line_no);
    d.title = string_field(obj, "title", line_no);
    d.body = string_field(obj, "body", line_no);
    d.uri = string_field(obj, "uri", line_no);
    if (d.doc_id.empty()) throw ParseError(line_no, "doc_id is empty");
    docs.push_back(std::move(d));
  }
  return docs;
}

void write_corpus_jsonl(std::ostream& out, std::span<const Document> docs) {
  for (const auto& d : docs) {
    nlohmann::ordered_json obj;
    obj["doc_id"] = d.doc_id;
    obj["title"] = d.title;
    obj["body"] = d.body;
    obj["uri"] = d.uri;
    out << obj.dump() << '\n';
  }
}

double bm25_idf(std::size_t corpus_size, std::size_t df) noexcept {
  const double n = static_cast<double>(corpus_size);
  const double f = static_cast<double>(df);
  return std::log(1.0 + (n - f + 0.5) / (f + 0.5));
}

std::vector<std::string> indexed_tokens(const Document& doc) {
  auto title = tokenize(doc.title);
  auto body = tokenize(doc.body);
  std::vector<std::string> out;
  out.reserve(title.size() * 2 + body.size());
  out.insert(out.end(), title.begin(), title.end());
  out.insert(out.end(), title.begin(), title.end());
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

InvertedIndex InvertedIndex::build(std::span<const Document> docs, Bm25Params params) {
  InvertedIndex ix;
  ix.params_ = params;
  std::size_t total = 0;
  for (const auto& d : docs) {
    if (d.doc_id.empty()) throw InvalidArgument("document id is empty");
    if (ix.doc_len_.contains(d.doc_id)) throw DuplicateDocId("duplicate doc_id " + d.doc_id);
    const auto tokens = indexed_tokens(d);
    ix.doc_len_.emplace(d.doc_id, tokens.size());
    ix.doc_ids_.push_back(d.doc_id);
    total += tokens.size();
    std::map<std::string, std::uint32_t> counts;
    for (const auto& t : tokens) ++counts[t];
    for (auto& [term, tf] : counts) ix.postings_[term].push_back({d.doc_id, tf});
  }
  std::sort(ix.doc_ids_.begin(), ix.doc_ids_.end());
  for (auto& [term, list] : ix.postings_) {
    std::sort(list.begin(), list.end(),
              [](const Posting& a, const Posting& b) { return a.doc_id < b.doc_id; });
  }
  ix.avg_len_ = docs.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(docs.size());
  return ix;
}

std::size_t InvertedIndex::doc_length(const std::string& doc_id) const {
  auto it = doc_len_.find(doc_id);
  if (it == doc_len_.end()) throw UnknownDoc("unknown document " + doc_id);
  return it->second;
}

const std::vector<InvertedIndex::Posting>& InvertedIndex::postings(const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? kNoPostings : it->second;
}

std::uint32_t InvertedIndex::term_frequency(const std::string& term, const std::string& doc_id) const {
  const auto& list = postings(term);
  auto it = std::lower_bound(list.begin(), list.end(), doc_id,
                             [](const Posting& p, const std::string& id) { return p.doc_id < id; });
  return it != list.end() && it->doc_id == doc_id ? it->tf : 0;
}

double InvertedIndex::bm25_score(std::span<const std::string> terms, const std::string& doc_id) const {
  const double len = static_cast<double>(doc_length(doc_id));
  const double norm = avg_len_ > 0.0 ? len / avg_len_ : 0.0;
  double score = 0.0;
  for (const auto& term : terms) {
    const std::uint32_t tf = term_frequency(term, doc_id);
    if (tf == 0) continue;
    const double f = static_cast<double>(tf);
    const double idf = bm25_idf(doc_count(), document_frequency(term));
    score += idf * (f * (params_.k1 + 1.0)) /
             (f + params_.k1 * (1.0 - params_.b + params_.b * norm));
  }
  return score;
}

std::set<std::string> InvertedIndex::search_terms(std::span<const std::set<std::string>> groups) const {
  if (groups.empty()) return {doc_ids_.begin(), doc_ids_.end()};
  std::set<std::string> result;
  bool first = true;
  for (const auto& group : groups) {
    std::set<std::string> matched;
    for (const auto& term : group) {
      for (const auto& p : postings(term)) {
        if (first || result.contains(p.doc_id)) matched.insert(p.doc_id);
      }
    }
    result = std::move(matched);
    first = false;
    if (result.empty()) break;
  }
  return result;
}

}  // namespace geosir
