#pragma once

#include <istream>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace geosir {

struct Document {
  std::string doc_id;
  std::string title;
  std::string body;
  std::string uri;

  friend bool operator==(const Document&, const Document&) = default;
};

// JSON Lines, one {doc_id, title, body, uri} object per line. Blank lines
// are skipped. Throws ParseError with the line number.
std::vector<Document> load_corpus_jsonl(std::istream& in);
void write_corpus_jsonl(std::ostream& out, std::span<const Document> docs);

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

// ln(1 + (N - df + 0.5) / (df + 0.5)); never negative.
double bm25_idf(std::size_t corpus_size, std::size_t df) noexcept;

// Term-frequency inverted index. Title tokens are counted twice.
class InvertedIndex {
 public:
  struct Posting {
    std::string doc_id;
    std::uint32_t tf;
  };

  InvertedIndex() = default;

  // Throws DuplicateDocId (doc_id must also be non-empty: InvalidArgument).
  static InvertedIndex build(std::span<const Document> docs, Bm25Params params = {});

  std::size_t doc_count() const noexcept { return doc_ids_.size(); }
  double average_length() const noexcept { return avg_len_; }
  bool has_doc(const std::string& doc_id) const { return doc_len_.contains(doc_id); }
  // Throws UnknownDoc.
  std::size_t doc_length(const std::string& doc_id) const;
  // Sorted by doc_id.
  const std::vector<Posting>& postings(const std::string& term) const;
  std::size_t document_frequency(const std::string& term) const { return postings(term).size(); }
  std::uint32_t term_frequency(const std::string& term, const std::string& doc_id) const;
  const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
  std::size_t term_count() const noexcept { return postings_.size(); }

  // Sum of per-term BM25 contributions; repeated terms count again.
  // Throws UnknownDoc.
  double bm25_score(std::span<const std::string> terms, const std::string& doc_id) const;

  // Documents matching (any term of each group) for every group; all
  // documents when `groups` is empty.
  std::set<std::string> search_terms(std::span<const std::set<std::string>> groups) const;

 private:
  Bm25Params params_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::unordered_map<std::string, std::size_t> doc_len_;
  std::vector<std::string> doc_ids_;  // sorted
  double avg_len_ = 0.0;
};

// Tokens that the index counts for `doc`: title tokens twice, then body.
std::vector<std::string> indexed_tokens(const Document& doc);

}  // namespace geosir
