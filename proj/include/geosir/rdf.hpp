#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace geosir {

// Object position of a triple: an IRI or a literal with optional datatype.
// Language tags are accepted by the parser and dropped.
struct Term {
  enum class Kind { Iri, Literal };

  Kind kind = Kind::Iri;
  std::string value;     // IRI text or literal lexical form
  std::string datatype;  // literal datatype IRI; empty for plain literals

  static Term iri(std::string v) { return {Kind::Iri, std::move(v), {}}; }
  static Term literal(std::string v, std::string dt = {}) {
    return {Kind::Literal, std::move(v), std::move(dt)};
  }
  bool is_iri() const noexcept { return kind == Kind::Iri; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

struct Triple {
  std::string subject;
  std::string predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
};

// Has a scheme followed by ':' (RFC 3986 scheme charset).
bool is_absolute_iri(std::string_view iri) noexcept;

// One N-Triples statement per line with a trailing '\n'.
std::string to_ntriples(const Triple& t);
std::string to_ntriples(std::span<const Triple> triples);
void write_ntriples(std::ostream& out, std::span<const Triple> triples);

struct ParsedTriple {
  Triple triple;
  std::size_t line = 0;
};

// W3C N-Triples restricted to IRIs and literals. Blank nodes are rejected.
// Throws ParseError with the offending line number.
std::vector<ParsedTriple> parse_ntriples(std::istream& in);
std::vector<ParsedTriple> parse_ntriples(std::string_view text);

// Linear scan: every triple matching each bound position.
std::vector<Triple> match_pattern(std::span<const Triple> triples,
                                  const std::optional<std::string>& s,
                                  const std::optional<std::string>& p,
                                  const std::optional<Term>& o);

// In-memory triple list with hash indexes by subject, predicate and object.
class TripleStore {
 public:
  TripleStore() = default;
  explicit TripleStore(std::vector<Triple> triples);

  void add(Triple t);
  std::size_t size() const noexcept { return triples_.size(); }
  const std::vector<Triple>& triples() const noexcept { return triples_; }

  // Same contract as the free match_pattern, in insertion order.
  std::vector<Triple> match(const std::optional<std::string>& s,
                            const std::optional<std::string>& p,
                            const std::optional<Term>& o) const;

 private:
  struct TermHash {
    std::size_t operator()(const Term& t) const noexcept;
  };

  std::vector<Triple> triples_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_subject_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_predicate_;
  std::unordered_map<Term, std::vector<std::size_t>, TermHash> by_object_;
};

}  // namespace geosir
