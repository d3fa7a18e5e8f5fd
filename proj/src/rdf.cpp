#include "geosir/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <functional>
#include <sstream>

#include "geosir/error.hpp"
#include "geosir/strings.hpp"

namespace geosir {

namespace {

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

void append_uchar(std::string& out, unsigned char c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "\\u%04X", c);
  out += buf;
}

void write_iri(std::string& out, std::string_view iri) {
  out += '<';
  for (char ch : iri) {
    const auto c = static_cast<unsigned char>(ch);
    if (c <= 0x20 || ch == '<' || ch == '>' || ch == '"' || ch == '{' ||
        ch == '}' || ch == '|' || ch == '^' || ch == '`' || ch == '\\') {
      append_uchar(out, c);
    } else {
      out += ch;
    }
  }
  out += '>';
}

void write_literal(std::string& out, const Term& t) {
  out += '"';
  for (char ch : t.value) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          append_uchar(out, static_cast<unsigned char>(ch));
        } else {
          out += ch;
        }
    }
  }
  out += '"';
  if (!t.datatype.empty()) {
    out += "^^";
    write_iri(out, t.datatype);
  }
}

class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  std::optional<Triple> parse() {
    skip_ws();
    if (at_end() || peek() == '#') return std::nullopt;
    Triple t;
    t.subject = parse_subject_or_predicate("subject");
    skip_ws();
    t.predicate = parse_subject_or_predicate("predicate");
    skip_ws();
    t.object = parse_object();
    skip_ws();
    if (at_end() || peek() != '.') fail("expected '.' after object");
    ++pos_;
    skip_ws();
    if (!at_end() && peek() != '#') fail("unexpected text after '.'");
    if (!is_absolute_iri(t.subject)) fail("subject is not an absolute IRI");
    if (!is_absolute_iri(t.predicate)) fail("predicate is not an absolute IRI");
    if (t.object.is_iri() && !is_absolute_iri(t.object.value)) {
      fail("object is not an absolute IRI");
    }
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_, what + " (column " + std::to_string(pos_ + 1) + ")");
  }
  bool at_end() const noexcept { return pos_ >= s_.size(); }
  char peek() const noexcept { return s_[pos_]; }
  void skip_ws() noexcept {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  std::string parse_subject_or_predicate(const char* role) {
    if (at_end()) fail(std::string("missing ") + role);
    if (peek() == '_') fail("blank nodes are not supported");
    if (peek() != '<') fail(std::string("expected IRI for ") + role);
    return parse_iri();
  }

  Term parse_object() {
    if (at_end()) fail("missing object");
    if (peek() == '<') return Term::iri(parse_iri());
    if (peek() == '"') return parse_literal();
    if (peek() == '_') fail("blank nodes are not supported");
    fail("expected IRI or literal object");
  }

  char32_t parse_hex(std::size_t digits) {
    if (pos_ + digits > s_.size()) fail("truncated \\u escape");
    char32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      const char c = s_[pos_++];
      cp <<= 4;
      if (c >= '0' && c <= '9') cp |= static_cast<char32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') cp |= static_cast<char32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') cp |= static_cast<char32_t>(c - 'A' + 10);
      else fail("invalid hex digit in escape");
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("invalid code point in escape");
    return cp;
  }

  std::string parse_iri() {
    ++pos_;  // '<'
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      const char c = s_[pos_++];
      if (c == '>') break;
      if (c == '\\') {
        if (at_end()) fail("dangling escape in IRI");
        const char kind = s_[pos_++];
        if (kind == 'u') append_utf8(out, parse_hex(4));
        else if (kind == 'U') append_utf8(out, parse_hex(8));
        else fail("invalid escape in IRI");
        continue;
      }
      if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' ||
          c == '{' || c == '}' || c == '|' || c == '^' || c == '`') {
        fail("invalid character in IRI");
      }
      out += c;
    }
    return out;
  }

  Term parse_literal() {
    ++pos_;  // '"'
    std::string value;
    while (true) {
      if (at_end()) fail("unterminated literal");
      const char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\n' || c == '\r') fail("raw newline in literal");
      if (c != '\\') {
        value += c;
        continue;
      }
      if (at_end()) fail("dangling escape in literal");
      const char e = s_[pos_++];
      switch (e) {
        case 't': value += '\t'; break;
        case 'b': value += '\b'; break;
        case 'n': value += '\n'; break;
        case 'r': value += '\r'; break;
        case 'f': value += '\f'; break;
        case '"': value += '"'; break;
        case '\'': value += '\''; break;
        case '\\': value += '\\'; break;
        case 'u': append_utf8(value, parse_hex(4)); break;
        case 'U': append_utf8(value, parse_hex(8)); break;
        default: fail("invalid escape in literal");
      }
    }
    Term t = Term::literal(std::move(value));
    if (!at_end() && peek() == '^') {
      if (pos_ + 1 >= s_.size() || s_[pos_ + 1] != '^') fail("expected '^^'");
      pos_ += 2;
      if (at_end() || peek() != '<') fail("expected datatype IRI");
      t.datatype = parse_iri();
      if (!is_absolute_iri(t.datatype)) fail("datatype is not an absolute IRI");
    } else if (!at_end() && peek() == '@') {
      ++pos_;
      const std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) ++pos_;
      if (pos_ == start) fail("empty language tag");
    }
    return t;
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

bool object_matches(const Term& actual, const std::optional<Term>& wanted) {
  return !wanted || actual == *wanted;
}

}  // namespace

bool is_absolute_iri(std::string_view iri) noexcept {
  const auto colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    const auto c = static_cast<unsigned char>(iri[i]);
    if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
  }
  return true;
}

std::string to_ntriples(const Triple& t) {
  std::string out;
  write_iri(out, t.subject);
  out += ' ';
  write_iri(out, t.predicate);
  out += ' ';
  if (t.object.is_iri()) {
    write_iri(out, t.object.value);
  } else {
    write_literal(out, t.object);
  }
  out += " .\n";
  return out;
}

std::string to_ntriples(std::span<const Triple> triples) {
  std::string out;
  for (const auto& t : triples) out += to_ntriples(t);
  return out;
}

void write_ntriples(std::ostream& out, std::span<const Triple> triples) {
  for (const auto& t : triples) out << to_ntriples(t);
}

std::vector<ParsedTriple> parse_ntriples(std::istream& in) {
  std::vector<ParsedTriple> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto bad = first_invalid_utf8(line)) {
      throw ParseError(line_no, "invalid UTF-8 at byte " + std::to_string(*bad + 1));
    }
    if (auto t = LineParser(line, line_no).parse()) {
      out.push_back({std::move(*t), line_no});
    }
  }
  return out;
}

std::vector<ParsedTriple> parse_ntriples(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_ntriples(in);
}

std::vector<Triple> match_pattern(std::span<const Triple> triples,
                                  const std::optional<std::string>& s,
                                  const std::optional<std::string>& p,
                                  const std::optional<Term>& o) {
  std::vector<Triple> out;
  for (const auto& t : triples) {
    if (s && t.subject != *s) continue;
    if (p && t.predicate != *p) continue;
    if (!object_matches(t.object, o)) continue;
    out.push_back(t);
  }
  return out;
}

std::size_t TripleStore::TermHash::operator()(const Term& t) const noexcept {
  const std::size_t h = std::hash<std::string>{}(t.value);
  return h ^ (std::hash<std::string>{}(t.datatype) * 31) ^ static_cast<std::size_t>(t.kind);
}

TripleStore::TripleStore(std::vector<Triple> triples) {
  for (auto& t : triples) add(std::move(t));
}

void TripleStore::add(Triple t) {
  const std::size_t ix = triples_.size();
  by_subject_[t.subject].push_back(ix);
  by_predicate_[t.predicate].push_back(ix);
  by_object_[t.object].push_back(ix);
  triples_.push_back(std::move(t));
}

std::vector<Triple> TripleStore::match(const std::optional<std::string>& s,
                                       const std::optional<std::string>& p,
                                       const std::optional<Term>& o) const {
  if (!s && !p && !o) return triples_;

  // Scan the shortest posting list among the bound positions.
  static const std::vector<std::size_t> kEmpty;
  const std::vector<std::size_t>* best = nullptr;
  auto consider = [&](const auto& index, const auto& key) {
    auto it = index.find(key);
    const auto* list = it == index.end() ? &kEmpty : &it->second;
    if (best == nullptr || list->size() < best->size()) best = list;
  };
  if (s) consider(by_subject_, *s);
  if (p) consider(by_predicate_, *p);
  if (o) consider(by_object_, *o);

  std::vector<Triple> out;
  for (std::size_t ix : *best) {
    const Triple& t = triples_[ix];
    if (s && t.subject != *s) continue;
    if (p && t.predicate != *p) continue;
    if (!object_matches(t.object, o)) continue;
    out.push_back(t);
  }
  return out;
}

}  // namespace geosir
