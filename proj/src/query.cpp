#include "geosir/query.hpp"

#include <cmath>

#include "geosir/error.hpp"
#include "geosir/strings.hpp"
#include "geosir/text.hpp"

namespace geosir {

namespace {

struct Lexeme {
  enum class Kind { Word, Open, Close, Comma };
  Kind kind;
  std::string_view text;
  std::size_t offset;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<Lexeme> lex(std::string_view q) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  while (i < q.size()) {
    const char c = q[i];
    if (is_space(c)) {
      ++i;
    } else if (c == '(' || c == ')' || c == ',') {
      const auto kind = c == '(' ? Lexeme::Kind::Open : c == ')' ? Lexeme::Kind::Close : Lexeme::Kind::Comma;
      out.push_back({kind, q.substr(i, 1), i});
      ++i;
    } else {
      const std::size_t start = i;
      while (i < q.size() && !is_space(q[i]) && q[i] != '(' && q[i] != ')' && q[i] != ',') ++i;
      out.push_back({Lexeme::Kind::Word, q.substr(start, i - start), start});
    }
  }
  return out;
}

bool is_keyword(const Lexeme& l, std::string_view kw) {
  return l.kind == Lexeme::Kind::Word && ascii_lower(l.text) == kw;
}

bool is_any_keyword(std::string_view word) {
  const std::string w = ascii_lower(word);
  return w == "in" || w == "near" || w == "within";
}

std::string collapse_ws(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : trim(s)) {
    if (is_space(c)) {
      pending = true;
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view q) : q_(q) {
    if (const auto bad = first_invalid_utf8(q)) throw SyntaxError(*bad, "invalid UTF-8");
    lx_ = lex(q);
  }

  QueryAst parse() {
    QueryAst ast;
    std::size_t k = 0;
    while (k < lx_.size() && !is_keyword(lx_[k], "in") && !is_keyword(lx_[k], "near")) {
      if (is_keyword(lx_[k], "within")) throw SyntaxError(lx_[k].offset, "WITHIN without NEAR");
      ++k;
    }
    const std::size_t clause_offset = k < lx_.size() ? lx_[k].offset : q_.size();
    ast.terms = tokenize(q_.substr(0, clause_offset));
    if (k == lx_.size()) {
      if (ast.terms.empty()) throw SyntaxError(0, "empty query");
      return ast;
    }
    pos_ = k + 1;
    if (is_keyword(lx_[k], "in")) {
      ast.spatial = InPlace{phrase(lx_[k], /*stop_at_within=*/false)};
      return ast;
    }
    if (pos_ < lx_.size() && lx_[pos_].kind == Lexeme::Kind::Open) {
      NearPoint near{point(), std::nullopt};
      near.radius_km = within();
      ast.spatial = near;
    } else {
      NearPlace near{phrase(lx_[k], /*stop_at_within=*/true), std::nullopt};
      near.radius_km = within();
      ast.spatial = near;
    }
    if (pos_ < lx_.size()) throw SyntaxError(lx_[pos_].offset, "unexpected text after clause");
    return ast;
  }

 private:
  std::size_t end_offset() const { return pos_ < lx_.size() ? lx_[pos_].offset : q_.size(); }

  std::string phrase(const Lexeme& keyword, bool stop_at_within) {
    const std::size_t first = pos_;
    while (pos_ < lx_.size() && !(stop_at_within && is_keyword(lx_[pos_], "within"))) ++pos_;
    const std::size_t after_kw = keyword.offset + keyword.text.size();
    if (pos_ == first) throw SyntaxError(after_kw, "expected a place name");
    const std::size_t begin = lx_[first].offset;
    const std::size_t end = pos_ < lx_.size() ? lx_[pos_].offset : q_.size();
    std::string name = collapse_ws(q_.substr(begin, end - begin));
    if (tokenize(name).empty()) throw SyntaxError(begin, "place name has no letters or digits");
    return name;
  }

  const Lexeme& expect(Lexeme::Kind kind, const char* what) {
    if (pos_ >= lx_.size() || lx_[pos_].kind != kind) {
      throw SyntaxError(end_offset(), std::string("expected ") + what);
    }
    return lx_[pos_++];
  }

  double number(const Lexeme& l) {
    const auto v = parse_double(l.text);
    if (!v || !std::isfinite(*v)) throw SyntaxError(l.offset, "expected a number");
    return *v;
  }

  GeoPoint point() {
    expect(Lexeme::Kind::Open, "'('");
    const Lexeme& lat_l = expect(Lexeme::Kind::Word, "latitude");
    const double lat = number(lat_l);
    expect(Lexeme::Kind::Comma, "','");
    const Lexeme& lon_l = expect(Lexeme::Kind::Word, "longitude");
    const double lon = number(lon_l);
    expect(Lexeme::Kind::Close, "')'");
    if (lat < -90.0 || lat > 90.0) throw SyntaxError(lat_l.offset, "latitude out of range");
    if (lon < -180.0 || lon > 180.0) throw SyntaxError(lon_l.offset, "longitude out of range");
    return GeoPoint{lat, lon};
  }

  std::optional<double> within() {
    if (pos_ >= lx_.size() || !is_keyword(lx_[pos_], "within")) return std::nullopt;
    ++pos_;
    const Lexeme& num = expect(Lexeme::Kind::Word, "a radius");
    // Accept both "25 km" and "25km".
    std::string_view digits = num.text;
    std::string unit;
    const auto unit_at = digits.find_first_not_of("0123456789.+-eE");
    if (unit_at != std::string_view::npos && unit_at > 0) {
      unit = ascii_lower(digits.substr(unit_at));
      digits = digits.substr(0, unit_at);
    }
    const auto v = parse_double(digits);
    if (!v || !std::isfinite(*v)) throw SyntaxError(num.offset, "expected a radius");
    if (*v <= 0.0) throw SyntaxError(num.offset, "radius must be positive");
    std::size_t unit_offset = num.offset + digits.size();
    if (unit.empty()) {
      const Lexeme& u = expect(Lexeme::Kind::Word, "a unit (km or mi)");
      unit = ascii_lower(u.text);
      unit_offset = u.offset;
    }
    if (unit == "km") return *v;
    if (unit == "mi") return *v * kKmPerMile;
    throw SyntaxError(unit_offset, "unit must be km or mi");
  }

  std::string_view q_;
  std::vector<Lexeme> lx_;
  std::size_t pos_ = 0;
};

std::string radius_text(const std::optional<double>& r) {
  return r ? " WITHIN " + format_double(*r) + " km" : std::string();
}

}  // namespace

QueryAst parse_query(std::string_view q) { return Parser(q).parse(); }

std::string to_string(const QueryAst& ast) {
  std::string out;
  for (const auto& t : ast.terms) {
    if (!out.empty()) out += ' ';
    out += t;
    // A lone keyword-valued term would re-lex as a keyword; the suffix is
    // dropped again by tokenization.
    if (is_any_keyword(t)) out += '-';
  }
  if (!ast.spatial) return out;
  if (!out.empty()) out += ' ';
  struct Visitor {
    std::string operator()(const InPlace& c) const { return "IN " + c.place; }
    std::string operator()(const NearPlace& c) const { return "NEAR " + c.place + radius_text(c.radius_km); }
    std::string operator()(const NearPoint& c) const {
      return "NEAR (" + format_double(c.point.lat) + ", " + format_double(c.point.lon) + ")" +
             radius_text(c.radius_km);
    }
  };
  return out + std::visit(Visitor{}, *ast.spatial);
}

}  // namespace geosir
