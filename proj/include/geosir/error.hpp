#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geosir {

// Root of every error the engine raises. `kind()` is a stable, machine-usable
// name (used as the `error` field of HTTP error bodies).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define GEOSIR_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {}    \
  };

GEOSIR_DEFINE_ERROR(InvalidArgument)
GEOSIR_DEFINE_ERROR(DuplicateId)
GEOSIR_DEFINE_ERROR(UnknownId)
GEOSIR_DEFINE_ERROR(MissingField)
GEOSIR_DEFINE_ERROR(CyclicHierarchy)
GEOSIR_DEFINE_ERROR(AmbiguousTerm)
GEOSIR_DEFINE_ERROR(UnknownNode)
GEOSIR_DEFINE_ERROR(NoPath)
GEOSIR_DEFINE_ERROR(UnknownPlace)
GEOSIR_DEFINE_ERROR(DuplicateDocId)
GEOSIR_DEFINE_ERROR(UnknownDoc)
GEOSIR_DEFINE_ERROR(MismatchedDocSets)
GEOSIR_DEFINE_ERROR(EmptyQuery)
GEOSIR_DEFINE_ERROR(IoError)

#undef GEOSIR_DEFINE_ERROR

// Malformed input file. `line()` is 1-based; 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("ParseError",
              line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Malformed query string. `offset()` is a byte offset into the query.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error("SyntaxError",
              "at byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace geosir
