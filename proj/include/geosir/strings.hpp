#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace geosir {

// Splits on every occurrence of `sep`; keeps empty fields.
std::vector<std::string_view> split(std::string_view s, char sep);

std::string_view trim(std::string_view s) noexcept;

// Whole-string parses; nullopt on any trailing garbage.
std::optional<std::int64_t> parse_int(std::string_view s) noexcept;
std::optional<double> parse_double(std::string_view s) noexcept;

// Shortest decimal form that parses back to exactly `v`.
std::string format_double(double v);

// Fixed-point with `digits` decimals.
std::string format_fixed(double v, int digits);

std::string ascii_lower(std::string_view s);

// Byte offset of the first malformed UTF-8 sequence, if any.
std::optional<std::size_t> first_invalid_utf8(std::string_view s) noexcept;

// 64-bit FNV-1a, used for build stamps.
std::uint64_t fnv1a64(std::string_view data) noexcept;
std::string hex64(std::uint64_t v);

}  // namespace geosir
