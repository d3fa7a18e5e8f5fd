#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace geosir {

// Unicode lowercase with diacritics stripped (NFD, drop non-spacing marks,
// NFC). Idempotent. Input is UTF-8; invalid sequences become U+FFFD.
std::string fold(std::string_view text);

// Folded text split on every non-alphanumeric code point; no empty tokens.
std::vector<std::string> tokenize(std::string_view text);

// Lookup key for names and lexicon terms: tokens joined by single spaces,
// so "São-Paulo", "sao paulo" and "SAO  PAULO" share one key.
std::string name_key(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace geosir
