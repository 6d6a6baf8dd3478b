#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace casino::semantic {

/// Lowercases ASCII letters and splits on whitespace. Every ASCII punctuation
/// character becomes its own token, except apostrophes and hyphens joining
/// two word characters ("don't", "meet-up"). Bytes >= 0x80 count as word
/// characters so UTF-8 text passes through intact.
std::vector<std::string> tokenize(std::string_view text);

/// True for single-character punctuation tokens produced by tokenize().
bool is_punctuation(std::string_view token);

/// Tokens that are not punctuation.
std::vector<std::string> word_tokens(std::string_view text);

}  // namespace casino::semantic
