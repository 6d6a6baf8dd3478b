#include "casino/semantic/tokenize.hpp"

#include <cctype>

namespace casino::semantic {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_punct(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }
bool is_word(unsigned char c) { return !is_space(c) && !is_punct(c); }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.push_back(std::move(word));
    word.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_space(c)) {
      flush();
    } else if (is_punct(c)) {
      const bool joiner = (c == '\'' || c == '-') && !word.empty() && i + 1 < text.size() &&
                          is_word(static_cast<unsigned char>(text[i + 1]));
      if (joiner) {
        word.push_back(static_cast<char>(c));
      } else {
        flush();
        out.emplace_back(1, static_cast<char>(c));
      }
    } else {
      word.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return out;
}

bool is_punctuation(std::string_view token) {
  return token.size() == 1 && is_punct(static_cast<unsigned char>(token[0]));
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text))
    if (!is_punctuation(t)) out.push_back(std::move(t));
  return out;
}

}  // namespace casino::semantic
