#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace casino::semantic {

enum class PosTag : std::size_t {
  kAdjective,
  kAdposition,
  kAdverb,
  kConjunction,
  kDeterminer,
  kNoun,
  kNumeral,
  kParticle,
  kPronoun,
  kVerb,
  kPunctuation,
};

inline constexpr std::size_t kPosTagCount = 11;

std::string_view to_string(PosTag tag);
/// Accepts the lowercase names from to_string() and the usual universal-tagset
/// abbreviations (ADJ, ADP, ADV, CONJ, DET, NOUN, NUM, PRT, PRON, VERB, PUNCT, ".").
std::optional<PosTag> parse_pos_tag(std::string_view name);

/// Dictionary lookup, then numerals, then ordered suffix rules, then noun.
/// Punctuation tokens are always tagged as punctuation.
class PosTagger {
 public:
  /// Empty dictionary with the built-in suffix rules.
  PosTagger();

  /// Reads "token<TAB>tag" lines; '#' starts a comment line.
  static PosTagger load(const std::filesystem::path& path);

  void add_word(std::string token, PosTag tag);
  /// Replaces the suffix rules; earlier rules win.
  void set_suffix_rules(std::vector<std::pair<std::string, PosTag>> rules);

  PosTag tag(std::string_view token) const;
  std::size_t dictionary_size() const noexcept { return dictionary_.size(); }

 private:
  std::unordered_map<std::string, PosTag> dictionary_;
  std::vector<std::pair<std::string, PosTag>> suffix_rules_;
};

using PosFlags = std::array<double, kPosTagCount>;

/// 1.0 at each tag carried by at least one title token, else 0.0.
PosFlags pos_presence(std::string_view title, const PosTagger& tagger);

}  // namespace casino::semantic
