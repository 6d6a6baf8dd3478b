#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace casino::semantic {

inline constexpr double kNegationFactor = -0.74;
inline constexpr std::size_t kNegationWindow = 3;

/// Token valences plus the negation and booster rules of the scorer.
class SentimentLexicon {
 public:
  /// Empty valence table with the built-in negation and booster lists.
  SentimentLexicon();

  /// Reads "token<TAB>valence" lines; '#' starts a comment line.
  static SentimentLexicon load(const std::filesystem::path& path);

  void set_valence(std::string token, double valence);
  void set_booster(std::string token, double multiplier);
  void add_negation(std::string token);

  std::optional<double> valence(std::string_view token) const;
  std::optional<double> booster(std::string_view token) const;
  bool is_negation(std::string_view token) const;
  std::size_t size() const noexcept { return valence_.size(); }

  /// Same lexicon with every valence negated.
  SentimentLexicon flipped() const;

 private:
  std::unordered_map<std::string, double> valence_;
  std::unordered_map<std::string, double> booster_;
  std::unordered_set<std::string> negation_;
};

struct SentimentScores {
  double neg = 0.0;
  double neu = 1.0;
  double pos = 0.0;
};

/// Lexicon/rule scorer. Each lexicon word's valence is multiplied by every
/// booster and flipped by kNegationFactor for a negation among the preceding
/// kNegationWindow tokens. neg and pos are the shares of negative and positive
/// valence mass; every non-punctuation token without valence contributes one
/// unit of neutral mass. Text without any mass scores (0, 1, 0).
SentimentScores sentiment_scores(std::string_view text, const SentimentLexicon& lex);

}  // namespace casino::semantic
