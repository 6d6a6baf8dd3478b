#include "casino/semantic/sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "casino/errors.hpp"
#include "casino/semantic/tokenize.hpp"

namespace casino::semantic {

SentimentLexicon::SentimentLexicon() {
  for (const char* t : {"not", "no", "never", "none", "nobody", "nothing", "neither", "nor", "nowhere", "cannot",
                        "without", "don't", "doesn't", "didn't", "isn't", "aren't", "wasn't", "weren't", "won't",
                        "wouldn't", "shouldn't", "couldn't", "can't", "haven't", "hasn't", "hadn't", "ain't"})
    negation_.insert(t);
  for (auto [t, m] : {std::pair{"very", 1.3}, {"really", 1.3}, {"extremely", 1.5}, {"so", 1.2},
                      {"super", 1.4}, {"incredibly", 1.5}, {"absolutely", 1.4}, {"totally", 1.3},
                      {"most", 1.2}, {"highly", 1.3}, {"truly", 1.3}, {"slightly", 0.7},
                      {"somewhat", 0.8}, {"barely", 0.6}, {"kinda", 0.8}, {"marginally", 0.7}})
    booster_.emplace(t, m);
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sentiment lexicon: " + path.string());
  SentimentLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected token<TAB>valence");
    }
    std::string token = line.substr(0, tab);
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    double v = 0.0;
    std::istringstream vs(line.substr(tab + 1));
    if (!(vs >> v))
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": bad valence");
    lex.set_valence(std::move(token), v);
  }
  return lex;
}

void SentimentLexicon::set_valence(std::string token, double valence) { valence_[std::move(token)] = valence; }
void SentimentLexicon::set_booster(std::string token, double multiplier) { booster_[std::move(token)] = multiplier; }
void SentimentLexicon::add_negation(std::string token) { negation_.insert(std::move(token)); }

std::optional<double> SentimentLexicon::valence(std::string_view token) const {
  auto it = valence_.find(std::string(token));
  if (it == valence_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> SentimentLexicon::booster(std::string_view token) const {
  auto it = booster_.find(std::string(token));
  if (it == booster_.end()) return std::nullopt;
  return it->second;
}

bool SentimentLexicon::is_negation(std::string_view token) const { return negation_.contains(std::string(token)); }

SentimentLexicon SentimentLexicon::flipped() const {
  SentimentLexicon out = *this;
  for (auto& [t, v] : out.valence_) v = -v;
  return out;
}

SentimentScores sentiment_scores(std::string_view text, const SentimentLexicon& lex) {
  const auto tokens = tokenize(text);
  double pos = 0.0, neg = 0.0, neu = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (is_punctuation(t)) continue;
    auto v = lex.valence(t);
    if (!v || *v == 0.0) {
      neu += 1.0;
      continue;
    }
    double score = *v;
    const std::size_t lo = i >= kNegationWindow ? i - kNegationWindow : 0;
    bool negated = false;
    for (std::size_t j = lo; j < i; ++j) {
      if (auto m = lex.booster(tokens[j])) score *= *m;
      if (lex.is_negation(tokens[j])) negated = true;
    }
    if (negated) score *= kNegationFactor;
    if (score > 0.0) pos += score;
    else if (score < 0.0) neg -= score;
    else neu += 1.0;
  }
  const double total = pos + neg + neu;
  if (total <= 0.0) return {};
  return {neg / total, neu / total, pos / total};
}

}  // namespace casino::semantic
