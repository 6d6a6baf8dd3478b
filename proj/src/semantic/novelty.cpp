#include "casino/semantic/novelty.hpp"

#include <algorithm>
#include <set>

#include "casino/semantic/tokenize.hpp"

namespace casino::semantic {

namespace {

std::set<std::string> token_set(std::string_view text) {
  auto words = word_tokens(text);
  return {words.begin(), words.end()};
}

double set_jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t inter = 0;
  for (const auto& t : a) inter += b.contains(t);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

double title_jaccard(std::string_view a, std::string_view b) { return set_jaccard(token_set(a), token_set(b)); }

double title_novelty(std::string_view title, std::span<const std::string> prior_titles) {
  if (prior_titles.empty()) return 1.0;
  const auto mine = token_set(title);
  double best = 0.0;
  for (const std::string& p : prior_titles) best = std::max(best, set_jaccard(mine, token_set(p)));
  return 1.0 - best;
}

}  // namespace casino::semantic
