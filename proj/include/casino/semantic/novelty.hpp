#pragma once

#include <span>
#include <string>
#include <string_view>

namespace casino::semantic {

/// Jaccard similarity of the two titles' word-token sets; 0 when both are empty.
double title_jaccard(std::string_view a, std::string_view b);

/// 1 - max Jaccard against the prior titles; 1 when there are none.
double title_novelty(std::string_view title, std::span<const std::string> prior_titles);

}  // namespace casino::semantic
