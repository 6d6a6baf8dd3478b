#include "casino/predictor/baselines.hpp"

#include "casino/errors.hpp"

namespace casino::predictor {

NaiveMeanBaseline::NaiveMeanBaseline(const Dataset& train, const CategoryStats& stats) {
  std::map<std::string, std::pair<double, std::size_t>> by_cat;
  for (std::size_t g = 0; g < train.groups().size(); ++g) {
    const auto events = train.group_events(g);
    if (events.empty()) continue;
    const std::string& cat = train.groups()[g].category;
    if (!stats.contains(cat)) continue;
    double s = 0.0;
    for (std::size_t ei : events) {
      const double p = relative_popularity(train, ei, stats);
      s += p;
      by_cat[cat].first += p;
      ++by_cat[cat].second;
    }
    group_means_[train.groups()[g].id] = s / static_cast<double>(events.size());
  }
  for (const auto& [cat, acc] : by_cat) category_means_[cat] = acc.first / static_cast<double>(acc.second);
}

BaselinePrediction NaiveMeanBaseline::predict(std::string_view group_id, std::string_view category) const {
  if (auto it = group_means_.find(std::string(group_id)); it != group_means_.end()) return {it->second, false};
  if (auto it = category_means_.find(std::string(category)); it != category_means_.end()) return {it->second, true};
  throw Error("naive mean: no training events for group " + std::string(group_id) + " or category " +
              std::string(category));
}

nlohmann::json NaiveMeanBaseline::to_json() const {
  return {{"group_means", group_means_}, {"category_means", category_means_}};
}

NaiveMeanBaseline NaiveMeanBaseline::from_json(const nlohmann::json& j) {
  try {
    NaiveMeanBaseline b;
    b.group_means_ = j.at("group_means").get<std::map<std::string, double>>();
    b.category_means_ = j.at("category_means").get<std::map<std::string, double>>();
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("malformed baseline: ") + e.what());
  }
}

}  // namespace casino::predictor
