#include "casino/spatial/competitiveness.hpp"

#include <algorithm>

namespace casino::spatial {

UserHomeIndex::UserHomeIndex(const Dataset& d, double cell_radius_m) {
  std::vector<IndexedPoint> pts;
  pts.reserve(d.users().size());
  user_categories_.resize(d.users().size());
  for (std::size_t ui = 0; ui < d.users().size(); ++ui) {
    pts.push_back({ui, d.users()[ui].home, 0});
    auto& cats = user_categories_[ui];
    for (std::size_t gi : d.user_groups(ui)) cats.push_back(d.groups()[gi].category);
    std::sort(cats.begin(), cats.end());
    cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
  }
  index_ = SpatialIndex(std::move(pts), cell_radius_m);
}

bool UserHomeIndex::in_category(std::size_t user, std::string_view category) const {
  const auto& cats = user_categories_[user];
  return std::binary_search(cats.begin(), cats.end(), category);
}

FeatureValue location_competitiveness(GeoPoint venue, std::string_view category, const UserHomeIndex& users,
                                      double radius_m) {
  std::size_t all = 0, same = 0;
  users.index().for_each_within(venue, radius_m, [&](const IndexedPoint& p) {
    ++all;
    if (users.in_category(p.id, category)) ++same;
  });
  if (all == 0) return {0.0, true};
  return {-static_cast<double>(same) / static_cast<double>(all), false};
}

}  // namespace casino::spatial
