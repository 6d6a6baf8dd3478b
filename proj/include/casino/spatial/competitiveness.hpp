#pragma once

#include <string_view>
#include <vector>

#include "casino/data/dataset.hpp"
#include "casino/spatial/attractiveness.hpp"
#include "casino/spatial/index.hpp"

namespace casino::spatial {

/// Users indexed by home location, with the set of categories each user's
/// joined groups belong to.
class UserHomeIndex {
 public:
  UserHomeIndex() = default;
  UserHomeIndex(const Dataset& d, double cell_radius_m);

  const SpatialIndex& index() const noexcept { return index_; }
  /// True iff user (position in the source dataset) joined a group of `category`.
  bool in_category(std::size_t user, std::string_view category) const;

 private:
  SpatialIndex index_;
  std::vector<std::vector<std::string>> user_categories_;  // sorted per user
};

/// -(users within R in a group of `category`) / (users within R);
/// 0 with the flag raised when nobody lives within R.
FeatureValue location_competitiveness(GeoPoint venue, std::string_view category, const UserHomeIndex& users,
                                      double radius_m);

}  // namespace casino::spatial
