#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "casino/data/dataset.hpp"
#include "casino/spatial/index.hpp"

namespace casino::spatial {

inline constexpr double kDefaultNeighborhoodRadiusM = 100.0;
inline constexpr double kDefaultCompetitionRadiusM = 1.5 * kMetersPerMile;  // 2414.016 m
inline constexpr double kLogClampEpsilon = 1e-9;
inline constexpr std::uint32_t kNoCategory = 0xffffffffu;

struct SpatialConfig {
  double neighborhood_radius_m = kDefaultNeighborhoodRadiusM;  // r
  double competition_radius_m = kDefaultCompetitionRadiusM;    // R

  /// Throws ConfigError unless 0 < r < R.
  void validate() const;
};

/// Index over events, id = event position in `d`, tag = position of the event's
/// category in `categories` (kNoCategory when absent).
SpatialIndex build_event_index(const Dataset& d, std::span<const std::string> categories, double cell_radius_m);

/// N(e, r): indexed points strictly within r of `center`, excluding `exclude_id`.
std::size_t neighborhood_count(const SpatialIndex& idx, GeoPoint center, double r,
                               std::optional<std::size_t> exclude_id = std::nullopt);
/// N_c(e, r) for the category with tag `category`.
std::size_t neighborhood_count_by_category(const SpatialIndex& idx, GeoPoint center, double r, std::uint32_t category,
                                           std::optional<std::size_t> exclude_id = std::nullopt);
/// N_c(e, r) for every category tag in [0, n_categories).
std::vector<std::size_t> category_counts(const SpatialIndex& idx, GeoPoint center, double r, std::size_t n_categories,
                                         std::optional<std::size_t> exclude_id = std::nullopt);

struct AttrValue {
  double value = 1.0;
  bool degenerate = false;
};

/// Attr(C_a, C_b) over the events of `train`, evaluated directly for one pair.
AttrValue attractiveness(const Dataset& train, std::string_view category_a, std::string_view category_b, double r);

/// Pairwise category attraction plus the per-anchor-category neighborhood
/// baselines used by location quality.
class AttractivenessMatrix {
 public:
  AttractivenessMatrix() = default;
  AttractivenessMatrix(std::vector<std::string> categories, double radius_m, std::vector<double> attr,
                       std::vector<double> baseline, std::vector<char> degenerate);

  std::span<const std::string> categories() const noexcept { return categories_; }
  double radius_m() const noexcept { return radius_m_; }
  std::size_t size() const noexcept { return categories_.size(); }
  std::optional<std::size_t> index_of(std::string_view category) const;

  /// Attr(C_a, C_b).
  double attr(std::size_t a, std::size_t b) const { return attr_[a * size() + b]; }
  bool degenerate(std::size_t a, std::size_t b) const { return degenerate_[a * size() + b] != 0; }
  /// Mean of N_c(., r) over training events whose category is `anchor`.
  double baseline(std::size_t anchor, std::size_t c) const { return baseline_[anchor * size() + c]; }

  std::span<const double> attr_values() const noexcept { return attr_; }
  std::span<const double> baseline_values() const noexcept { return baseline_; }
  std::span<const char> degenerate_flags() const noexcept { return degenerate_; }

 private:
  std::vector<std::string> categories_;
  double radius_m_ = kDefaultNeighborhoodRadiusM;
  std::vector<double> attr_;
  std::vector<double> baseline_;
  std::vector<char> degenerate_;
};

AttractivenessMatrix build_attractiveness_matrix(const Dataset& train, double r, unsigned workers = 1);

struct FeatureValue {
  double value = 0.0;
  bool flagged = false;  // a degenerate input was skipped or defaulted
};

/// Location quality: sum over categories c != C_e of
/// log(max(Attr(c, C_e), eps)) * (N_c(e, r) - baseline[C_e][c]).
/// `event_idx` must be built with the matrix's category list.
FeatureValue location_quality(GeoPoint venue, std::string_view category, const AttractivenessMatrix& m,
                              const SpatialIndex& event_idx, std::optional<std::size_t> exclude_id = std::nullopt);

}  // namespace casino::spatial
