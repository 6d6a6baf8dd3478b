#include "casino/spatial/index.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace casino::spatial {

namespace {
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kMinCellDeg = 1e-4;
}  // namespace

SpatialIndex::SpatialIndex(std::vector<IndexedPoint> points, double cell_radius_m) : points_(std::move(points)) {
  double raw = cell_radius_m > 0.0 ? (cell_radius_m / kEarthRadiusMeters) * kRadToDeg : 1.0;
  raw = std::clamp(raw, kMinCellDeg, 90.0);
  // Columns tile the full circle exactly so longitude wrap-around is a modulo.
  n_cols_ = static_cast<long>(std::ceil(360.0 / raw));
  cell_deg_ = 360.0 / static_cast<double>(n_cols_);
  n_rows_ = static_cast<long>(std::ceil(180.0 / cell_deg_));
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const GeoPoint p = points_[i].pos;
    cells_[key(row_of(p.lat), col_of(p.lon))].push_back(static_cast<std::uint32_t>(i));
  }
}

long SpatialIndex::row_of(double lat) const {
  long r = static_cast<long>(std::floor((lat + 90.0) / cell_deg_));
  return std::clamp(r, 0L, n_rows_ - 1);
}

long SpatialIndex::col_of(double lon) const {
  long c = static_cast<long>(std::floor((lon + 180.0) / cell_deg_));
  return ((c % n_cols_) + n_cols_) % n_cols_;
}

SpatialIndex::CellRange SpatialIndex::candidate_cells(GeoPoint center, double radius_m) const {
  CellRange r;
  const double delta = radius_m / kEarthRadiusMeters;  // angular radius
  const double margin = 1e-9;
  const double dlat = delta * kRadToDeg * (1.0 + margin) + margin;
  const double lat_lo = center.lat - dlat;
  const double lat_hi = center.lat + dlat;
  r.row_lo = row_of(std::max(lat_lo, -90.0));
  r.row_hi = row_of(std::min(lat_hi, 90.0));
  if (delta >= std::numbers::pi / 2.0 || lat_lo <= -90.0 || lat_hi >= 90.0) {
    r.full_row = true;
    return r;
  }
  const double cos_phi = std::cos(center.lat * kDegToRad);
  const double s = std::sin(delta) / cos_phi;
  if (s >= 1.0) {
    r.full_row = true;
    return r;
  }
  // Widest longitude offset of a spherical cap centred at this latitude.
  const double dlon = std::asin(s) * kRadToDeg * (1.0 + margin) + margin;
  if (2.0 * dlon + cell_deg_ >= 360.0) {
    r.full_row = true;
    return r;
  }
  r.col_lo = static_cast<long>(std::floor((center.lon - dlon + 180.0) / cell_deg_));
  r.col_hi = static_cast<long>(std::floor((center.lon + dlon + 180.0) / cell_deg_));
  return r;
}

std::vector<std::size_t> SpatialIndex::query(GeoPoint center, double radius_m) const {
  std::vector<std::size_t> out;
  for_each_within(center, radius_m, [&out](const IndexedPoint& p) { out.push_back(p.id); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace casino::spatial
