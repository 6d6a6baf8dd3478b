#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "casino/data/geo.hpp"

namespace casino::spatial {

struct IndexedPoint {
  std::size_t id = 0;
  GeoPoint pos;
  std::uint32_t tag = 0;  // category position for events; unused for homes
};

/// Uniform latitude/longitude bucket grid. The grid only narrows candidates;
/// every reported point satisfies haversine_m(center, p) < radius exactly.
class SpatialIndex {
 public:
  SpatialIndex() = default;
  /// `cell_radius_m` is the radius the index will mostly be queried with; it
  /// sets the cell edge. Queries with any other radius remain exact.
  SpatialIndex(std::vector<IndexedPoint> points, double cell_radius_m);

  std::size_t size() const noexcept { return points_.size(); }
  std::span<const IndexedPoint> points() const noexcept { return points_; }

  /// Calls fn(const IndexedPoint&) for each point strictly within `radius_m`.
  template <class Fn>
  void for_each_within(GeoPoint center, double radius_m, Fn&& fn) const;

  /// Ids of points strictly within `radius_m`, sorted ascending.
  std::vector<std::size_t> query(GeoPoint center, double radius_m) const;

 private:
  struct CellRange {
    long row_lo = 0, row_hi = -1;
    long col_lo = 0, col_hi = -1;  // unwrapped; reduced modulo n_cols_ when visited
    bool full_row = false;
  };
  CellRange candidate_cells(GeoPoint center, double radius_m) const;
  long row_of(double lat) const;
  long col_of(double lon) const;
  static std::uint64_t key(long row, long col) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(row)) << 32) | static_cast<std::uint32_t>(col);
  }

  std::vector<IndexedPoint> points_;
  double cell_deg_ = 1.0;
  long n_rows_ = 0;
  long n_cols_ = 0;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

template <class Fn>
void SpatialIndex::for_each_within(GeoPoint center, double radius_m, Fn&& fn) const {
  if (points_.empty() || !(radius_m > 0.0)) return;
  const CellRange r = candidate_cells(center, radius_m);
  auto visit_cell = [&](long row, long col) {
    auto it = cells_.find(key(row, col));
    if (it == cells_.end()) return;
    for (std::uint32_t pi : it->second) {
      const IndexedPoint& p = points_[pi];
      if (haversine_m(center, p.pos) < radius_m) fn(p);
    }
  };
  if (r.full_row) {
    // Polar caps and very wide queries: scan the occupied cells of the band.
    for (const auto& [k, bucket] : cells_) {
      const long row = static_cast<long>(k >> 32);
      if (row < r.row_lo || row > r.row_hi) continue;
      visit_cell(row, static_cast<long>(k & 0xffffffffu));
    }
    return;
  }
  for (long row = r.row_lo; row <= r.row_hi; ++row)
    for (long c = r.col_lo; c <= r.col_hi; ++c) visit_cell(row, ((c % n_cols_) + n_cols_) % n_cols_);
}

}  // namespace casino::spatial
