#pragma once

namespace casino {

inline constexpr double kEarthRadiusMeters = 6371000.0;
inline constexpr double kMetersPerMile = 1609.344;

struct GeoPoint {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool is_valid(GeoPoint p) noexcept;

/// Great-circle distance in meters on a sphere of radius kEarthRadiusMeters.
double haversine_m(GeoPoint a, GeoPoint b) noexcept;

}  // namespace casino
