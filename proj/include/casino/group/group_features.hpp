#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "casino/data/dataset.hpp"

namespace casino::group {

/// p_u for each active member u of a group: u's share of the group's total
/// training attendance. Entries follow the order of first attendance.
struct AttendanceDistribution {
  std::vector<std::pair<std::string, double>> probabilities;
};

enum class EntropyMode {
  kAttendanceShare,  // p_u = events u attended / total attendance (default)
  kLiteralScalar,    // p = |union U_e| / sum |U_e| for every listed member
};

/// Throws Error("empty attendance") when the group has no training RSVPs.
AttendanceDistribution attendance_distribution(const Dataset& train, std::string_view group_id);

/// -sum p ln p.
double group_entropy(const AttendanceDistribution& d);

/// The scalar variant: -|U_g| * p ln p with p = |union U_e| / sum |U_e|.
double literal_group_entropy(const Dataset& train, std::string_view group_id);

/// Share of the user's attended training events whose category is the group's.
/// Throws Error when the user attended nothing.
double user_loyalty(const Dataset& train, std::string_view user_id, std::string_view group_id);

/// Mean user_loyalty over active members (attended >= 1 of the group's events).
/// Throws Error when the group has no active members.
double group_loyalty(const Dataset& train, std::string_view group_id);

/// User positions (in `train`) that attended at least one of the group's events,
/// ordered by user position.
std::vector<std::size_t> active_members(const Dataset& train, std::size_t group);

struct GroupFeatures {
  double entropy = 0.0;
  double loyalty = 0.0;
  bool cold_start = false;  // no training attendance
};

/// Entropy and loyalty for every group of `train`, indexed by group position.
std::vector<GroupFeatures> compute_group_features(const Dataset& train, EntropyMode mode = EntropyMode::kAttendanceShare);

}  // namespace casino::group
