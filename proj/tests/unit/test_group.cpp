#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "casino/errors.hpp"
#include "casino/group/group_features.hpp"
#include "support/builder.hpp"

using namespace casino;
using namespace casino::group;
using casino::testing::DatasetBuilder;

namespace {

constexpr Timestamp kT0 = 1700000000;

// Group "g" (category "a") with n members, each attending exactly one event.
Dataset uniform_group(int n) {
  DatasetBuilder b;
  std::vector<std::string> members;
  for (int i = 0; i < n; ++i) {
    b.user("u" + std::to_string(i));
    members.push_back("u" + std::to_string(i));
  }
  b.group("g", "a", "u0", members);
  for (int i = 0; i < n; ++i) {
    b.event("e" + std::to_string(i), "g", kT0 + i * kSecondsPerDay);
    b.rsvp("e" + std::to_string(i), "u" + std::to_string(i), kT0 + i * kSecondsPerDay - 100);
  }
  return b.build();
}

}  // namespace

TEST(GroupEntropy, UniformAttendanceGivesLogN) {
  for (int n : {1, 2, 3, 7, 16, 50}) {
    Dataset d = uniform_group(n);
    const double h = group_entropy(attendance_distribution(d, "g"));
    EXPECT_NEAR(h, std::log(static_cast<double>(n)), 1e-12) << n;
  }
}

TEST(GroupEntropy, DistributionSharesMatchCounts) {
  DatasetBuilder b;
  b.user("x").user("y").user("z");
  b.group("g", "a", "x", {"x", "y", "z"});
  b.event("e1", "g", kT0).event("e2", "g", kT0 + kSecondsPerDay);
  b.rsvp("e1", "x", kT0 - 10).rsvp("e1", "y", kT0 - 5).rsvp("e2", "x", kT0 + 100);
  Dataset d = b.build();
  auto dist = attendance_distribution(d, "g");
  ASSERT_EQ(dist.probabilities.size(), 2u);
  EXPECT_EQ(dist.probabilities[0].first, "x");
  EXPECT_DOUBLE_EQ(dist.probabilities[0].second, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(dist.probabilities[1].second, 1.0 / 3.0);
  const double expected = -(2.0 / 3.0) * std::log(2.0 / 3.0) - (1.0 / 3.0) * std::log(1.0 / 3.0);
  EXPECT_NEAR(group_entropy(dist), expected, 1e-15);
}

TEST(GroupEntropy, EmptyAttendanceThrows) {
  DatasetBuilder b;
  b.user("x");
  b.group("g", "a", "x", {"x"});
  Dataset d = b.build();
  EXPECT_THROW(attendance_distribution(d, "g"), Error);
  EXPECT_THROW(literal_group_entropy(d, "g"), Error);
}

TEST(GroupEntropy, LiteralScalarVariant) {
  DatasetBuilder b;
  b.user("x").user("y").user("z").user("w");
  b.group("g", "a", "x", {"x", "y", "z", "w"});
  b.event("e1", "g", kT0).event("e2", "g", kT0 + kSecondsPerDay);
  b.rsvp("e1", "x", kT0 - 10).rsvp("e1", "y", kT0 - 5).rsvp("e2", "x", kT0 + 100);
  Dataset d = b.build();
  // Two distinct attendees over three RSVPs, four listed members.
  const double p = 2.0 / 3.0;
  EXPECT_NEAR(literal_group_entropy(d, "g"), -4.0 * p * std::log(p), 1e-15);
}

TEST(GroupEntropy, PropertyAgainstCountOracle) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    const int n_users = 2 + static_cast<int>(rng() % 10);
    const int n_events = 1 + static_cast<int>(rng() % 8);
    DatasetBuilder b;
    std::vector<std::string> members;
    for (int i = 0; i < n_users; ++i) {
      b.user("u" + std::to_string(i));
      members.push_back("u" + std::to_string(i));
    }
    b.group("g", "a", "u0", members);
    std::map<int, int> count;
    int total = 0;
    for (int e = 0; e < n_events; ++e) {
      const std::string eid = "e" + std::to_string(e);
      b.event(eid, "g", kT0 + e * kSecondsPerDay);
      for (int u = 0; u < n_users; ++u) {
        if (rng() % 2 == 0) continue;
        b.rsvp(eid, "u" + std::to_string(u), kT0 + e * kSecondsPerDay - 60);
        ++count[u];
        ++total;
      }
    }
    if (total == 0) continue;
    Dataset d = b.build();
    double h = 0.0;
    for (auto [u, c] : count) {
      const double p = static_cast<double>(c) / total;
      h -= p * std::log(p);
    }
    EXPECT_NEAR(group_entropy(attendance_distribution(d, "g")), h, 1e-12) << seed;
    EXPECT_LE(group_entropy(attendance_distribution(d, "g")), std::log(static_cast<double>(count.size())) + 1e-12);
  }
}

TEST(GroupLoyalty, ShareOfSameCategoryEvents) {
  DatasetBuilder b;
  b.user("x").user("y");
  b.group("g", "a", "x", {"x", "y"});
  b.group("h", "b", "x", {"x"});
  b.group("k", "a", "y", {"y"});
  b.event("e1", "g", kT0).event("e2", "h", kT0 + 1000).event("e3", "h", kT0 + 2000).event("e4", "k", kT0 + 3000);
  b.rsvp("e1", "x", kT0 - 1).rsvp("e2", "x", kT0).rsvp("e3", "x", kT0 + 1);
  b.rsvp("e1", "y", kT0 - 1).rsvp("e4", "y", kT0);
  Dataset d = b.build();
  EXPECT_DOUBLE_EQ(user_loyalty(d, "x", "g"), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(user_loyalty(d, "y", "g"), 1.0);
  EXPECT_DOUBLE_EQ(user_loyalty(d, "x", "h"), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(group_loyalty(d, "g"), (1.0 / 3.0 + 1.0) / 2.0);
  EXPECT_DOUBLE_EQ(group_loyalty(d, "h"), 2.0 / 3.0);
}

TEST(GroupLoyalty, UserWithoutAttendanceThrows) {
  DatasetBuilder b;
  b.user("x").user("y");
  b.group("g", "a", "x", {"x", "y"});
  b.event("e1", "g", kT0);
  b.rsvp("e1", "x", kT0 - 1);
  Dataset d = b.build();
  EXPECT_THROW(user_loyalty(d, "y", "g"), Error);
  EXPECT_NO_THROW(group_loyalty(d, "g"));
}

TEST(GroupFeatures, ColdStartGroupsAreFlaggedWithZeros) {
  DatasetBuilder b;
  b.user("x").user("y");
  b.group("g", "a", "x", {"x", "y"});
  b.group("quiet", "a", "y", {"y"});
  b.event("e1", "g", kT0).event("e2", "quiet", kT0 + 10);
  b.rsvp("e1", "x", kT0 - 1).rsvp("e1", "y", kT0 - 1);
  Dataset d = b.build();
  auto f = compute_group_features(d);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_FALSE(f[0].cold_start);
  EXPECT_NEAR(f[0].entropy, std::log(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(f[0].loyalty, 1.0);
  EXPECT_TRUE(f[1].cold_start);
  EXPECT_EQ(f[1].entropy, 0.0);
  EXPECT_EQ(f[1].loyalty, 0.0);

  auto lit = compute_group_features(d, EntropyMode::kLiteralScalar);
  EXPECT_NEAR(lit[0].entropy, 0.0, 1e-15);  // p = 2/2 = 1
}

TEST(GroupFeatures, ActiveMembersAreSortedAndUnique) {
  DatasetBuilder b;
  b.user("a").user("b").user("c");
  b.group("g", "k", "a", {"a", "b", "c"});
  b.event("e1", "g", kT0).event("e2", "g", kT0 + 1000);
  b.rsvp("e1", "c", kT0 - 2).rsvp("e1", "a", kT0 - 1).rsvp("e2", "c", kT0);
  Dataset d = b.build();
  EXPECT_EQ(active_members(d, 0), (std::vector<std::size_t>{0, 2}));
}
