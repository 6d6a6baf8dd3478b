#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "casino/data/dataset.hpp"
#include "casino/data/geo.hpp"
#include "casino/data/io.hpp"
#include "casino/data/preprocess.hpp"
#include "casino/errors.hpp"
#include "support/builder.hpp"

using namespace casino;
using casino::testing::DatasetBuilder;

namespace {

DatasetBuilder two_groups() {
  DatasetBuilder b;
  b.user("a").user("b").user("c").user("d");
  b.group("g1", "tech", "a", {"a", "b", "c"});
  b.group("g2", "hiking", "d", {"d", "b"});
  const Timestamp day = kSecondsPerDay;
  for (int k = 0; k < 10; ++k) b.event("t" + std::to_string(k), "g1", 100 * day + k * day);
  b.event("h0", "g2", 100 * day);
  b.rsvp("t0", "c", 100 * day - 10).rsvp("t0", "a", 100 * day - 10).rsvp("t0", "b", 100 * day - 50);
  b.rsvp("t1", "a", 101 * day - 5);
  b.rsvp("h0", "d", 100 * day - 5);
  return b;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("casino_core_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Haversine, OneDegreeOfLongitudeOnTheEquator) {
  const double expected = kEarthRadiusMeters * std::numbers::pi / 180.0;
  EXPECT_NEAR(haversine_m({0, 0}, {0, 1}), expected, 1e-6);
  EXPECT_NEAR(haversine_m({0, 0}, {0, 1}), 111194.9, 0.1);
}

TEST(Haversine, SymmetricAndZeroOnSelf) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lat(-89, 89), lon(-180, 180);
  for (int i = 0; i < 200; ++i) {
    GeoPoint a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)};
    EXPECT_DOUBLE_EQ(haversine_m(a, b), haversine_m(b, a));
    EXPECT_EQ(haversine_m(a, a), 0.0);
    EXPECT_LE(haversine_m(a, b), std::numbers::pi * kEarthRadiusMeters + 1e-6);
  }
}

TEST(GeoPoint, Validity) {
  EXPECT_TRUE(is_valid({90, 180}));
  EXPECT_FALSE(is_valid({90.5, 0}));
  EXPECT_FALSE(is_valid({0, -181}));
  EXPECT_FALSE(is_valid({std::nan(""), 0}));
}

TEST(Dataset, CrossLinksAndRsvpOrder) {
  const Dataset d = two_groups().build();
  EXPECT_EQ(d.categories().size(), 2u);
  EXPECT_EQ(d.categories()[0], "hiking");
  const auto t0 = *d.event_index("t0");
  ASSERT_EQ(d.attendee_count(t0), 3u);
  // b first by time, then a before c on the tie.
  std::vector<std::string> order;
  for (std::size_t r : d.event_rsvps(t0)) order.push_back(d.users()[d.rsvp_user(r)].id);
  EXPECT_EQ(order, (std::vector<std::string>{"b", "a", "c"}));
  EXPECT_TRUE(d.is_member(*d.user_index("b"), *d.group_index("g2")));
  EXPECT_FALSE(d.is_member(*d.user_index("c"), *d.group_index("g2")));
  EXPECT_EQ(d.group_events(*d.group_index("g1")).size(), 10u);
}

TEST(Dataset, ReportsEveryOffender) {
  std::vector<User> users{{"a", {40, -74}, {"g"}}, {"a", {95, 0}, {"g"}}};
  std::vector<Group> groups{{"g", "tech", "zz", {"a"}}};
  std::vector<Event> events{{"e", "nope", {40, -74}, 100, 200, "t", "d"}};
  std::vector<Rsvp> rsvps{{"e", "a", 50}, {"x", "a", 150}};
  try {
    Dataset::build(users, groups, events, rsvps);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    // duplicate user, bad coords, organizer not member, unknown group, announce > start,
    // unknown event on an rsvp, plus the duplicate membership listing.
    EXPECT_GE(e.offenders().size(), 6u);
  }
}

TEST(Dataset, RsvpOutsideWindowRejected) {
  auto b = DatasetBuilder();
  b.user("a").group("g", "tech", "a", {"a"}).event("e", "g", 1000, {40, -74}, "t", 500).rsvp("e", "a", 1001);
  EXPECT_THROW(b.build(), ValidationError);
}

TEST(Io, RoundTrip) {
  const Dataset d = two_groups().build();
  const auto dir = scratch_dir("roundtrip");
  write_dataset(d, DatasetPaths::in_directory(dir));
  EXPECT_EQ(load_dataset(DatasetPaths::in_directory(dir)), d);
}

TEST(Io, MissingFileIsConfigError) {
  const auto dir = scratch_dir("missing");
  try {
    load_dataset(DatasetPaths::in_directory(dir));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("users.jsonl"), std::string::npos);
  }
}

TEST(Io, MalformedLineNamesFileAndLine) {
  const Dataset d = two_groups().build();
  const auto dir = scratch_dir("malformed");
  write_dataset(d, DatasetPaths::in_directory(dir));
  std::ofstream(dir / "events.jsonl", std::ios::app) << "{\"event_id\": 3\n";
  try {
    load_dataset(DatasetPaths::in_directory(dir));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("events.jsonl:12"), std::string::npos) << e.what();
  }
}

TEST(Preprocess, FilterDropsSmallGroups) {
  const Dataset d = two_groups().build();
  const Dataset f = filter_inactive_groups(d, 5);
  EXPECT_EQ(f.groups().size(), 1u);
  EXPECT_EQ(f.events().size(), 10u);
  EXPECT_EQ(f.users().size(), 4u);
  EXPECT_EQ(f.rsvps().size(), 4u);
  EXPECT_EQ(f.find_user("d")->groups.size(), 0u);
  EXPECT_THROW(filter_inactive_groups(d, 0), ConfigError);
}

TEST(Preprocess, SplitSizes) {
  const SplitSpec s;
  EXPECT_EQ(split_sizes(10, s), (SplitSizes{8, 1, 1}));
  EXPECT_EQ(split_sizes(40, s), (SplitSizes{32, 4, 4}));
  EXPECT_EQ(split_sizes(2, s), (SplitSizes{2, 0, 0}));
  EXPECT_EQ(split_sizes(7, s), (SplitSizes{5, 0, 2}));
  EXPECT_THROW((SplitSpec{0.5, 0.5, 0.5}.validate()), ConfigError);
  EXPECT_THROW((SplitSpec{1.2, -0.1, -0.1}.validate()), ConfigError);
}

TEST(Preprocess, SplitIsChronologicalPerGroup) {
  const Dataset d = two_groups().build();
  const DatasetSplit s = split_per_group(d, {});
  EXPECT_EQ(s.train.events().size(), 9u);  // 8 of g1 plus the lone g2 event
  EXPECT_EQ(s.val.events().size(), 1u);
  EXPECT_EQ(s.test.events().size(), 1u);
  EXPECT_EQ(s.val.events()[0].id, "t8");
  EXPECT_EQ(s.test.events()[0].id, "t9");
}

TEST(Preprocess, SplitPartitionsEventsProperty) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    DatasetBuilder b;
    b.user("o");
    const int groups = 1 + static_cast<int>(rng() % 4);
    for (int g = 0; g < groups; ++g) {
      b.group("g" + std::to_string(g), "c" + std::to_string(g % 2), "o", {"o"});
      const int n = static_cast<int>(rng() % 25);
      for (int k = 0; k < n; ++k)
        b.event("e" + std::to_string(g) + "_" + std::to_string(k), "g" + std::to_string(g),
                1000000 + static_cast<Timestamp>(rng() % 100000));
    }
    const Dataset d = b.build();
    const DatasetSplit s = split_per_group(d, {});
    ASSERT_EQ(s.train.events().size() + s.val.events().size() + s.test.events().size(), d.events().size());
    for (std::size_t gi = 0; gi < d.groups().size(); ++gi) {
      const std::string& gid = d.groups()[gi].id;
      Timestamp last_train = std::numeric_limits<Timestamp>::min();
      for (const auto& e : s.train.events())
        if (e.group_id == gid) last_train = std::max(last_train, e.start_time);
      for (const Dataset* later : {&s.val, &s.test})
        for (const auto& e : later->events())
          if (e.group_id == gid) EXPECT_GE(e.start_time, last_train);
    }
  }
}

TEST(Preprocess, RelativePopularity) {
  const Dataset d = two_groups().build();
  const CategoryStats stats = category_averages(d);
  // tech: 3 + 1 + 0 * 8 attendees over 10 events.
  EXPECT_DOUBLE_EQ(stats.average("tech"), 0.4);
  EXPECT_DOUBLE_EQ(relative_popularity(d, *d.event_index("t0"), stats), 3 / 0.4);
  EXPECT_DOUBLE_EQ(relative_popularity(d, *d.event_index("h0"), stats), 1.0);
  EXPECT_THROW(stats.average("music"), Error);
}

TEST(Preprocess, CountsOfEmptyDataset) {
  EXPECT_EQ(counts(Dataset{}), (DatasetCounts{0, 0, 0, 0}));
}
