#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "casino/errors.hpp"
#include "casino/influence/propagation.hpp"
#include "casino/predictor/metrics.hpp"
#include "casino/predictor/pipeline.hpp"
#include "casino/synth/generator.hpp"

using namespace casino;
using namespace casino::synth;

namespace {

SynthConfig small(std::uint64_t seed = 1) {
  SynthConfig c;
  c.seed = seed;
  c.n_events = 400;
  c.n_groups = 20;
  c.n_communities = 5;
  return c;
}

std::map<std::string, const EventTruth*> by_id(const GroundTruth& t) {
  std::map<std::string, const EventTruth*> m;
  for (const auto& e : t.events) m[e.event_id] = &e;
  return m;
}

predictor::PipelineConfig fast_pipeline() {
  predictor::PipelineConfig p;
  p.cart_depth_grid.clear();
  p.cart_leaf_grid.clear();
  p.workers = 1;
  return p;
}

}  // namespace

TEST(Synth, DeterministicInSeed) {
  auto a = generate(small(4));
  auto b = generate(small(4));
  EXPECT_TRUE(a.dataset == b.dataset);
  ASSERT_EQ(a.truth.events.size(), b.truth.events.size());
  for (std::size_t i = 0; i < a.truth.events.size(); ++i)
    EXPECT_EQ(a.truth.events[i].to_json().dump(), b.truth.events[i].to_json().dump());
  auto c = generate(small(5));
  EXPECT_FALSE(a.dataset == c.dataset);
}

TEST(Synth, CountsFollowTheConfig) {
  for (std::uint64_t seed : {1, 2, 3}) {
    SynthConfig cfg = small(seed);
    auto out = generate(cfg);
    auto n = counts(out.dataset);
    EXPECT_EQ(n.events, cfg.n_events);
    EXPECT_EQ(n.groups, cfg.n_groups);
    EXPECT_EQ(n.users, cfg.n_communities * cfg.core_pool_size + cfg.n_groups * cfg.fillers_per_group);
    EXPECT_EQ(out.dataset.categories().size(), cfg.n_categories);
    std::size_t attendees = 0;
    for (const auto& t : out.truth.events) attendees += t.attendees;
    EXPECT_EQ(n.rsvps, attendees);
  }
}

TEST(Synth, DecompositionIsExact) {
  auto out = generate(small(2));
  const auto& d = out.dataset;
  for (std::size_t ei = 0; ei < d.events().size(); ++ei) {
    const EventTruth& t = out.truth.events[ei];
    ASSERT_EQ(t.event_id, d.events()[ei].id);
    EXPECT_EQ(d.attendee_count(ei), t.attendees);
    const double n_over_a = static_cast<double>(t.attendees) / out.truth.config.attendance_scale;
    EXPECT_NEAR(t.planted() + t.rounding, n_over_a, 1e-12);
    EXPECT_NEAR(t.popularity, t.scale * (t.planted() + t.rounding), 1e-12);
    EXPECT_NEAR(t.contextual, 0.4 * t.hot_venue + 0.3 * t.on_slot + 0.3 * t.positive_title, 1e-15);
    EXPECT_NEAR(t.influence_term, 0.15 * t.influence, 1e-15);
    EXPECT_LE(std::abs(t.rounding), 0.5 / out.truth.config.attendance_scale + 1e-15);
  }
}

TEST(Synth, PlantedInfluenceMatchesLibraryFeature) {
  for (std::uint64_t seed : {1, 7}) {
    SynthConfig cfg = small(seed);
    auto out = generate(cfg);
    predictor::PreparedData data = predictor::prepare_data(out.dataset, cfg.split, 1);
    auto stats = influence::estimate_propagation_stats(data.split.train, {cfg.seed_horizon, true});
    auto truth = by_id(out.truth);
    influence::InfluenceParams p{0.0, 0.0, cfg.lambda_same, cfg.lambda_cross, cfg.seed_horizon};
    std::size_t nonzero = 0;
    for (std::size_t ei = 0; ei < data.filtered.events().size(); ++ei) {
      const double lib = influence::event_influence_feature(data.filtered, ei, stats, p);
      const EventTruth& t = *truth.at(data.filtered.events()[ei].id);
      ASSERT_NEAR(lib, t.influence, 1e-9) << t.event_id;
      nonzero += t.influence > 0.0;
    }
    EXPECT_GT(nonzero, data.filtered.events().size() / 4);
  }
}

TEST(Synth, RsvpTimesSeparateSeedsFromFillers) {
  SynthConfig cfg = small(3);
  auto out = generate(cfg);
  const auto& d = out.dataset;
  for (std::size_t ei = 0; ei < d.events().size(); ++ei) {
    const Event& e = d.events()[ei];
    EXPECT_EQ(e.start_time - e.announce_time, cfg.announce_lead);
    std::size_t early = 0;
    for (std::size_t ri : d.event_rsvps(ei)) early += d.rsvps()[ri].rsvp_time < e.announce_time + cfg.seed_horizon;
    EXPECT_EQ(early, out.truth.events[ei].core_rsvps);
    const Group& g = d.groups()[d.group_of_event(ei)];
    ASSERT_FALSE(d.event_rsvps(ei).empty());
    const Rsvp& first = d.rsvps()[d.event_rsvps(ei)[0]];
    EXPECT_EQ(first.user_id, g.organizer_id);
    EXPECT_EQ(first.rsvp_time, e.announce_time);
  }
}

TEST(Synth, ConstantPlantWithoutDrivers) {
  SynthConfig cfg = small(6);
  cfg.noise_sd = 0.0;
  cfg.beta = 0.0;
  cfg.w_spatial = cfg.w_temporal = cfg.w_semantic = 0.0;
  auto out = generate(cfg);
  std::vector<double> pop;
  for (const auto& t : out.truth.events) {
    EXPECT_EQ(t.planted(), cfg.alpha);
    EXPECT_EQ(t.popularity, 1.0);
    pop.push_back(t.popularity);
  }
  EXPECT_THROW(predictor::r_squared(pop, pop), Error);

  auto trained = predictor::train_model(out.dataset, fast_pipeline(), semantic::SentimentLexicon{}, semantic::PosTagger{});
  for (const auto& row : trained.report.at("evaluation").at("train")) {
    EXPECT_TRUE(row.at("degenerate").get<bool>());
    EXPECT_TRUE(row.at("r2").is_null());
  }
}

TEST(Synth, GroupOffsetsAloneAreRecoveredByTheNaiveMean) {
  SynthConfig cfg = small(8);
  cfg.noise_sd = 0.0;
  cfg.beta = 0.0;
  cfg.w_spatial = cfg.w_temporal = cfg.w_semantic = 0.0;
  cfg.group_offset_sd = 0.15;
  auto out = generate(cfg);
  auto trained = predictor::train_model(out.dataset, fast_pipeline(), semantic::SentimentLexicon{}, semantic::PosTagger{});
  predictor::Predictor pred(trained.bundle, out.dataset, semantic::SentimentLexicon{}, semantic::PosTagger{}, 1);
  auto rep = pred.evaluate(SplitName::kTest, predictor::Variant::kNaiveMean);
  ASSERT_TRUE(rep.r2.has_value());
  EXPECT_NEAR(*rep.r2, 1.0, 1e-12);
}

TEST(Synth, CascadeOnlyPopularityTracksInfluence) {
  SynthConfig cfg = small(9);
  cfg.n_categories = 1;
  cfg.noise_sd = 0.0;
  cfg.w_spatial = cfg.w_temporal = cfg.w_semantic = 0.0;
  cfg.alpha = 1.0;
  cfg.beta = 0.3;
  auto out = generate(cfg);
  std::vector<double> pop, infl;
  for (const auto& t : out.truth.events) {
    pop.push_back(t.popularity);
    infl.push_back(t.influence);
  }
  EXPECT_GE(predictor::pearson(pop, infl), 0.95);
}

TEST(Synth, InfeasibleAttendanceThrows) {
  SynthConfig cfg = small(1);
  cfg.attendance_scale = 1000.0;
  EXPECT_THROW(generate(cfg), Error);
  cfg = small(1);
  cfg.alpha = -2.0;
  EXPECT_THROW(generate(cfg), Error);
}

TEST(Synth, InvalidConfigRejected) {
  SynthConfig cfg = small(1);
  cfg.n_groups = 0;
  EXPECT_THROW(generate(cfg), ConfigError);
  cfg = small(1);
  cfg.n_events = 20 * 60;  // more events per group than weeks
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small(1);
  cfg.join_prob = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Synth, PopularityNoiseDoesNotPerturbOtherStreams) {
  SynthConfig a = small(11);
  SynthConfig b = a;
  b.noise_sd = 0.05;
  auto x = generate(a);
  auto y = generate(b);
  ASSERT_EQ(x.dataset.events().size(), y.dataset.events().size());
  for (std::size_t ei = 0; ei < x.dataset.events().size(); ++ei) {
    EXPECT_EQ(x.dataset.events()[ei], y.dataset.events()[ei]);
    EXPECT_EQ(x.truth.events[ei].influence, y.truth.events[ei].influence);
    EXPECT_EQ(x.truth.events[ei].core_rsvps, y.truth.events[ei].core_rsvps);
  }
  for (std::size_t ui = 0; ui < x.dataset.users().size(); ++ui) EXPECT_EQ(x.dataset.users()[ui], y.dataset.users()[ui]);
}

TEST(Synth, DriversShiftTheMeanPlant) {
  auto out = generate(small(12));
  double hot = 0, cold = 0;
  std::size_t nh = 0, nc = 0;
  for (const auto& t : out.truth.events) {
    (t.hot_venue ? hot : cold) += t.contextual;
    (t.hot_venue ? nh : nc) += 1;
  }
  ASSERT_GT(nh, 0u);
  ASSERT_GT(nc, 0u);
  EXPECT_NEAR(hot / nh - cold / nc, 0.4, 0.1);
}
