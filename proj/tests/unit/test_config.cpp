#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "casino/config/run_config.hpp"
#include "casino/errors.hpp"

using namespace casino;
using namespace casino::config;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p;
}

struct EnvGuard {
  EnvGuard() { unsetenv(kConfigEnvVar); }
  ~EnvGuard() { unsetenv(kConfigEnvVar); }
};

}  // namespace

TEST(RunConfig, Defaults) {
  EnvGuard env;
  RunConfig c = load_run_config(std::nullopt, {});
  EXPECT_NEAR(c.pipeline.features.spatial.competition_radius_m, 1.5 * 1609.344, 1e-9);
  EXPECT_EQ(c.pipeline.features.eta, 0.01);
  EXPECT_EQ(c.pipeline.min_group_events, 15u);
  EXPECT_EQ(c.pipeline.split.train_frac, 0.8);
  EXPECT_EQ(c.pipeline.stats.seed_horizon, 86400);
  EXPECT_TRUE(std::filesystem::exists(c.lexicon));
  EXPECT_TRUE(std::filesystem::exists(c.pos_dictionary));
  EXPECT_EQ(c.synth.n_events, 2000u);
  EXPECT_EQ(c.synth.n_groups, 50u);
  EXPECT_EQ(c.synth.n_categories, 5u);
  EXPECT_EQ(c.synth.noise_sd, 0.1);
  EXPECT_NEAR(c.synth.lambda_same, 3.0 * c.synth.lambda_cross, 1e-15);
}

TEST(RunConfig, IniThenOverrides) {
  EnvGuard env;
  auto path = write_temp("casino_cfg_a.ini",
                         "[spatial]\ncompetition_radius_m = 3000\n\n[temporal]\neta = 0.05\n\n"
                         "[cart]\nmax_depth_grid = 2, 4\nmin_samples_leaf_grid =\n");
  RunConfig c = load_run_config(path, {"temporal.eta=0.1", "synth.seed=9"});
  EXPECT_EQ(c.pipeline.features.spatial.competition_radius_m, 3000.0);
  EXPECT_EQ(c.pipeline.features.eta, 0.1);
  EXPECT_EQ(c.synth.seed, 9u);
  EXPECT_EQ(c.pipeline.cart_depth_grid, (std::vector<std::size_t>{2, 4}));
  EXPECT_TRUE(c.pipeline.cart_leaf_grid.empty());
}

TEST(RunConfig, EnvironmentVariableNamesTheFile) {
  EnvGuard env;
  auto path = write_temp("casino_cfg_env.ini", "[data]\nmin_group_events = 3\n");
  setenv(kConfigEnvVar, path.c_str(), 1);
  EXPECT_EQ(load_run_config(std::nullopt, {}).pipeline.min_group_events, 3u);
  // An explicit path wins over the variable.
  auto other = write_temp("casino_cfg_env2.ini", "[data]\nmin_group_events = 4\n");
  EXPECT_EQ(load_run_config(other, {}).pipeline.min_group_events, 4u);
}

TEST(RunConfig, Errors) {
  EnvGuard env;
  EXPECT_THROW(load_run_config(std::nullopt, {"spatial.bogus=1"}), ConfigError);
  EXPECT_THROW(load_run_config(std::nullopt, {"temporal.eta=fast"}), ConfigError);
  EXPECT_THROW(load_run_config(std::nullopt, {"noequals"}), ConfigError);
  EXPECT_THROW(load_run_config(std::nullopt, {"split.train=0.9"}), ConfigError);
  EXPECT_THROW(load_run_config(std::nullopt, {"spatial.neighborhood_radius_m=5000"}), ConfigError);
  EXPECT_THROW(load_run_config(std::nullopt, {"group.entropy_mode=other"}), ConfigError);
  EXPECT_THROW(load_run_config(std::nullopt, {"cart.min_samples_leaf_grid=5,0"}), ConfigError);
  EXPECT_THROW(load_run_config(std::nullopt, {"data.min_group_events=-2"}), ConfigError);
  EXPECT_THROW(load_run_config("/nonexistent/casino.ini", {}), ConfigError);
  auto bad = write_temp("casino_cfg_bad.ini", "[spatial]\nno_such_key = 1\n");
  EXPECT_THROW(load_run_config(bad, {}), ConfigError);
  auto broken = write_temp("casino_cfg_broken.ini", "[spatial\nx = 1\n");
  EXPECT_THROW(load_run_config(broken, {}), ConfigError);
}

TEST(RunConfig, IniRoundTrip) {
  EnvGuard env;
  RunConfig c = load_run_config(std::nullopt, {"temporal.eta=0.037", "spatial.competition_radius_m=2718.28",
                                               "group.entropy_mode=literal", "cart.max_depth_grid=3,5,7",
                                               "influence.restrict_to_seed_population=false", "synth.beta=0.21"});
  auto path = write_temp("casino_cfg_rt.ini", to_ini(c));
  RunConfig back = load_run_config(path, {});
  EXPECT_EQ(back.to_json().dump(), c.to_json().dump());
}

TEST(RunConfig, EveryKeyIsEchoed) {
  RunConfig c;
  const auto j = c.to_json();
  for (const std::string& key : known_keys()) {
    const auto dot = key.find('.');
    EXPECT_TRUE(j.contains(key.substr(0, dot)) && j.at(key.substr(0, dot)).contains(key.substr(dot + 1))) << key;
  }
}
