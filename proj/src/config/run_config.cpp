#include "casino/config/run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <map>

#include "casino/errors.hpp"

namespace casino::config {

namespace {

using Setter = std::function<void(RunConfig&, const std::string&)>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw ConfigError("config key " + key + ": expected " + expected + ", got '" + value + "'");
}

double to_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(x)) bad_value(key, v, "a finite number");
  return x;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  Int x{};
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size()) bad_value(key, v, "an integer");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  bad_value(key, v, "true or false");
}

// Comma separated; empty text gives an empty list.
std::vector<std::size_t> to_size_list(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  const std::string t = trim(v);
  std::size_t pos = 0;
  while (!t.empty() && pos <= t.size()) {
    const auto comma = t.find(',', pos);
    const std::string item = t.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    out.push_back(to_int<std::size_t>(key, item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string entropy_mode_name(group::EntropyMode m) {
  return m == group::EntropyMode::kAttendanceShare ? "attendance_share" : "literal";
}

#define CASINO_DOUBLE(field) [](RunConfig& c, const std::string& v) { c.field = to_double(#field, v); }
#define CASINO_SIZE(field) [](RunConfig& c, const std::string& v) { c.field = to_int<std::size_t>(#field, v); }
#define CASINO_TIME(field) [](RunConfig& c, const std::string& v) { c.field = to_int<Timestamp>(#field, v); }

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"data.min_group_events", CASINO_SIZE(pipeline.min_group_events)},
      {"split.train", CASINO_DOUBLE(pipeline.split.train_frac)},
      {"split.val", CASINO_DOUBLE(pipeline.split.val_frac)},
      {"split.test", CASINO_DOUBLE(pipeline.split.test_frac)},
      {"spatial.neighborhood_radius_m", CASINO_DOUBLE(pipeline.features.spatial.neighborhood_radius_m)},
      {"spatial.competition_radius_m", CASINO_DOUBLE(pipeline.features.spatial.competition_radius_m)},
      {"temporal.eta", CASINO_DOUBLE(pipeline.features.eta)},
      {"temporal.utc_offset_s", CASINO_TIME(pipeline.features.utc_offset)},
      {"group.entropy_mode",
       [](RunConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t == "attendance_share") c.pipeline.features.entropy_mode = group::EntropyMode::kAttendanceShare;
         else if (t == "literal") c.pipeline.features.entropy_mode = group::EntropyMode::kLiteralScalar;
         else bad_value("group.entropy_mode", v, "attendance_share or literal");
       }},
      {"cart.max_depth", CASINO_SIZE(pipeline.cart.max_depth)},
      {"cart.min_samples_leaf", CASINO_SIZE(pipeline.cart.min_samples_leaf)},
      {"cart.max_depth_grid",
       [](RunConfig& c, const std::string& v) { c.pipeline.cart_depth_grid = to_size_list("cart.max_depth_grid", v); }},
      {"cart.min_samples_leaf_grid",
       [](RunConfig& c, const std::string& v) {
         c.pipeline.cart_leaf_grid = to_size_list("cart.min_samples_leaf_grid", v);
       }},
      {"influence.seed_horizon_s", CASINO_TIME(pipeline.stats.seed_horizon)},
      {"influence.restrict_to_seed_population",
       [](RunConfig& c, const std::string& v) {
         c.pipeline.stats.restrict_to_seed_population = to_bool("influence.restrict_to_seed_population", v);
       }},
      {"optimizer.tol", CASINO_DOUBLE(pipeline.bfgs.tol)},
      {"optimizer.max_iter", CASINO_SIZE(pipeline.bfgs.max_iter)},
      {"optimizer.fd_step", CASINO_DOUBLE(pipeline.bfgs.fd_step)},
      {"runtime.workers",
       [](RunConfig& c, const std::string& v) { c.pipeline.workers = to_int<unsigned>("runtime.workers", v); }},
      {"resources.lexicon", [](RunConfig& c, const std::string& v) { c.lexicon = trim(v); }},
      {"resources.pos_dictionary", [](RunConfig& c, const std::string& v) { c.pos_dictionary = trim(v); }},
      {"synth.seed", [](RunConfig& c, const std::string& v) { c.synth.seed = to_int<std::uint64_t>("synth.seed", v); }},
      {"synth.n_events", CASINO_SIZE(synth.n_events)},
      {"synth.n_groups", CASINO_SIZE(synth.n_groups)},
      {"synth.n_categories", CASINO_SIZE(synth.n_categories)},
      {"synth.n_communities", CASINO_SIZE(synth.n_communities)},
      {"synth.core_pool_size", CASINO_SIZE(synth.core_pool_size)},
      {"synth.core_per_group", CASINO_SIZE(synth.core_per_group)},
      {"synth.fillers_per_group", CASINO_SIZE(synth.fillers_per_group)},
      {"synth.join_prob", CASINO_DOUBLE(synth.join_prob)},
      {"synth.mean_join_delay_s", CASINO_DOUBLE(synth.mean_join_delay_s)},
      {"synth.alpha", CASINO_DOUBLE(synth.alpha)},
      {"synth.w_spatial", CASINO_DOUBLE(synth.w_spatial)},
      {"synth.w_temporal", CASINO_DOUBLE(synth.w_temporal)},
      {"synth.w_semantic", CASINO_DOUBLE(synth.w_semantic)},
      {"synth.beta", CASINO_DOUBLE(synth.beta)},
      {"synth.lambda_same", CASINO_DOUBLE(synth.lambda_same)},
      {"synth.lambda_cross", CASINO_DOUBLE(synth.lambda_cross)},
      {"synth.noise_sd", CASINO_DOUBLE(synth.noise_sd)},
      {"synth.group_offset_sd", CASINO_DOUBLE(synth.group_offset_sd)},
      {"synth.attendance_scale", CASINO_DOUBLE(synth.attendance_scale)},
      {"synth.hot_prob", CASINO_DOUBLE(synth.hot_prob)},
      {"synth.on_slot_prob", CASINO_DOUBLE(synth.on_slot_prob)},
      {"synth.positive_prob", CASINO_DOUBLE(synth.positive_prob)},
      {"synth.n_weeks", CASINO_SIZE(synth.n_weeks)},
      {"synth.epoch", CASINO_TIME(synth.epoch)},
  };
  return table;
}

#undef CASINO_DOUBLE
#undef CASINO_SIZE
#undef CASINO_TIME

}  // namespace

RunConfig::RunConfig()
    : lexicon(std::filesystem::path(CASINO_DATA_DIR) / "lexicon.tsv"),
      pos_dictionary(std::filesystem::path(CASINO_DATA_DIR) / "pos_dictionary.tsv") {}

void RunConfig::set(const std::string& dotted_key, const std::string& value) {
  for (const auto& [key, fn] : setters()) {
    if (key == dotted_key) {
      fn(*this, value);
      return;
    }
  }
  throw ConfigError("unknown config key: " + dotted_key);
}

void RunConfig::validate() const {
  pipeline.split.validate();
  pipeline.features.spatial.validate();
  if (pipeline.features.eta < 0.0) throw ConfigError("temporal.eta must be nonnegative");
  for (std::size_t leaf : pipeline.cart_leaf_grid)
    if (leaf == 0) throw ConfigError("cart.min_samples_leaf_grid entries must be positive");
  if (pipeline.cart.min_samples_leaf == 0) throw ConfigError("cart.min_samples_leaf must be positive");
  if (pipeline.stats.seed_horizon < 0) throw ConfigError("influence.seed_horizon_s must be nonnegative");
  if (!(pipeline.bfgs.tol > 0.0) || !(pipeline.bfgs.fd_step > 0.0))
    throw ConfigError("optimizer.tol and optimizer.fd_step must be positive");
}

nlohmann::json RunConfig::to_json() const {
  const auto& p = pipeline;
  nlohmann::json synth_json = synth.to_json();
  return {
      {"data", {{"min_group_events", p.min_group_events}}},
      {"split", {{"train", p.split.train_frac}, {"val", p.split.val_frac}, {"test", p.split.test_frac}}},
      {"spatial",
       {{"neighborhood_radius_m", p.features.spatial.neighborhood_radius_m},
        {"competition_radius_m", p.features.spatial.competition_radius_m}}},
      {"temporal", {{"eta", p.features.eta}, {"utc_offset_s", p.features.utc_offset}}},
      {"group", {{"entropy_mode", entropy_mode_name(p.features.entropy_mode)}}},
      {"cart",
       {{"max_depth", p.cart.max_depth},
        {"min_samples_leaf", p.cart.min_samples_leaf},
        {"max_depth_grid", p.cart_depth_grid},
        {"min_samples_leaf_grid", p.cart_leaf_grid}}},
      {"influence",
       {{"seed_horizon_s", p.stats.seed_horizon},
        {"restrict_to_seed_population", p.stats.restrict_to_seed_population}}},
      {"optimizer", {{"tol", p.bfgs.tol}, {"max_iter", p.bfgs.max_iter}, {"fd_step", p.bfgs.fd_step}}},
      {"runtime", {{"workers", p.workers}}},
      {"resources", {{"lexicon", lexicon.string()}, {"pos_dictionary", pos_dictionary.string()}}},
      {"synth", std::move(synth_json)},
  };
}

std::vector<std::string> known_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, fn] : setters()) keys.push_back(k);
  return keys;
}

std::string to_ini(const RunConfig& cfg) {
  const nlohmann::json j = cfg.to_json();
  std::string out, section;
  for (const std::string& key : known_keys()) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot), name = key.substr(dot + 1);
    if (sec != section) {
      out += (out.empty() ? "[" : "\n[") + sec + "]\n";
      section = sec;
    }
    const nlohmann::json& v = j.at(sec).at(name);
    std::string text;
    if (v.is_string()) {
      text = v.get<std::string>();
    } else if (v.is_array()) {
      for (const auto& x : v) text += (text.empty() ? "" : ",") + x.dump();
    } else {
      text = v.dump();
    }
    out += name + " = " + text + "\n";
  }
  return out;
}

RunConfig load_run_config(const std::optional<std::filesystem::path>& file,
                          const std::vector<std::string>& overrides) {
  RunConfig cfg;
  std::optional<std::filesystem::path> path = file;
  if (!path) {
    if (const char* env = std::getenv(kConfigEnvVar); env && *env) path = env;
  }
  if (path) {
    if (!std::filesystem::exists(*path)) throw ConfigError("config file not found: " + path->string());
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::ini_parser::read_ini(path->string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError("cannot parse config " + path->string() + ": " + e.message() + " (line " +
                        std::to_string(e.line()) + ")");
    }
    for (const auto& [section, body] : tree) {
      if (body.empty()) throw ConfigError("config key outside a section: " + section);
      for (const auto& [key, leaf] : body) cfg.set(section + "." + key, leaf.get_value<std::string>());
    }
  }
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like section.key=value: " + o);
    cfg.set(trim(o.substr(0, eq)), o.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

}  // namespace casino::config
