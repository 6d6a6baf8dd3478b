#include "casino/predictor/bundle.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "casino/errors.hpp"

namespace casino::predictor {

namespace {

class Fnv1a {
 public:
  void add(std::string_view s) {
    for (unsigned char c : s) mix(c);
    mix(0x1f);
  }
  void add(std::int64_t v) { add(std::to_string(v)); }
  std::string hex() const {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h_;
    return os.str();
  }

 private:
  void mix(unsigned char c) {
    h_ ^= c;
    h_ *= 0x100000001b3ULL;
  }
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

std::string_view entropy_mode_name(group::EntropyMode m) {
  return m == group::EntropyMode::kLiteralScalar ? "literal_scalar" : "attendance_share";
}

group::EntropyMode entropy_mode_from(std::string_view s) {
  if (s == "attendance_share") return group::EntropyMode::kAttendanceShare;
  if (s == "literal_scalar") return group::EntropyMode::kLiteralScalar;
  throw ArtifactError("unknown entropy mode in bundle: " + std::string(s));
}

}  // namespace

std::string dataset_fingerprint(const Dataset& d) {
  Fnv1a h;
  for (const User& u : d.users()) h.add(u.id);
  for (const Group& g : d.groups()) {
    h.add(g.id);
    h.add(g.category);
  }
  for (const Event& e : d.events()) {
    h.add(e.id);
    h.add(e.group_id);
    h.add(e.start_time);
  }
  for (const Rsvp& r : d.rsvps()) {
    h.add(r.event_id);
    h.add(r.user_id);
    h.add(r.rsvp_time);
  }
  return h.hex();
}

nlohmann::json to_json(const spatial::AttractivenessMatrix& m) {
  std::vector<int> degenerate(m.degenerate_flags().begin(), m.degenerate_flags().end());
  return {{"categories", std::vector<std::string>(m.categories().begin(), m.categories().end())},
          {"radius_m", m.radius_m()},
          {"attr", std::vector<double>(m.attr_values().begin(), m.attr_values().end())},
          {"baseline", std::vector<double>(m.baseline_values().begin(), m.baseline_values().end())},
          {"degenerate", degenerate}};
}

spatial::AttractivenessMatrix attractiveness_from_json(const nlohmann::json& j) {
  std::vector<char> degenerate;
  for (int v : j.at("degenerate").get<std::vector<int>>()) degenerate.push_back(v != 0 ? 1 : 0);
  return spatial::AttractivenessMatrix(j.at("categories").get<std::vector<std::string>>(),
                                       j.at("radius_m").get<double>(), j.at("attr").get<std::vector<double>>(),
                                       j.at("baseline").get<std::vector<double>>(), std::move(degenerate));
}

nlohmann::json to_json(const influence::InfluenceParams& p) {
  return {{"alpha", p.alpha},
          {"beta", p.beta},
          {"lambda_same", p.lambda_same},
          {"lambda_cross", p.lambda_cross},
          {"seed_horizon", p.seed_horizon}};
}

influence::InfluenceParams influence_params_from_json(const nlohmann::json& j) {
  influence::InfluenceParams p;
  p.alpha = j.at("alpha").get<double>();
  p.beta = j.at("beta").get<double>();
  p.lambda_same = j.at("lambda_same").get<double>();
  p.lambda_cross = j.at("lambda_cross").get<double>();
  p.seed_horizon = j.at("seed_horizon").get<Timestamp>();
  if (p.lambda_same < 0.0 || p.lambda_cross < 0.0) throw ArtifactError("negative influence weight in bundle");
  return p;
}

nlohmann::json ModelBundle::to_json() const {
  return {
      {"schema", kBundleSchema},
      {"schema_version", kBundleSchemaVersion},
      {"feature_schema_version", kFeatureSchemaVersion},
      {"feature_names", std::vector<std::string>(feature_names().begin(), feature_names().end())},
      {"dataset_fingerprint", dataset_fingerprint},
      {"split", {{"train_frac", split.train_frac}, {"val_frac", split.val_frac}, {"test_frac", split.test_frac}}},
      {"min_group_events", min_group_events},
      {"features",
       {{"neighborhood_radius_m", features.spatial.neighborhood_radius_m},
        {"competition_radius_m", features.spatial.competition_radius_m},
        {"eta", features.eta},
        {"utc_offset", features.utc_offset},
        {"entropy_mode", entropy_mode_name(features.entropy_mode)},
        {"reference_time", reference_time}}},
      {"cart", {{"max_depth", cart.max_depth}, {"min_samples_leaf", cart.min_samples_leaf}}},
      {"tree", tree.to_json()},
      {"influence", {{"casino", predictor::to_json(casino)}, {"casino_tied", predictor::to_json(casino_tied)}}},
      {"propagation_stats", stats.to_json()},
      {"category_stats", category_stats.averages()},
      {"attractiveness", predictor::to_json(attractiveness)},
      {"naive_mean", naive_mean.to_json()},
  };
}

ModelBundle ModelBundle::from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != kBundleSchema) throw ArtifactError("not a model bundle");
    const int version = j.at("schema_version").get<int>();
    if (version != kBundleSchemaVersion)
      throw ArtifactError("bundle schema version " + std::to_string(version) + " does not match supported version " +
                          std::to_string(kBundleSchemaVersion));
    const int fversion = j.at("feature_schema_version").get<int>();
    if (fversion != kFeatureSchemaVersion)
      throw ArtifactError("feature schema version " + std::to_string(fversion) + " does not match supported version " +
                          std::to_string(kFeatureSchemaVersion));
    ModelBundle b;
    b.dataset_fingerprint = j.at("dataset_fingerprint").get<std::string>();
    const auto& sp = j.at("split");
    b.split = {sp.at("train_frac").get<double>(), sp.at("val_frac").get<double>(), sp.at("test_frac").get<double>()};
    b.min_group_events = j.at("min_group_events").get<std::size_t>();
    const auto& f = j.at("features");
    b.features.spatial.neighborhood_radius_m = f.at("neighborhood_radius_m").get<double>();
    b.features.spatial.competition_radius_m = f.at("competition_radius_m").get<double>();
    b.features.eta = f.at("eta").get<double>();
    b.features.utc_offset = f.at("utc_offset").get<Timestamp>();
    b.features.entropy_mode = entropy_mode_from(f.at("entropy_mode").get<std::string>());
    b.reference_time = f.at("reference_time").get<Timestamp>();
    b.cart.max_depth = j.at("cart").at("max_depth").get<std::size_t>();
    b.cart.min_samples_leaf = j.at("cart").at("min_samples_leaf").get<std::size_t>();
    b.tree = RegressionTree::from_json(j.at("tree"));
    b.casino = influence_params_from_json(j.at("influence").at("casino"));
    b.casino_tied = influence_params_from_json(j.at("influence").at("casino_tied"));
    b.stats = influence::PropagationStats::from_json(j.at("propagation_stats"));
    b.category_stats = CategoryStats(j.at("category_stats").get<std::map<std::string, double>>());
    b.attractiveness = attractiveness_from_json(j.at("attractiveness"));
    b.naive_mean = NaiveMeanBaseline::from_json(j.at("naive_mean"));
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("malformed model bundle: ") + e.what());
  }
}

void ModelBundle::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write model bundle: " + path.string());
  out << to_json().dump(1) << '\n';
}

ModelBundle ModelBundle::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model bundle: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError("model bundle " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

}  // namespace casino::predictor
