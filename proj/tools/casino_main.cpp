// casino: train, evaluate and query event-popularity models from the shell.
// JSON goes to stdout, progress to stderr.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "casino/config/run_config.hpp"
#include "casino/data/io.hpp"
#include "casino/errors.hpp"
#include "casino/predictor/pipeline.hpp"
#include "casino/semantic/pos_tagger.hpp"
#include "casino/semantic/sentiment.hpp"
#include "casino/synth/generator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kMetersPerMile = 1609.344;

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  int workers = -1;

  casino::config::RunConfig load() const {
    auto overrides_all = overrides;
    if (workers >= 0) overrides_all.push_back("runtime.workers=" + std::to_string(workers));
    std::optional<fs::path> path;
    if (!config_path.empty()) path = config_path;
    return casino::config::load_run_config(path, overrides_all);
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "INI config file (default: $CASINO_CONFIG)");
  cmd->add_option("--set", c.overrides, "Override a config key, e.g. --set spatial.competition_radius_m=2000");
  cmd->add_option("--workers", c.workers, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
}

void progress(const std::string& msg) { std::cerr << "casino: " << msg << std::endl; }

// The echo leaves out the worker count; it never changes results.
json config_echo(const casino::config::RunConfig& cfg) {
  json j = cfg.to_json();
  j.erase("runtime");
  return j;
}

casino::Dataset load_data(const std::string& dir) {
  if (!fs::is_directory(dir)) throw casino::ConfigError("dataset directory not found: " + dir);
  progress("loading dataset from " + dir);
  return casino::load_dataset(casino::DatasetPaths::in_directory(dir));
}

struct Resources {
  casino::semantic::SentimentLexicon lexicon;
  casino::semantic::PosTagger tagger;
};

Resources load_resources(const casino::config::RunConfig& cfg) {
  return {casino::semantic::SentimentLexicon::load(cfg.lexicon), casino::semantic::PosTagger::load(cfg.pos_dictionary)};
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<double> miles_to_m(const std::vector<double>& miles) {
  std::vector<double> m;
  for (double x : miles) m.push_back(x * kMetersPerMile);
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CASINO event-popularity prediction"};
  app.require_subcommand(1);

  Common train_c, eval_c, whatif_c, synth_c, grid_c, describe_c;
  std::string data_dir, model_path, out_path, stub_path, split_name = "test", variant_name = "all", out_config;
  bool per_event = false, sweep = false;
  std::vector<double> radii_miles(casino::predictor::kDefaultRadiusGridMiles.begin(),
                                  casino::predictor::kDefaultRadiusGridMiles.end());
  std::vector<double> etas(casino::predictor::kDefaultEtaGrid.begin(), casino::predictor::kDefaultEtaGrid.end());

  auto* train = app.add_subcommand("train", "Fit the tree and residual influence models");
  add_common(train, train_c);
  train->add_option("--data", data_dir, "Dataset directory with the four JSONL files")->required();
  train->add_option("--out", out_path, "Where to write the model bundle")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Score a split with one or all variants");
  add_common(evaluate, eval_c);
  evaluate->add_option("--data", data_dir, "Dataset directory")->required();
  evaluate->add_option("--model", model_path, "Model bundle from train")->required();
  evaluate->add_option("--split", split_name, "train, val or test");
  evaluate->add_option("--variant", variant_name, "nm, cont, casino-, casino or all");
  evaluate->add_flag("--per-event", per_event, "Include actual and predicted popularity per event");

  auto* whatif = app.add_subcommand("whatif", "Predict a hypothetical event");
  add_common(whatif, whatif_c);
  whatif->add_option("--data", data_dir, "Dataset directory")->required();
  whatif->add_option("--model", model_path, "Model bundle from train")->required();
  whatif->add_option("--stub", stub_path, "Event stub JSON")->required();
  whatif->add_flag("--sweep-hours", sweep, "Predict once per hour-of-week slot");

  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset with ground truth");
  add_common(synth, synth_c);
  synth->add_option("--out", out_path, "Output directory")->required();

  auto* grid = app.add_subcommand("gridsearch", "Tune R and eta on the validation split");
  add_common(grid, grid_c);
  grid->add_option("--data", data_dir, "Dataset directory")->required();
  grid->add_option("--radii-miles", radii_miles, "Competition radius grid in miles");
  grid->add_option("--etas", etas, "Decay rate grid");
  grid->add_option("--out-config", out_config, "Write the effective config with the tuned values here");

  auto* describe = app.add_subcommand("describe", "Dataset counts before and after group filtering");
  add_common(describe, describe_c);
  describe->add_option("--data", data_dir, "Dataset directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*train) {
      const auto cfg = train_c.load();
      const auto res = load_resources(cfg);
      const auto raw = load_data(data_dir);
      progress("training");
      auto out = casino::predictor::train_model(raw, cfg.pipeline, res.lexicon, res.tagger);
      out.bundle.save(out_path);
      progress("wrote " + out_path);
      emit({{"config", config_echo(cfg)}, {"bundle", out_path}, {"report", out.report}});
    } else if (*evaluate) {
      const auto cfg = eval_c.load();
      const auto split = casino::parse_split_name(split_name);
      std::optional<casino::predictor::Variant> variant;
      if (variant_name != "all") variant = casino::predictor::parse_variant(variant_name);
      const auto bundle = casino::predictor::ModelBundle::load(model_path);
      const auto res = load_resources(cfg);
      const auto raw = load_data(data_dir);
      casino::predictor::Predictor predictor(bundle, raw, res.lexicon, res.tagger, cfg.pipeline.workers);
      progress("evaluating " + split_name);
      json reports = json::array();
      for (const auto& r : predictor.evaluate_all(split, per_event))
        if (!variant || r.variant == *variant) reports.push_back(r.to_json());
      emit(variant ? reports.front() : reports);
    } else if (*whatif) {
      const auto cfg = whatif_c.load();
      std::ifstream in(stub_path);
      if (!in) throw casino::ConfigError("event stub not found: " + stub_path);
      json stub_json;
      try {
        in >> stub_json;
      } catch (const json::exception& e) {
        throw casino::ConfigError("cannot parse event stub " + stub_path + ": " + e.what());
      }
      const auto stub = casino::predictor::WhatIfStub::from_json(stub_json);
      const auto bundle = casino::predictor::ModelBundle::load(model_path);
      const auto res = load_resources(cfg);
      const auto raw = load_data(data_dir);
      casino::predictor::Predictor predictor(bundle, raw, res.lexicon, res.tagger, cfg.pipeline.workers);
      if (sweep) {
        json rows = json::array();
        for (const auto& [slot, p] : predictor.sweep_hours(stub))
          rows.push_back({{"hour_of_week", slot}, {"prediction", p.to_json(predictor.bundle())}});
        emit({{"slots", std::move(rows)}});
      } else {
        emit(predictor.predict(stub).to_json(predictor.bundle()));
      }
    } else if (*synth) {
      const auto cfg = synth_c.load();
      progress("generating");
      const auto out = casino::synth::generate(cfg.synth);
      fs::create_directories(out_path);
      casino::write_dataset(out.dataset, casino::DatasetPaths::in_directory(out_path));
      out.truth.write_jsonl(fs::path(out_path) / "ground_truth.jsonl");
      progress("wrote " + out_path);
      const auto c = casino::counts(out.dataset);
      emit({{"config", cfg.synth.to_json()},
            {"out", out_path},
            {"counts", {{"groups", c.groups}, {"users", c.users}, {"events", c.events}, {"rsvps", c.rsvps}}}});
    } else if (*grid) {
      auto cfg = grid_c.load();
      const auto res = load_resources(cfg);
      const auto raw = load_data(data_dir);
      progress("grid search over " + std::to_string(radii_miles.size() * etas.size()) + " cells");
      const auto result = casino::predictor::grid_search(raw, cfg.pipeline, miles_to_m(radii_miles), etas,
                                                         res.lexicon, res.tagger);
      cfg.pipeline.features.spatial.competition_radius_m = result.best_radius_m;
      cfg.pipeline.features.eta = result.best_eta;
      if (!out_config.empty()) {
        std::ofstream out(out_config);
        if (!out) throw casino::ConfigError("cannot write " + out_config);
        out << casino::config::to_ini(cfg);
        progress("wrote " + out_config);
      }
      json j = result.to_json();
      j["config"] = config_echo(cfg);
      emit(j);
    } else if (*describe) {
      const auto cfg = describe_c.load();
      const auto raw = load_data(data_dir);
      const auto filtered = casino::filter_inactive_groups(raw, cfg.pipeline.min_group_events);
      const auto a = casino::counts(raw), b = casino::counts(filtered);
      std::cerr << "            #groups #users #events #rsvps\n"
                << "raw         " << a.groups << ' ' << a.users << ' ' << a.events << ' ' << a.rsvps << '\n'
                << "filtered    " << b.groups << ' ' << b.users << ' ' << b.events << ' ' << b.rsvps << '\n';
      emit({{"columns", {"#groups", "#users", "#events", "#rsvps"}},
            {"min_group_events", cfg.pipeline.min_group_events},
            {"raw", {a.groups, a.users, a.events, a.rsvps}},
            {"filtered", {b.groups, b.users, b.events, b.rsvps}}});
    }
  } catch (const casino::ValidationError& e) {
    std::cerr << "casino: " << e.what() << '\n';
    const auto& bad = e.offenders();
    for (std::size_t i = 0; i < bad.size() && i < 50; ++i) std::cerr << "  " << bad[i] << '\n';
    if (bad.size() > 50) std::cerr << "  ... and " << bad.size() - 50 << " more\n";
    return 2;
  } catch (const casino::ArtifactError& e) {
    std::cerr << "casino: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "casino: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
