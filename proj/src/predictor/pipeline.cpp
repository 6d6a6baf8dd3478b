#include "casino/predictor/pipeline.hpp"

#include <cmath>
#include <memory>

#include "casino/errors.hpp"
#include "casino/predictor/metrics.hpp"
#include "casino/util/parallel.hpp"

namespace casino::predictor {

namespace {

nlohmann::json counts_json(const DatasetCounts& c) {
  return {{"groups", c.groups}, {"users", c.users}, {"events", c.events}, {"rsvps", c.rsvps}};
}

std::optional<double> r2_or_empty(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() < 2) return std::nullopt;
  try {
    return r_squared(actual, predicted);
  } catch (const Error&) {
    return std::nullopt;  // zero variance
  }
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

nlohmann::json fit_json(const ResidualFit& f) {
  nlohmann::json j = to_json(f.params);
  j["mse"] = f.mse;
  j["iterations"] = f.iterations;
  j["converged"] = f.converged;
  j["identifiable"] = f.identifiable;
  j["warnings"] = f.warnings;
  return j;
}

struct TrainingTargets {
  std::vector<std::size_t> events;  // positions in train with a category average
  FeatureMatrix x;
  std::vector<double> y;
};

TrainingTargets training_targets(const Dataset& train, const CategoryStats& stats,
                                 const std::vector<FeatureVector>& features) {
  TrainingTargets t;
  for (std::size_t ei = 0; ei < train.events().size(); ++ei) {
    if (!stats.contains(train.categories()[train.category_of_event(ei)])) continue;
    t.events.push_back(ei);
    t.x.emplace_back(features[ei].begin(), features[ei].end());
    t.y.push_back(relative_popularity(train, ei, stats));
  }
  return t;
}

}  // namespace

PreparedData prepare_data(const Dataset& raw, const SplitSpec& split, std::size_t min_group_events) {
  split.validate();
  PreparedData p;
  p.raw_counts = counts(raw);
  p.filtered = filter_inactive_groups(raw, min_group_events);
  p.split = split_per_group(p.filtered, split);
  p.category_stats = category_averages(p.split.train);
  return p;
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kNaiveMean: return "nm";
    case Variant::kContextual: return "cont";
    case Variant::kCasinoTied: return "casino-";
    case Variant::kCasino: return "casino";
  }
  return "casino";
}

Variant parse_variant(std::string_view s) {
  for (Variant v : kAllVariants)
    if (to_string(v) == s) return v;
  throw ConfigError("unknown variant '" + std::string(s) + "' (expected nm, cont, casino-, casino)");
}

TrainOutput train_model(const Dataset& raw, const PipelineConfig& cfg, const semantic::SentimentLexicon& lexicon,
                        const semantic::PosTagger& tagger) {
  PreparedData data = prepare_data(raw, cfg.split, cfg.min_group_events);
  const Dataset& train = data.split.train;
  if (train.events().empty()) throw Error("no training events left after filtering");

  ModelBundle b;
  b.dataset_fingerprint = dataset_fingerprint(data.filtered);
  b.split = cfg.split;
  b.min_group_events = cfg.min_group_events;
  b.features = cfg.features;
  b.reference_time = training_reference_time(train);
  b.category_stats = data.category_stats;
  b.attractiveness =
      spatial::build_attractiveness_matrix(train, cfg.features.spatial.neighborhood_radius_m, cfg.workers);
  b.naive_mean = NaiveMeanBaseline(train, data.category_stats);

  FeatureContext ctx(train, b.attractiveness, cfg.features, lexicon, tagger);
  std::vector<FeatureDiagnostics> diags;
  const auto features = ctx.assemble_all(train, cfg.workers, &diags);
  const TrainingTargets t = training_targets(train, data.category_stats, features);
  if (t.events.empty()) throw Error("no training events with a positive category average");

  b.stats = influence::estimate_propagation_stats(train, cfg.stats);
  auto seed_dags = [&](const Dataset& d, const std::vector<std::size_t>& events) {
    std::vector<influence::SeedDag> dags(events.size());
    parallel_for(events.size(), cfg.workers, [&](std::size_t i) {
      dags[i] = influence::build_seed_dag(d, influence::event_seeds(d, events[i]), b.stats, cfg.stats.seed_horizon);
    });
    return dags;
  };
  const auto dags = seed_dags(train, t.events);

  struct Cell {
    CartParams cart;
    RegressionTree tree;
    ResidualFit tied, full;
    std::optional<double> val_r2;
  };
  auto fit_cell = [&](Cell& c) {
    c.tree = fit_cart(t.x, t.y, c.cart);
    const auto residuals = residual_targets(c.tree, t.x, t.y);
    ResidualFitOptions opt;
    opt.bfgs = cfg.bfgs;
    opt.tie_lambdas = true;
    c.tied = fit_residual_model(dags, residuals, cfg.stats.seed_horizon, opt);
    opt.tie_lambdas = false;
    c.full = fit_residual_model(dags, residuals, cfg.stats.seed_horizon, opt);
  };

  std::vector<Cell> cells;
  const Dataset& val = data.split.val;
  const bool tune = !cfg.cart_depth_grid.empty() && !cfg.cart_leaf_grid.empty() && !val.events().empty();
  if (tune) {
    for (std::size_t depth : cfg.cart_depth_grid)
      for (std::size_t leaf : cfg.cart_leaf_grid) cells.push_back({CartParams{depth, leaf}, {}, {}, {}, std::nullopt});
    const TrainingTargets v = training_targets(val, data.category_stats, ctx.assemble_all(val, cfg.workers));
    const auto val_dags = seed_dags(val, v.events);
    parallel_for(cells.size(), cfg.workers, [&](std::size_t ci) {
      Cell& c = cells[ci];
      fit_cell(c);
      std::vector<double> predicted(v.events.size());
      for (std::size_t i = 0; i < v.events.size(); ++i) {
        const auto& p = c.full.params;
        predicted[i] = c.tree.predict(v.x[i]) + p.alpha + p.beta * val_dags[i].influence(p.lambda_same, p.lambda_cross);
      }
      c.val_r2 = r2_or_empty(v.y, predicted);
    });
  } else {
    cells.push_back({cfg.cart, {}, {}, {}, std::nullopt});
    fit_cell(cells.front());
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < cells.size(); ++i)
    if (cells[i].val_r2 && (!cells[best].val_r2 || *cells[i].val_r2 > *cells[best].val_r2)) best = i;
  const Cell& chosen = cells[best];
  b.cart = chosen.cart;
  b.tree = chosen.tree;
  b.casino_tied = chosen.tied.params;
  b.casino = chosen.full.params;
  const ResidualFit& tied = chosen.tied;
  const ResidualFit& full = chosen.full;

  nlohmann::json report;
  report["counts"] = {{"raw", counts_json(data.raw_counts)},
                      {"filtered", counts_json(counts(data.filtered))},
                      {"train_events", train.events().size()},
                      {"val_events", data.split.val.events().size()},
                      {"test_events", data.split.test.events().size()}};
  std::size_t cold = 0, qflag = 0, cflag = 0;
  for (const auto& d : diags) {
    cold += d.cold_start_group;
    qflag += d.quality_flagged;
    cflag += d.competitiveness_flagged;
  }
  report["feature_diagnostics"] = {
      {"cold_start_events", cold}, {"quality_flagged", qflag}, {"competitiveness_flagged", cflag}};
  report["tree"] = {{"max_depth", b.cart.max_depth},
                    {"min_samples_leaf", b.cart.min_samples_leaf},
                    {"depth", b.tree.depth()},
                    {"leaves", b.tree.leaf_count()},
                    {"training_events", t.events.size()}};
  if (tune) {
    nlohmann::json rows = nlohmann::json::array();
    for (const Cell& c : cells)
      rows.push_back({{"max_depth", c.cart.max_depth},
                      {"min_samples_leaf", c.cart.min_samples_leaf},
                      {"val_r2", optional_json(c.val_r2)}});
    report["cart_tuning"] = std::move(rows);
  }
  report["fits"] = {{"casino", fit_json(full)}, {"casino-", fit_json(tied)}};

  Predictor predictor(b, raw, lexicon, tagger, cfg.workers);
  nlohmann::json evals;
  for (SplitName s : {SplitName::kTrain, SplitName::kVal}) {
    if (pick(predictor.data().split, s).events().empty()) continue;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : predictor.evaluate_all(s)) rows.push_back(r.to_json());
    evals[std::string(to_string(s))] = std::move(rows);
  }
  report["evaluation"] = std::move(evals);
  return {std::move(b), std::move(report)};
}

WhatIfStub WhatIfStub::from_json(const nlohmann::json& j) {
  try {
    WhatIfStub s;
    s.query.group_id = j.at("group_id").get<std::string>();
    s.query.venue = {j.at("venue_lat").get<double>(), j.at("venue_lon").get<double>()};
    s.query.start_time = j.at("start_time").get<Timestamp>();
    s.query.title = j.value("title", std::string());
    s.query.description = j.value("description", std::string());
    s.query.event_id = j.value("event_id", std::string());
    s.announce_time = j.value("announce_time", s.query.start_time);
    if (j.contains("rsvps")) {
      if (!j.contains("announce_time")) throw ConfigError("event stub lists rsvps but no announce_time");
      for (const auto& r : j.at("rsvps"))
        s.rsvps.push_back({r.at("user_id").get<std::string>(), r.at("rsvp_time").get<Timestamp>(), true});
    }
    if (!is_valid(s.query.venue)) throw ConfigError("event stub has invalid venue coordinates");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed event stub: ") + e.what());
  }
}

double Prediction::value(Variant v, const ModelBundle& b) const {
  switch (v) {
    case Variant::kNaiveMean: return naive_mean.value;
    case Variant::kContextual: return contextual;
    case Variant::kCasinoTied: return contextual + b.casino_tied.alpha + b.casino_tied.beta * influence_tied;
    case Variant::kCasino: return contextual + b.casino.alpha + b.casino.beta * influence;
  }
  return contextual;
}

nlohmann::json Prediction::to_json(const ModelBundle& b) const {
  nlohmann::json feats;
  for (std::size_t i = 0; i < kFeatureCount; ++i) feats[std::string(feature_names()[i])] = features[i];
  nlohmann::json path = nlohmann::json::array();
  for (const PathStep& s : tree_path)
    path.push_back({{"feature", feature_names()[s.feature]},
                    {"threshold", s.threshold},
                    {"value", features[s.feature]},
                    {"branch", s.went_left ? "<=" : ">"}});
  nlohmann::json preds;
  for (Variant v : kAllVariants) preds[std::string(to_string(v))] = value(v, b);
  return {
      {"event_id", event_id},
      {"group_id", group_id},
      {"features", std::move(feats)},
      {"diagnostics",
       {{"cold_start_group", diagnostics.cold_start_group},
        {"quality_flagged", diagnostics.quality_flagged},
        {"competitiveness_flagged", diagnostics.competitiveness_flagged},
        {"naive_mean_fallback", naive_mean.fallback}}},
      {"tree", {{"prediction", contextual}, {"path", std::move(path)}}},
      {"residual",
       {{"casino",
         {{"influence", influence},
          {"alpha", b.casino.alpha},
          {"beta", b.casino.beta},
          {"term", b.casino.alpha + b.casino.beta * influence}}},
        {"casino-",
         {{"influence", influence_tied},
          {"alpha", b.casino_tied.alpha},
          {"beta", b.casino_tied.beta},
          {"term", b.casino_tied.alpha + b.casino_tied.beta * influence_tied}}}}},
      {"predictions", std::move(preds)},
  };
}

nlohmann::json EvaluationReport::to_json() const {
  nlohmann::json cats = nlohmann::json::object();
  for (const auto& [c, v] : per_category) cats[c] = optional_json(v);
  nlohmann::json j = {{"variant", to_string(variant)},
                      {"split", casino::to_string(split)},
                      {"r2", optional_json(r2)},
                      {"degenerate", !r2.has_value()},
                      {"n_events", n_events},
                      {"n_skipped", n_skipped},
                      {"per_category", std::move(cats)}};
  if (!per_event.empty()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [id, ap] : per_event) rows.push_back({{"event_id", id}, {"actual", ap.first}, {"predicted", ap.second}});
    j["per_event"] = std::move(rows);
  }
  return j;
}

Predictor::Predictor(ModelBundle bundle, const Dataset& raw, const semantic::SentimentLexicon& lexicon,
                     const semantic::PosTagger& tagger, unsigned workers)
    : bundle_(std::move(bundle)), workers_(workers) {
  data_ = std::make_unique<PreparedData>(prepare_data(raw, bundle_.split, bundle_.min_group_events));
  if (dataset_fingerprint(data_->filtered) != bundle_.dataset_fingerprint)
    throw ArtifactError("dataset does not match the one the model bundle was trained on");
  features_ = std::make_unique<FeatureContext>(data_->split.train, bundle_.attractiveness, bundle_.features, lexicon,
                                               tagger);
}

Prediction Predictor::predict_with(const EventQuery& q, const influence::EventSeeds& seeds,
                                   const Dataset& context) const {
  Prediction p;
  p.event_id = q.event_id;
  p.group_id = q.group_id;
  p.features = features_->assemble(q, &p.diagnostics);
  p.tree_path = bundle_.tree.path(p.features);
  p.contextual = bundle_.tree.predict(p.features);
  const influence::SeedDag dag = build_seed_dag(context, seeds, bundle_.stats, bundle_.casino.seed_horizon);
  p.influence = dag.influence(bundle_.casino.lambda_same, bundle_.casino.lambda_cross);
  if (bundle_.casino_tied.seed_horizon == bundle_.casino.seed_horizon) {
    p.influence_tied = dag.influence(bundle_.casino_tied.lambda_same, bundle_.casino_tied.lambda_cross);
  } else {
    const influence::SeedDag tied = build_seed_dag(context, seeds, bundle_.stats, bundle_.casino_tied.seed_horizon);
    p.influence_tied = tied.influence(bundle_.casino_tied.lambda_same, bundle_.casino_tied.lambda_cross);
  }
  const auto gi = context.group_index(q.group_id);
  const std::string category = gi ? context.groups()[*gi].category : std::string();
  p.naive_mean = bundle_.naive_mean.predict(q.group_id, category);
  return p;
}

std::vector<Prediction> Predictor::predict_split(SplitName split) const {
  const Dataset& d = pick(data_->split, split);
  std::vector<Prediction> out(d.events().size());
  parallel_for(d.events().size(), workers_, [&](std::size_t ei) {
    out[ei] = predict_with(query_of(d, ei), influence::event_seeds(d, ei), d);
  });
  return out;
}

std::vector<EvaluationReport> Predictor::evaluate_all(SplitName split, bool per_event) const {
  const Dataset& d = pick(data_->split, split);
  if (d.events().empty()) throw Error("cannot evaluate the empty " + std::string(to_string(split)) + " split");
  const auto preds = predict_split(split);

  std::vector<EvaluationReport> reports;
  for (Variant v : kAllVariants) {
    EvaluationReport r;
    r.variant = v;
    r.split = split;
    std::vector<double> actual, predicted;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_cat;
    for (std::size_t ei = 0; ei < d.events().size(); ++ei) {
      const std::string& cat = d.categories()[d.category_of_event(ei)];
      if (!bundle_.category_stats.contains(cat)) {
        ++r.n_skipped;
        continue;
      }
      const double a = relative_popularity(d, ei, bundle_.category_stats);
      const double p = preds[ei].value(v, bundle_);
      actual.push_back(a);
      predicted.push_back(p);
      by_cat[cat].first.push_back(a);
      by_cat[cat].second.push_back(p);
      if (per_event) r.per_event.push_back({d.events()[ei].id, {a, p}});
    }
    r.n_events = actual.size();
    r.r2 = r2_or_empty(actual, predicted);
    for (const auto& [cat, ap] : by_cat) r.per_category[cat] = r2_or_empty(ap.first, ap.second);
    reports.push_back(std::move(r));
  }
  return reports;
}

EvaluationReport Predictor::evaluate(SplitName split, Variant variant, bool per_event) const {
  for (auto& r : evaluate_all(split, per_event))
    if (r.variant == variant) return r;
  throw Error("unreachable: variant missing from evaluation");
}

Prediction Predictor::predict(const WhatIfStub& stub) const {
  const Dataset& d = data_->filtered;
  const auto gi = d.group_index(stub.query.group_id);
  if (!gi) throw ValidationError("unknown group: " + stub.query.group_id, {"group " + stub.query.group_id});
  influence::EventSeeds seeds{stub.query.event_id, *gi, stub.announce_time, stub.rsvps};
  return predict_with(stub.query, seeds, d);
}

std::vector<std::pair<std::size_t, Prediction>> Predictor::sweep_hours(const WhatIfStub& stub) const {
  const Timestamp offset = bundle_.features.utc_offset;
  const Timestamp local = stub.query.start_time + offset;
  const Timestamp days = local >= 0 ? local / kSecondsPerDay : -((-local + kSecondsPerDay - 1) / kSecondsPerDay);
  const Timestamp dow = ((days + 3) % 7 + 7) % 7;  // 1970-01-01 was a Thursday
  const Timestamp monday_utc = (days - dow) * kSecondsPerDay - offset;

  std::vector<std::pair<std::size_t, Prediction>> rows;
  for (std::size_t slot = 0; slot < temporal::kHoursPerWeek; ++slot) {
    WhatIfStub s = stub;
    const Timestamp delta = monday_utc + static_cast<Timestamp>(slot) * kSecondsPerHour - stub.query.start_time;
    s.query.start_time += delta;
    s.announce_time += delta;
    for (auto& r : s.rsvps) r.time += delta;
    rows.emplace_back(slot, predict(s));
  }
  return rows;
}

nlohmann::json GridResult::to_json() const {
  nlohmann::json cells_json = nlohmann::json::array();
  for (const GridCell& c : cells)
    cells_json.push_back({{"competition_radius_m", c.radius_m}, {"eta", c.eta}, {"val_r2", optional_json(c.val_r2)}});
  return {{"best", {{"competition_radius_m", best_radius_m}, {"eta", best_eta}}}, {"cells", std::move(cells_json)}};
}

GridResult grid_search(const Dataset& raw, const PipelineConfig& cfg, const std::vector<double>& radius_grid_m,
                       const std::vector<double>& eta_grid, const semantic::SentimentLexicon& lexicon,
                       const semantic::PosTagger& tagger) {
  if (radius_grid_m.empty() || eta_grid.empty()) throw ConfigError("grid search needs nonempty R and eta grids");
  for (double r : radius_grid_m) {
    spatial::SpatialConfig sc = cfg.features.spatial;
    sc.competition_radius_m = r;
    sc.validate();
  }
  for (double eta : eta_grid)
    if (eta < 0.0) throw ConfigError("decay rate eta must be nonnegative");

  const PreparedData data = prepare_data(raw, cfg.split, cfg.min_group_events);
  const Dataset& train = data.split.train;
  const Dataset& val = data.split.val;
  if (train.events().empty() || val.events().empty())
    throw Error("grid search needs nonempty training and validation splits");
  const auto matrix = spatial::build_attractiveness_matrix(train, cfg.features.spatial.neighborhood_radius_m, cfg.workers);

  GridResult result;
  for (double r : radius_grid_m)
    for (double eta : eta_grid) result.cells.push_back({r, eta, std::nullopt});

  parallel_for(result.cells.size(), cfg.workers, [&](std::size_t ci) {
    GridCell& cell = result.cells[ci];
    FeatureConfig fc = cfg.features;
    fc.spatial.competition_radius_m = cell.radius_m;
    fc.eta = cell.eta;
    FeatureContext ctx(train, matrix, fc, lexicon, tagger);
    const TrainingTargets t = training_targets(train, data.category_stats, ctx.assemble_all(train, 1));
    if (t.events.empty()) return;
    const RegressionTree tree = fit_cart(t.x, t.y, cfg.cart);
    const auto val_features = ctx.assemble_all(val, 1);
    std::vector<double> actual, predicted;
    for (std::size_t ei = 0; ei < val.events().size(); ++ei) {
      if (!data.category_stats.contains(val.categories()[val.category_of_event(ei)])) continue;
      actual.push_back(relative_popularity(val, ei, data.category_stats));
      predicted.push_back(tree.predict(val_features[ei]));
    }
    cell.val_r2 = r2_or_empty(actual, predicted);
  });

  const GridCell* best = nullptr;
  for (const GridCell& c : result.cells)
    if (c.val_r2 && (!best || *c.val_r2 > *best->val_r2)) best = &c;
  if (!best) throw Error("grid search: validation popularity has zero variance in every cell");
  result.best_radius_m = best->radius_m;
  result.best_eta = best->eta;
  return result;
}

}  // namespace casino::predictor
