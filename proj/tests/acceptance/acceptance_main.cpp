// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "casino/data/geo.hpp"
#include "casino/group/group_features.hpp"
#include "casino/influence/dag.hpp"
#include "casino/influence/propagation.hpp"
#include "casino/influence/propagation_stats.hpp"
#include "casino/predictor/bfgs.hpp"
#include "casino/predictor/cart.hpp"
#include "casino/predictor/metrics.hpp"
#include "casino/predictor/pipeline.hpp"
#include "casino/predictor/residual_model.hpp"
#include "casino/spatial/attractiveness.hpp"
#include "casino/spatial/index.hpp"
#include "casino/synth/generator.hpp"
#include "support/builder.hpp"
#include "support/oracles.hpp"

using namespace casino;
using namespace casino::testing;

namespace {

int g_failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  std::printf("%s  %-32s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  g_failures += !pass;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const semantic::SentimentLexicon& lexicon() {
  static const auto lex = semantic::SentimentLexicon::load(std::filesystem::path(CASINO_DATA_DIR) / "lexicon.tsv");
  return lex;
}

const semantic::PosTagger& tagger() {
  static const auto t = semantic::PosTagger::load(std::filesystem::path(CASINO_DATA_DIR) / "pos_dictionary.tsv");
  return t;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_end_to_end() {
  const auto t0 = std::chrono::steady_clock::now();
  const synth::SynthConfig cfg;  // 2000 events, 50 groups, 5 categories, sigma 0.1, lambda_g = 3 lambda'_g
  const auto city = synth::generate(cfg);
  const predictor::PipelineConfig pipe;
  const auto trained = predictor::train_model(city.dataset, pipe, lexicon(), tagger());
  const predictor::Predictor p(trained.bundle, city.dataset, lexicon(), tagger(), pipe.workers);
  const auto reps = p.evaluate_all(SplitName::kTest);
  const double elapsed = seconds_since(t0);

  std::vector<double> r2;
  bool defined = true;
  for (const auto& r : reps) {
    defined = defined && r.r2.has_value();
    r2.push_back(r.r2.value_or(std::nan("")));
  }
  const bool ordered = defined && r2[0] < r2[1] && r2[1] < r2[2] && r2[2] < r2[3];
  char detail[256];
  std::snprintf(detail, sizeof detail, "test R2 nm=%.4f cont=%.4f casino-=%.4f casino=%.4f in %.1fs", r2[0], r2[1],
                r2[2], r2[3], elapsed);
  report(ordered, "e2e.variant_ordering", detail);
  report(defined && r2[3] >= 0.85, "e2e.casino_r2_at_least_0.85", fmt("casino test R2 = %.4f", r2[3]));
  report(elapsed <= 300.0, "e2e.runtime_within_5min", fmt("%.1f s", elapsed));
}

void check_alpha_beta_recovery() {
  synth::SynthConfig cfg;
  cfg.seed = 3;
  const auto city = synth::generate(cfg);
  const auto data = predictor::prepare_data(city.dataset, cfg.split, predictor::PipelineConfig{}.min_group_events);
  const Dataset& train = data.split.train;
  const auto stats = influence::estimate_propagation_stats(train, {cfg.seed_horizon, true});
  std::vector<influence::SeedDag> dags;
  std::vector<double> y;
  for (std::size_t ei = 0; ei < train.events().size(); ++ei) {
    dags.push_back(influence::build_seed_dag(train, influence::event_seeds(train, ei), stats, cfg.seed_horizon));
    y.push_back(0.3 + 0.7 * dags.back().influence(cfg.lambda_same, cfg.lambda_cross));
  }
  predictor::ResidualFitOptions opt;
  opt.bfgs.tol = 1e-12;
  opt.bfgs.max_iter = 2000;
  const auto fit = predictor::fit_residual_model(dags, y, cfg.seed_horizon, opt);
  const double ea = std::abs(fit.params.alpha - 0.3), eb = std::abs(fit.params.beta - 0.7);
  char detail[256];
  std::snprintf(detail, sizeof detail, "alpha=%.6f beta=%.6f over %zu training events (lambda_g=%.4f lambda'_g=%.4f)",
                fit.params.alpha, fit.params.beta, y.size(), fit.params.lambda_same, fit.params.lambda_cross);
  report(ea <= 1e-3 && eb <= 1e-3, "recovery.alpha_beta", detail);
}

void check_lambda_ratio() {
  std::string detail = "lambda_g/lambda'_g per seed:";
  bool all = true;
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    synth::SynthConfig cfg;
    cfg.seed = seed;
    cfg.n_categories = 1;
    cfg.w_spatial = cfg.w_temporal = cfg.w_semantic = 0.0;
    cfg.alpha = 1.0;
    cfg.beta = 0.3;
    cfg.noise_sd = 0.01;
    // The denser single-category history raises I(e); a smaller scale keeps
    // attendance within the available members.
    cfg.attendance_scale = 20.0;
    const auto city = synth::generate(cfg);
    predictor::PipelineConfig pipe;
    pipe.cart_depth_grid.clear();
    pipe.cart_leaf_grid.clear();
    pipe.cart.max_depth = 0;
    const auto trained = predictor::train_model(city.dataset, pipe, lexicon(), tagger());
    const auto& w = trained.bundle.casino;
    const double ratio = w.lambda_same / w.lambda_cross;
    const double want = cfg.lambda_same / cfg.lambda_cross;
    all = all && std::abs(ratio - want) <= 0.1 * want;
    detail += fmt(" %.3f", ratio);
  }
  report(all, "recovery.lambda_ratio", detail + " (planted 3, tolerance 10%)");
}

void check_radius_oracle() {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t queries = 0, mismatches = 0;
  const std::size_t seeds = 120;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    std::mt19937_64 rng(seed);
    const int regime = static_cast<int>(seed % 4);
    const std::size_t n = 50 + rng() % 250;
    std::vector<spatial::IndexedPoint> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({i, random_point(rng, regime), 0});
    const double radius = regime == 3 ? 2e6 * unit(rng) : 100.0 + 5000.0 * unit(rng);
    const spatial::SpatialIndex idx(pts, radius * (0.2 + 2.0 * unit(rng)));
    for (int q = 0; q < 10; ++q) {
      const GeoPoint center = q < 5 ? pts[rng() % n].pos : random_point(rng, regime);
      ++queries;
      mismatches += idx.query(center, radius) != radius_scan(pts, center, radius);
    }
  }
  report(mismatches == 0, "oracle.radius_query",
         std::to_string(seeds) + " seeds, " + std::to_string(queries) + " queries, " + std::to_string(mismatches) +
             " mismatches vs quadratic scan");
}

void check_omega_oracle() {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  const std::size_t seeds = 150;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 1 + rng() % 12;
    const auto dag = random_dag(rng, n, 0.2 + 0.6 * unit(rng));
    for (std::size_t v = 0; v < n; ++v) {
      const auto row = influence::propagate_from(dag, v);
      for (std::size_t u = 0; u < n; ++u) worst = std::max(worst, std::abs(row[u] - path_sum(dag, v, u)));
    }
  }
  report(worst < 1e-12, "oracle.omega_path_enumeration",
         std::to_string(seeds) + " DAGs of <= 12 nodes, max abs error " + fmt("%.3g", worst));
}

void check_cart_oracle() {
  std::size_t differ = 0;
  const std::size_t seeds = 150;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    std::mt19937_64 rng(seed);
    predictor::FeatureMatrix x;
    std::vector<double> y;
    std::size_t min_leaf = 1;
    random_split_problem(rng, x, y, min_leaf);
    std::vector<std::size_t> rows(y.size());
    std::iota(rows.begin(), rows.end(), 0);
    const auto got = predictor::best_split(x, y, rows, min_leaf);
    const auto want = exhaustive_split(x, y, min_leaf);
    const bool same = got.has_value() == want.found &&
                      (!got || (got->feature == want.feature && got->threshold == want.threshold));
    differ += !same;
  }
  report(differ == 0, "oracle.cart_split",
         std::to_string(seeds) + " problems of <= 200x5, " + std::to_string(differ) + " differ from exhaustive search");
}

void check_bfgs_oracle() {
  double worst = 0.0;
  const std::size_t seeds = 150;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    std::mt19937_64 rng(seed);
    const SpdQuadratic q = random_spd_quadratic(rng);
    const auto want = solve_linear(q.a, q.b);
    predictor::BfgsOptions opt;
    opt.tol = 1e-9;
    opt.max_iter = 500;
    const auto got = predictor::bfgs_minimize(q, std::vector<double>(want.size(), 0.0), opt);
    for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(got.x[i] - want[i]));
  }
  report(worst < 1e-6, "oracle.bfgs_spd_quadratic",
         std::to_string(seeds) + " quadratics of dim <= 6, max abs error " + fmt("%.3g", worst));
}

void check_analytic_values() {
  const double h = haversine_m({0.0, 0.0}, {0.0, 1.0});
  report(std::abs(h - 111194.9) <= 0.1, "analytic.haversine", fmt("%.4f m", h));

  const double tau = 3600.0;
  const double dec = influence::propagation_decay(tau, tau);
  report(std::abs(dec - std::exp(-1.0)) <= 1e-12, "analytic.decay_at_tau", fmt("%.17g", dec));

  double worst = 0.0;
  for (int n : {1, 2, 3, 7, 16, 50}) {
    DatasetBuilder b;
    std::vector<std::string> members;
    for (int i = 0; i < n; ++i) {
      b.user("u" + std::to_string(i));
      members.push_back("u" + std::to_string(i));
    }
    b.group("g", "a", "u0", members);
    for (int i = 0; i < n; ++i) {
      const Timestamp t = 1700000000 + static_cast<Timestamp>(i) * kSecondsPerDay;
      b.event("e" + std::to_string(i), "g", t);
      b.rsvp("e" + std::to_string(i), "u" + std::to_string(i), t - 100);
    }
    const double e = group::group_entropy(group::attendance_distribution(b.build(), "g"));
    worst = std::max(worst, std::abs(e - std::log(static_cast<double>(n))));
  }
  report(worst <= 1e-12, "analytic.uniform_entropy", "n in {1,2,3,7,16,50}, max abs error " + fmt("%.3g", worst));

  bool exact = true;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(5.0, 2.0);
    std::vector<double> p(2 + rng() % 200);
    for (auto& v : p) v = g(rng);
    const double mean = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
    exact = exact && predictor::r_squared(p, std::vector<double>(p.size(), mean)) == 0.0;
  }
  report(exact, "analytic.r2_of_mean_is_zero", "100 seeds, exact equality");
}

void check_attr_neutrality() {
  const std::size_t n_events = 5000, n_cats = 5, seeds = 20;
  const double half_deg_lat = 500.0 / 111194.9;
  double total = 0.0, lo = 1e300, hi = -1e300;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DatasetBuilder b;
    b.user("o");
    for (std::size_t c = 0; c < n_cats; ++c) b.group("g" + std::to_string(c), "c" + std::to_string(c), "o", {"o"});
    const double half_deg_lon = half_deg_lat / std::cos(40.75 * M_PI / 180.0);
    for (std::size_t i = 0; i < n_events; ++i) {
      const GeoPoint v{40.75 + half_deg_lat * u(rng), -73.98 + half_deg_lon * u(rng)};
      b.event("e" + std::to_string(i), "g" + std::to_string(rng() % n_cats), 1000000 + static_cast<Timestamp>(i), v);
    }
    const auto m = spatial::build_attractiveness_matrix(b.build(), spatial::kDefaultNeighborhoodRadiusM, 0);
    double sum = 0.0;
    for (std::size_t a = 0; a < n_cats; ++a)
      for (std::size_t c = 0; c < n_cats; ++c)
        if (a != c) sum += m.attr(a, c);
    const double mean = sum / static_cast<double>(n_cats * (n_cats - 1));
    total += mean;
    lo = std::min(lo, mean);
    hi = std::max(hi, mean);
  }
  const double avg = total / static_cast<double>(seeds);
  char detail[256];
  std::snprintf(detail, sizeof detail, "mean off-diagonal Attr %.4f over %zu seeds (per-seed range %.4f..%.4f)", avg,
                seeds, lo, hi);
  report(avg >= 0.85 && avg <= 1.15, "attr.neutral_under_random_mix", detail);
}

void check_determinism() {
  synth::SynthConfig cfg;
  cfg.seed = 17;
  cfg.n_events = 600;
  cfg.n_groups = 20;
  const auto city = synth::generate(cfg);
  std::vector<std::string> dumps;
  for (unsigned workers : {1u, 3u}) {
    predictor::PipelineConfig pipe;
    pipe.cart_depth_grid = {2, 4};
    pipe.cart_leaf_grid = {20};
    pipe.workers = workers;
    const auto t = predictor::train_model(city.dataset, pipe, lexicon(), tagger());
    std::string s = t.report.dump() + t.bundle.to_json().dump();
    const predictor::Predictor p(t.bundle, city.dataset, lexicon(), tagger(), workers);
    for (SplitName split : {SplitName::kTrain, SplitName::kVal, SplitName::kTest})
      for (const auto& r : p.evaluate_all(split, true)) s += r.to_json().dump();
    dumps.push_back(std::move(s));
  }
  report(dumps[0] == dumps[1], "determinism.worker_count",
         "train report, bundle and per-event evaluations with 1 vs 3 workers, " + std::to_string(dumps[0].size()) +
             " bytes");
}

}  // namespace

int main(int argc, char** argv) {
  // An optional argument runs only the checks whose name contains it.
  const std::string only = argc > 1 ? argv[1] : "";
  std::printf("Note: the published real-data results table cannot be reproduced without the original event-site\n"
              "crawl; the synthetic end-to-end and recovery criteria below stand in for it.\n\n");
  const std::vector<std::pair<std::string, std::function<void()>>> checks = {
      {"analytic", check_analytic_values},   {"oracle.radius", check_radius_oracle},
      {"oracle.omega", check_omega_oracle},  {"oracle.cart", check_cart_oracle},
      {"oracle.bfgs", check_bfgs_oracle},    {"attr", check_attr_neutrality},
      {"determinism", check_determinism},    {"recovery.alpha_beta", check_alpha_beta_recovery},
      {"recovery.lambda", check_lambda_ratio}, {"e2e", check_end_to_end}};
  for (const auto& [name, check] : checks) {
    if (name.find(only) == std::string::npos) continue;
    try {
      check();
    } catch (const std::exception& e) {
      report(false, name, std::string("threw: ") + e.what());
    }
  }
  std::printf("\n%d criterion line(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
