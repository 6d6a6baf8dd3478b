#include "casino/spatial/attractiveness.hpp"

#include <algorithm>
#include <cmath>

#include "casino/errors.hpp"
#include "casino/util/parallel.hpp"

namespace casino::spatial {

void SpatialConfig::validate() const {
  if (!(neighborhood_radius_m > 0.0) || !(neighborhood_radius_m < competition_radius_m))
    throw ConfigError("spatial radii must satisfy 0 < r < R");
}

SpatialIndex build_event_index(const Dataset& d, std::span<const std::string> categories, double cell_radius_m) {
  std::vector<IndexedPoint> pts;
  pts.reserve(d.events().size());
  for (std::size_t ei = 0; ei < d.events().size(); ++ei) {
    const std::string& cat = d.categories()[d.category_of_event(ei)];
    auto it = std::find(categories.begin(), categories.end(), cat);
    std::uint32_t tag = it == categories.end() ? kNoCategory : static_cast<std::uint32_t>(it - categories.begin());
    pts.push_back({ei, d.events()[ei].venue, tag});
  }
  return SpatialIndex(std::move(pts), cell_radius_m);
}

std::size_t neighborhood_count(const SpatialIndex& idx, GeoPoint center, double r, std::optional<std::size_t> exclude_id) {
  std::size_t n = 0;
  idx.for_each_within(center, r, [&](const IndexedPoint& p) {
    if (!exclude_id || p.id != *exclude_id) ++n;
  });
  return n;
}

std::size_t neighborhood_count_by_category(const SpatialIndex& idx, GeoPoint center, double r, std::uint32_t category,
                                           std::optional<std::size_t> exclude_id) {
  std::size_t n = 0;
  idx.for_each_within(center, r, [&](const IndexedPoint& p) {
    if (p.tag == category && (!exclude_id || p.id != *exclude_id)) ++n;
  });
  return n;
}

std::vector<std::size_t> category_counts(const SpatialIndex& idx, GeoPoint center, double r, std::size_t n_categories,
                                         std::optional<std::size_t> exclude_id) {
  std::vector<std::size_t> counts(n_categories, 0);
  idx.for_each_within(center, r, [&](const IndexedPoint& p) {
    if (p.tag < n_categories && (!exclude_id || p.id != *exclude_id)) ++counts[p.tag];
  });
  return counts;
}

namespace {

// Leading factor and guards shared by the single-pair and matrix routes.
// `term_sum` is the sum over anchors of N_a(e,r) / (N(e,r) - N_b(e,r)) with
// zero-denominator anchors skipped.
AttrValue finish_attr(std::size_t n_total, std::size_t n_a, std::size_t n_b, double term_sum) {
  if (n_a == 0 || n_b == 0 || n_total == n_a) return {1.0, true};
  const double factor =
      static_cast<double>(n_total - n_a) / (static_cast<double>(n_a) * static_cast<double>(n_b));
  return {factor * term_sum, false};
}

}  // namespace

AttrValue attractiveness(const Dataset& train, std::string_view category_a, std::string_view category_b, double r) {
  auto ia = train.category_index(category_a);
  auto ib = train.category_index(category_b);
  if (!ia || !ib) return {1.0, true};
  const auto cats = train.categories();
  SpatialIndex idx = build_event_index(train, cats, r);
  std::size_t n_a = 0, n_b = 0;
  for (std::size_t ei = 0; ei < train.events().size(); ++ei) {
    n_a += train.category_of_event(ei) == *ia;
    n_b += train.category_of_event(ei) == *ib;
  }
  double sum = 0.0;
  for (std::size_t ei = 0; ei < train.events().size(); ++ei) {
    if (train.category_of_event(ei) != *ia) continue;
    auto counts = category_counts(idx, train.events()[ei].venue, r, cats.size(), ei);
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    const std::size_t denom = total - counts[*ib];
    if (denom == 0) continue;
    sum += static_cast<double>(counts[*ia]) / static_cast<double>(denom);
  }
  return finish_attr(train.events().size(), n_a, n_b, sum);
}

AttractivenessMatrix::AttractivenessMatrix(std::vector<std::string> categories, double radius_m,
                                           std::vector<double> attr, std::vector<double> baseline,
                                           std::vector<char> degenerate)
    : categories_(std::move(categories)),
      radius_m_(radius_m),
      attr_(std::move(attr)),
      baseline_(std::move(baseline)),
      degenerate_(std::move(degenerate)) {
  const std::size_t k = categories_.size();
  if (attr_.size() != k * k || baseline_.size() != k * k || degenerate_.size() != k * k)
    throw ArtifactError("attractiveness matrix dimensions do not match its category list");
}

std::optional<std::size_t> AttractivenessMatrix::index_of(std::string_view category) const {
  auto it = std::find(categories_.begin(), categories_.end(), category);
  if (it == categories_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - categories_.begin());
}

AttractivenessMatrix build_attractiveness_matrix(const Dataset& train, double r, unsigned workers) {
  const auto cats = train.categories();
  const std::size_t k = cats.size();
  const std::size_t n = train.events().size();
  SpatialIndex idx = build_event_index(train, cats, r);

  std::vector<std::vector<std::size_t>> anchor_counts(n);
  parallel_for(n, workers, [&](std::size_t ei) {
    anchor_counts[ei] = category_counts(idx, train.events()[ei].venue, r, k, ei);
  });

  std::vector<std::size_t> n_cat(k, 0);
  for (std::size_t ei = 0; ei < n; ++ei) ++n_cat[train.category_of_event(ei)];

  // Sequential reduction in event order keeps results independent of workers.
  std::vector<double> term_sum(k * k, 0.0);
  std::vector<double> baseline(k * k, 0.0);
  for (std::size_t ei = 0; ei < n; ++ei) {
    const std::size_t a = train.category_of_event(ei);
    const auto& counts = anchor_counts[ei];
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    for (std::size_t c = 0; c < k; ++c) baseline[a * k + c] += static_cast<double>(counts[c]);
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t denom = total - counts[b];
      if (denom == 0) continue;
      term_sum[a * k + b] += static_cast<double>(counts[a]) / static_cast<double>(denom);
    }
  }

  std::vector<double> attr(k * k, 1.0);
  std::vector<char> degenerate(k * k, 0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      AttrValue v = finish_attr(n, n_cat[a], n_cat[b], term_sum[a * k + b]);
      attr[a * k + b] = v.value;
      degenerate[a * k + b] = v.degenerate ? 1 : 0;
    }
    if (n_cat[a] > 0)
      for (std::size_t c = 0; c < k; ++c) baseline[a * k + c] /= static_cast<double>(n_cat[a]);
  }
  return AttractivenessMatrix(std::vector<std::string>(cats.begin(), cats.end()), r, std::move(attr),
                              std::move(baseline), std::move(degenerate));
}

FeatureValue location_quality(GeoPoint venue, std::string_view category, const AttractivenessMatrix& m,
                              const SpatialIndex& event_idx, std::optional<std::size_t> exclude_id) {
  FeatureValue out;
  auto ce = m.index_of(category);
  if (!ce) {
    out.flagged = true;
    return out;
  }
  auto counts = category_counts(event_idx, venue, m.radius_m(), m.size(), exclude_id);
  for (std::size_t c = 0; c < m.size(); ++c) {
    if (c == *ce) continue;
    if (m.degenerate(c, *ce)) {
      out.flagged = true;
      continue;
    }
    const double deviation = static_cast<double>(counts[c]) - m.baseline(*ce, c);
    out.value += std::log(std::max(m.attr(c, *ce), kLogClampEpsilon)) * deviation;
  }
  return out;
}

}  // namespace casino::spatial
