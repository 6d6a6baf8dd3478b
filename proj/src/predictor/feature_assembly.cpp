#include "casino/predictor/feature_assembly.hpp"

#include <algorithm>

#include "casino/errors.hpp"
#include "casino/semantic/novelty.hpp"
#include "casino/util/parallel.hpp"

namespace casino::predictor {

const std::array<std::string_view, kFeatureCount>& feature_names() {
  static const std::array<std::string_view, kFeatureCount> names = {
      "spatial_quality", "spatial_competitiveness", "group_entropy", "group_loyalty", "temporal_satisfaction",
      "sentiment_neg",   "sentiment_neu",           "sentiment_pos", "pos_adjective", "pos_adposition",
      "pos_adverb",      "pos_conjunction",         "pos_determiner", "pos_noun",     "pos_numeral",
      "pos_particle",    "pos_pronoun",             "pos_verb",      "pos_punctuation", "title_novelty"};
  return names;
}

EventQuery query_of(const Dataset& d, std::size_t event) {
  const Event& e = d.events()[event];
  return {e.id, e.group_id, e.venue, e.start_time, e.title, e.description};
}

Timestamp training_reference_time(const Dataset& train) {
  Timestamp t = 0;
  bool any = false;
  for (const Event& e : train.events()) {
    t = any ? std::max(t, e.start_time) : e.start_time;
    any = true;
  }
  return t;
}

FeatureContext::FeatureContext(const Dataset& train, spatial::AttractivenessMatrix matrix, const FeatureConfig& cfg,
                               const semantic::SentimentLexicon& lexicon, const semantic::PosTagger& tagger)
    : train_(&train),
      cfg_(cfg),
      matrix_(std::move(matrix)),
      homes_(train, cfg.spatial.competition_radius_m),
      groups_(group::compute_group_features(train, cfg.entropy_mode)),
      temporal_(train, temporal::DecayConfig{cfg.eta, training_reference_time(train)}, cfg.utc_offset),
      lexicon_(&lexicon),
      tagger_(&tagger) {
  cfg_.spatial.validate();
  if (matrix_.size() == 0 && !train.categories().empty())
    throw Error("missing artifact: attractiveness matrix");
  event_index_ = spatial::build_event_index(train, matrix_.categories(), matrix_.radius_m());
}

FeatureVector FeatureContext::assemble(const EventQuery& q, FeatureDiagnostics* diag) const {
  const Dataset& train = *train_;
  FeatureVector f{};
  FeatureDiagnostics dg;

  const auto gi = train.group_index(q.group_id);
  const Group* group = gi ? &train.groups()[*gi] : nullptr;
  const std::string category = group ? group->category : std::string();
  const auto self = q.event_id.empty() ? std::nullopt : train.event_index(q.event_id);

  if (group) {
    const auto quality = spatial::location_quality(q.venue, category, matrix_, event_index_, self);
    f[0] = quality.value;
    dg.quality_flagged = quality.flagged;
    const auto comp = spatial::location_competitiveness(q.venue, category, homes_, cfg_.spatial.competition_radius_m);
    f[1] = comp.value;
    dg.competitiveness_flagged = comp.flagged;
  } else {
    dg.quality_flagged = dg.competitiveness_flagged = true;
  }

  if (group && !groups_[*gi].cold_start && temporal_.active_count(*gi) > 0) {
    f[2] = groups_[*gi].entropy;
    f[3] = groups_[*gi].loyalty;
    f[4] = temporal_.satisfaction(*gi, q.start_time);
  } else {
    dg.cold_start_group = true;
  }

  const auto sent = semantic::sentiment_scores(q.description.empty() ? q.title : q.title + " " + q.description,
                                               *lexicon_);
  f[5] = sent.neg;
  f[6] = sent.neu;
  f[7] = sent.pos;
  const auto pos = semantic::pos_presence(q.title, *tagger_);
  std::copy(pos.begin(), pos.end(), f.begin() + 8);

  std::vector<std::string> prior;
  if (group) {
    for (std::size_t ei : train.group_events(*gi)) {
      const Event& e = train.events()[ei];
      if (e.start_time < q.start_time && e.id != q.event_id) prior.push_back(e.title);
    }
  }
  f[19] = semantic::title_novelty(q.title, prior);

  if (diag) *diag = dg;
  return f;
}

std::vector<FeatureVector> FeatureContext::assemble_all(const Dataset& d, unsigned workers,
                                                        std::vector<FeatureDiagnostics>* diags) const {
  std::vector<FeatureVector> out(d.events().size());
  std::vector<FeatureDiagnostics> dg(d.events().size());
  parallel_for(d.events().size(), workers, [&](std::size_t ei) { out[ei] = assemble(query_of(d, ei), &dg[ei]); });
  if (diags) *diags = std::move(dg);
  return out;
}

}  // namespace casino::predictor
