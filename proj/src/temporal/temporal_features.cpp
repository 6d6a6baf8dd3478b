#include "casino/temporal/temporal_features.hpp"

#include <algorithm>
#include <cmath>

#include "casino/errors.hpp"
#include "casino/group/group_features.hpp"

namespace casino::temporal {

namespace {

Timestamp floor_div(Timestamp a, Timestamp b) {
  Timestamp q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

TimeVector profile_of(const Dataset& train, std::size_t ui, const DecayConfig& cfg, Timestamp offset) {
  TimeVector v{};
  auto rsvps = train.user_rsvps(ui);
  if (rsvps.empty()) return v;
  for (std::size_t ri : rsvps) {
    const Event& e = train.events()[train.rsvp_event(ri)];
    v[hour_of_week(e.start_time, offset)] += decay_weight(cfg.eta, days_before(e.start_time, cfg.reference_time));
  }
  const double n = static_cast<double>(rsvps.size());
  for (double& x : v) x /= n;
  return v;
}

}  // namespace

std::size_t hour_of_week(Timestamp utc, Timestamp utc_offset_seconds) {
  const Timestamp local = utc + utc_offset_seconds;
  const Timestamp days = floor_div(local, kSecondsPerDay);
  // 1970-01-01 was a Thursday, which is day 3 when Monday is day 0.
  const Timestamp dow = ((days + 3) % 7 + 7) % 7;
  const Timestamp hour = floor_div(local - days * kSecondsPerDay, kSecondsPerHour);
  return static_cast<std::size_t>(dow * 24 + hour);
}

TimeVector event_time_vector(Timestamp start_time, Timestamp utc_offset_seconds) {
  TimeVector v{};
  v[hour_of_week(start_time, utc_offset_seconds)] = 1.0;
  return v;
}

long days_before(Timestamp start, Timestamp reference) {
  if (reference <= start) return 0;
  return static_cast<long>((reference - start) / kSecondsPerDay);
}

double decay_weight(double eta, long days) { return 1.0 / std::pow(1.0 + eta, static_cast<double>(days)); }

TimeVector user_time_profile(const Dataset& train, std::string_view user_id, const DecayConfig& cfg,
                             Timestamp utc_offset_seconds) {
  auto ui = train.user_index(user_id);
  if (!ui) throw Error("unknown user " + std::string(user_id));
  return profile_of(train, *ui, cfg, utc_offset_seconds);
}

double weighted_jaccard(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lo += std::min(a[i], b[i]);
    hi += std::max(a[i], b[i]);
  }
  for (std::size_t i = n; i < a.size(); ++i) hi += a[i];
  for (std::size_t i = n; i < b.size(); ++i) hi += b[i];
  return hi > 0.0 ? lo / hi : 0.0;
}

double temporal_satisfaction(const TimeVector& event_vector, std::span<const TimeVector* const> member_profiles) {
  double s = 0.0;
  for (const TimeVector* p : member_profiles) s += weighted_jaccard(event_vector, *p);
  return s;
}

TemporalModel::TemporalModel(const Dataset& train, const DecayConfig& cfg, Timestamp utc_offset_seconds)
    : cfg_(cfg), offset_(utc_offset_seconds) {
  if (cfg.eta < 0.0) throw ConfigError("decay rate eta must be nonnegative");
  profiles_.resize(train.users().size());
  cold_.resize(train.users().size());
  for (std::size_t ui = 0; ui < profiles_.size(); ++ui) {
    profiles_[ui] = profile_of(train, ui, cfg, utc_offset_seconds);
    cold_[ui] = train.user_rsvps(ui).empty() ? 1 : 0;
  }
  active_.resize(train.groups().size());
  for (std::size_t gi = 0; gi < active_.size(); ++gi) active_[gi] = group::active_members(train, gi);
}

double TemporalModel::satisfaction(std::size_t group, Timestamp start_time) const {
  const TimeVector ev = event_time_vector(start_time, offset_);
  std::vector<const TimeVector*> members;
  members.reserve(active_[group].size());
  for (std::size_t ui : active_[group]) members.push_back(&profiles_[ui]);
  return temporal_satisfaction(ev, members);
}

}  // namespace casino::temporal
