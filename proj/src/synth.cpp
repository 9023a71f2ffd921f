#include "signalcast/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "signalcast/error.hpp"
#include "signalcast/rng.hpp"

namespace signalcast {

namespace {

constexpr std::uint64_t kRegimeStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kMentionStream = 3;
constexpr std::uint64_t kGlobalStream = 4;
constexpr std::uint64_t kAttackStream = 5;

const std::set<std::string> kKnownSignals{"TCM", "TEM", "GEM", "GEA", "GET"};

std::int64_t day_index(const SyntheticSpec& spec, Instant t) {
  return (t.seconds - spec.start.seconds) / kSecondsPerDay;
}

/// Active/quiet spells per day, starting quiet at a random phase. Spell
/// lengths are uniform on [0.5, 1.5] times their mean.
std::vector<bool> regime_days(const SyntheticSpec& spec, std::size_t days, Rng& rng) {
  std::vector<bool> active(days, false);
  auto spell = [&](double mean) {
    const double len = mean * (0.5 + rng.uniform());
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(len)));
  };
  std::size_t d = static_cast<std::size_t>(rng.uniform() * spec.quiet_mean_days);
  while (d < days) {
    const std::size_t len = spell(spec.active_mean_days);
    for (std::size_t i = d; i < std::min(days, d + len); ++i) active[i] = true;
    d += len + spell(spec.quiet_mean_days);
  }
  return active;
}

/// Day d is elevated when the regime is active anywhere in [d, d + lead).
std::vector<bool> elevated_days(const SyntheticSpec& spec, const std::vector<bool>& active) {
  const std::size_t days = active.size();
  std::vector<bool> out(days, false);
  for (std::size_t d = 0; d < days; ++d) {
    const Instant day_start{spec.start.seconds + static_cast<std::int64_t>(d) * kSecondsPerDay};
    const Instant horizon = day_start + spec.lead;
    const auto lead_days =
        std::max<std::int64_t>(1, (horizon.seconds - day_start.seconds + kSecondsPerDay - 1) / kSecondsPerDay);
    for (std::size_t i = d; i < std::min(days, d + static_cast<std::size_t>(lead_days)); ++i) {
      if (active[i]) {
        out[d] = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (!(start < end)) throw_config("synthetic span: start must precede end");
  const Instant a0 = attack_start.value_or(start);
  if (a0 < start || !(a0 < end)) throw_config("synthetic attack_start must lie inside the span");
  if (!attack_bin.is_fixed() || attack_bin.seconds < 2) throw_config("attack_bin must be a fixed duration of at least 2s");
  if (!lead.positive()) throw_config("lead window must be positive");
  if (!(strength >= 0.0) || !std::isfinite(strength)) throw_config("strength must be >= 0");
  if (!(concentration >= 0.0)) throw_config("concentration must be >= 0");
  if (!(active_mean_days > 0.0) || !(quiet_mean_days > 0.0)) throw_config("regime spell means must be positive");
  if (!(events_per_day >= 0.0)) throw_config("events_per_day must be >= 0");
  if (!(negative_fraction >= 0.0 && negative_fraction <= 1.0)) throw_config("negative_fraction must be in [0,1]");
  if (!(extra_attacks >= 0.0)) throw_config("extra_attacks must be >= 0");
  std::set<std::string> seen;
  for (const auto& s : signals) {
    if (!kKnownSignals.count(s.name)) throw_config("unknown synthetic signal '" + s.name + "'");
    if (!seen.insert(s.name).second) throw_config("duplicate synthetic signal '" + s.name + "'");
    if (!(s.base_rate >= 0.0)) throw_config("base rate of " + s.name + " must be >= 0");
    if (!(s.noise >= 0.0)) throw_config("noise of " + s.name + " must be >= 0");
  }
  for (const auto& p : planted) {
    if (!seen.count(p)) throw_config("planted signal '" + p + "' is not configured");
  }
  const auto bins = (end.seconds - a0.seconds) / attack_bin.seconds;
  std::set<std::string> types;
  for (const auto& a : attacks) {
    if (a.attack_type.empty()) throw_config("attack type name must not be empty");
    if (!types.insert(a.attack_type).second) throw_config("duplicate attack type '" + a.attack_type + "'");
    if (!(a.density >= 0.0 && a.density <= 1.0)) {
      throw_config("density of " + a.attack_type + " must be a probability in [0,1]");
    }
    if (a.density > 0 && bins < 1) throw_config("attack window shorter than one attack bin");
  }
}

SyntheticSpec default_synthetic_spec() {
  SyntheticSpec s;
  s.start = parse_instant("2015-09-01");
  s.end = parse_instant("2016-10-30");
  s.attack_start = parse_instant("2016-04-01");
  s.signals = {{"TCM", 4.0, 0.2}, {"TEM", 2.0, 0.2}, {"GEM", 6.0, 0.2}, {"GEA", 3.0, 0.2}, {"GET", 3.0, 0.2}};
  s.planted = {"GEM", "GEA"};
  s.strength = 3.0;
  s.concentration = 10.0;
  s.active_mean_days = 25.0;
  s.quiet_mean_days = 45.0;
  s.attacks = {{"Malware", 0.36}, {"Defacement", 0.15}, {"DOS", 0.02}, {"MEU", 0.10}};
  return s;
}

std::vector<EventRecord> generate_synthetic_events(const SyntheticSpec& spec) {
  spec.validate();
  const auto days = static_cast<std::size_t>((spec.end.seconds - spec.start.seconds + kSecondsPerDay - 1) /
                                             kSecondsPerDay);

  // Latent regimes, one per planted signal.
  std::vector<std::vector<bool>> active;
  std::map<std::string, std::vector<bool>> elevated;
  for (std::size_t j = 0; j < spec.planted.size(); ++j) {
    Rng rng(derive_seed(spec.seed, kRegimeStream, j));
    active.push_back(regime_days(spec, days, rng));
    elevated[spec.planted[j]] = elevated_days(spec, active.back());
  }

  // Daily intensity per signal: log-normal noise times the planted lift.
  std::map<std::string, std::vector<double>> intensity;
  for (std::size_t s = 0; s < spec.signals.size(); ++s) {
    const auto& p = spec.signals[s];
    Rng rng(derive_seed(spec.seed, kNoiseStream, s));
    std::vector<double> v(days);
    const auto lift = elevated.find(p.name);
    for (std::size_t d = 0; d < days; ++d) {
      v[d] = p.base_rate * std::exp(p.noise * rng.normal() - 0.5 * p.noise * p.noise);
      if (lift != elevated.end() && lift->second[d]) v[d] *= 1.0 + spec.strength;
    }
    intensity[p.name] = std::move(v);
  }

  std::vector<EventRecord> out;

  // Hourly mention counts on the two tagged streams.
  const std::pair<const char*, const char*> mention_streams[] = {{"TCM", "twitter-cyber"},
                                                                 {"TEM", "twitter-entity"}};
  for (std::size_t m = 0; m < 2; ++m) {
    const auto it = intensity.find(mention_streams[m].first);
    if (it == intensity.end()) continue;
    Rng rng(derive_seed(spec.seed, kMentionStream, m));
    for (std::int64_t t = spec.start.seconds; t < spec.end.seconds; t += 3600) {
      const auto count = rng.poisson(it->second[static_cast<std::size_t>(day_index(spec, Instant{t}))]);
      if (count == 0) continue;
      EventRecord e;
      e.timestamp = Instant{t};
      e.stream_id = mention_streams[m].second;
      e.kind = EventKind::kMention;
      e.value = static_cast<double>(count);
      out.push_back(std::move(e));
    }
  }

  // Global events with tone, mentions and articles.
  {
    Rng rng(derive_seed(spec.seed, kGlobalStream));
    auto level = [&](const char* name, std::size_t d, double fallback) {
      const auto it = intensity.find(name);
      return it == intensity.end() ? fallback : it->second[d];
    };
    for (std::size_t d = 0; d < days; ++d) {
      const std::int64_t day_start = spec.start.seconds + static_cast<std::int64_t>(d) * kSecondsPerDay;
      const std::int64_t day_len = std::min<std::int64_t>(kSecondsPerDay, spec.end.seconds - day_start);
      const auto n = rng.poisson(spec.events_per_day * static_cast<double>(day_len) / kSecondsPerDay);
      std::vector<std::int64_t> times(n);
      for (auto& t : times) t = day_start + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(day_len)));
      std::sort(times.begin(), times.end());
      for (const auto t : times) {
        EventRecord e;
        e.timestamp = Instant{t};
        e.stream_id = "gdelt-events";
        e.kind = EventKind::kEvent;
        const bool negative = rng.uniform() < spec.negative_fraction;
        if (negative) {
          const double magnitude = -level("GET", d, 3.0) * std::log(1.0 - rng.uniform());
          e.tone = -std::clamp(magnitude, 0.01, 100.0);
        } else {
          e.tone = std::min(100.0, 10.0 * rng.uniform());
        }
        e.value = *e.tone;
        e.mentions = static_cast<std::int64_t>(rng.poisson(level("GEM", d, 1.0)));
        e.articles = static_cast<std::int64_t>(rng.poisson(level("GEA", d, 1.0)));
        out.push_back(std::move(e));
      }
    }
  }

  // Attacks: exactly round(density * bins) selected bins per type, one or
  // more attacks strictly inside each selected bin.
  const Instant a0 = spec.attack_start.value_or(spec.start);
  const std::int64_t bin = spec.attack_bin.seconds;
  const auto bins = static_cast<std::size_t>((spec.end.seconds - a0.seconds) / bin);
  std::vector<double> weight(bins, 1.0);
  for (std::size_t b = 0; b < bins; ++b) {
    const auto d = static_cast<std::size_t>(day_index(spec, Instant{a0.seconds + static_cast<std::int64_t>(b) * bin}));
    double on = 0;
    for (const auto& a : active) on += a[d] ? 1.0 : 0.0;
    weight[b] += spec.concentration * spec.strength * on;
  }
  for (std::size_t k = 0; k < spec.attacks.size(); ++k) {
    const auto& rate = spec.attacks[k];
    Rng rng(derive_seed(spec.seed, kAttackStream, k));
    const auto n = static_cast<std::size_t>(std::floor(rate.density * static_cast<double>(bins) + 0.5));
    // Weighted sampling without replacement via exponential keys.
    std::vector<std::pair<double, std::size_t>> keys(bins);
    for (std::size_t b = 0; b < bins; ++b) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      keys[b] = {std::log(u) / weight[b], b};
    }
    std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(std::min(n, bins)), keys.end(),
                      [](const auto& x, const auto& y) { return x.first > y.first || (x.first == y.first && x.second < y.second); });
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < std::min(n, bins); ++i) chosen.push_back(keys[i].second);
    std::sort(chosen.begin(), chosen.end());
    for (const auto b : chosen) {
      const std::int64_t bin_start = a0.seconds + static_cast<std::int64_t>(b) * bin;
      const auto count = 1 + rng.poisson(spec.extra_attacks);
      for (std::uint64_t c = 0; c < count; ++c) {
        EventRecord e;
        e.timestamp = Instant{bin_start + 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(bin - 1)))};
        e.stream_id = "ground-truth";
        e.kind = EventKind::kAttack;
        e.attack_type = rate.attack_type;
        out.push_back(std::move(e));
      }
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const EventRecord& a, const EventRecord& b) {
    return a.timestamp < b.timestamp;
  });
  return out;
}

}  // namespace signalcast
