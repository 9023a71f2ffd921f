#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "signalcast/events.hpp"
#include "signalcast/time.hpp"

namespace signalcast {

/// Generative parameters of one signal.
///   TCM, TEM: mean mention count per hour on the signal's stream.
///   GEM, GEA: mean mentions / articles per global event.
///   GET:      mean magnitude of a negative tone.
/// `noise` is the sigma of a daily log-normal multiplier (mean one).
struct SignalParams {
  std::string name;
  double base_rate = 1.0;
  double noise = 0.3;
};

struct AttackRate {
  std::string attack_type;
  /// Fraction of attack bins that contain at least one attack.
  double density = 0.1;
};

/// Describes a synthetic event stream. Each planted signal has its own
/// latent regime process alternating quiet and active spells. During the
/// lead window before and throughout an active spell, the planted signal's
/// intensity is multiplied by (1 + strength). Attack bins are drawn with
/// weight 1 + concentration * strength * (number of active regimes), so
/// strength 0 gives attacks that are independent of every signal.
struct SyntheticSpec {
  Instant start;
  Instant end;
  /// Attacks are scheduled in [attack_start, end); defaults to `start`.
  std::optional<Instant> attack_start;
  Duration attack_bin = Duration::from_hours(6);

  std::vector<SignalParams> signals;
  double events_per_day = 40.0;
  double negative_fraction = 0.4;

  std::vector<std::string> planted;
  Duration lead = Duration::from_months(1);
  double strength = 0.0;
  double concentration = 6.0;
  double active_mean_days = 12.0;
  double quiet_mean_days = 30.0;

  std::vector<AttackRate> attacks;
  /// Mean number of extra attacks in a selected bin.
  double extra_attacks = 0.3;
  std::uint64_t seed = 1;

  /// Throws Error(kConfig) for infeasible or out-of-range parameters.
  void validate() const;
};

/// Default spec: the five built-in signals, GEM and GEA planted, and four
/// attack types with 6-hour densities 36, 15, 2 and 10 percent.
SyntheticSpec default_synthetic_spec();

/// Generates a sorted event stream (mention, event and attack records).
/// Fully determined by the spec, including its seed.
std::vector<EventRecord> generate_synthetic_events(const SyntheticSpec& spec);

}  // namespace signalcast
