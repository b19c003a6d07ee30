#ifndef CDOXAI_SYNTH_H_
#define CDOXAI_SYNTH_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdoxai/dataset.h"
#include "cdoxai/features.h"
#include "cdoxai/fexai.h"
#include "cdoxai/ingest.h"

namespace cdoxai {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

enum class LabelMode {
  kGeometric,  // adherence follows the drawn gradient, segment count and turns
  kRule,       // adherence follows a fuzzy rule table applied to those inputs
};

std::string_view LabelModeName(LabelMode mode);
LabelMode ParseLabelMode(std::string_view name);

struct SynthSpec {
  std::size_t n_flights = 1000;
  std::uint64_t seed = 42;
  LabelMode mode = LabelMode::kGeometric;
  TmaConfig tma;

  Range segments{120, 900};          // segment count, uniform integer
  Range gradient{0.012, 0.06};       // gradient on every descending segment
  Range mdirection{0.3, 2.8};        // mean heading change per segment, deg
  Range distance_nm{20, 50};         // flown path length
  // Share of the path flown on descending segments, drawn independently of
  // the level-off count so the entry altitude does not encode adherence.
  // Level and descending segment lengths differ by at most max_length_ratio.
  Range descent_share{0.55, 0.95};
  double max_length_ratio = 6.0;
  Range entry_radius_nm{50, 55};     // entry distance from the TMA center
  Range end_altitude_ft{3600, 6000};
  Range ground_speed_kt{180, 280};
  std::array<int, 2> interval_s{1, 5};  // sampling interval bounds

  // Geometric mode: each condition below counts as one "bad" factor and the
  // level-segment fraction is level_fraction[bad count] +/- jitter.
  double gradient_threshold = 0.0408;  // bad when below
  double segments_threshold = 432;     // bad when above
  double mdirection_threshold = 1.3;   // bad when above
  std::array<double, 4> level_fraction{0.05, 0.30, 0.55, 0.80};
  double level_jitter = 0.05;

  // Rule mode: inputs are drawn inside the fuzzy cells covered by `rules`,
  // at least margin * (upper - lower) away from every crossing.
  RuleBase rules;
  FuzzyPartition partition = FuzzyPartition::Default();
  double rule_margin = 0.05;
  Range low_level_fraction{0.75, 0.85};
  Range notlow_level_fraction{0.05, 0.60};

  // Overrides for targeted tests.
  std::optional<int> fixed_segments;
  std::optional<int> fixed_level_offs;

  // Throws kInfeasibleSpec.
  void Validate() const;
};

struct TrackTruth {
  int n_segments = 0;
  int level_offs = 0;            // segments with exactly zero altitude change
  std::vector<bool> compliant;   // per segment
  double adherence = 0.0;        // (n - level_offs) / n
  double gradient = 0.0;
  double mdirection = 0.0;
  int rule_label = -1;           // rule mode only
};

struct GeneratedTrack {
  ArrivalTrack track;
  FlightWeather weather;
  TrackTruth truth;
};

// Deterministic per (spec.seed, index). Throws kInfeasibleSpec.
GeneratedTrack GenerateTrack(const SynthSpec& spec, std::size_t index);

struct SynthFleet {
  std::vector<ArrivalTrack> tracks;
  std::vector<FlightWeather> weather;
  std::vector<TrackTruth> truth;
  Dataset dataset;
};

// Runs every track through clipping, feature extraction and the weather
// join. Throws kDegenerateData if the scorer disagrees with the generator's
// compliance flags on any segment.
SynthFleet GenerateFleet(const SynthSpec& spec,
                         const FeatureConfig& features = {});

}  // namespace cdoxai

#endif  // CDOXAI_SYNTH_H_
