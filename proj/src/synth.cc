#include "cdoxai/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cdoxai/error.h"
#include "cdoxai/geo.h"
#include "cdoxai/parallel.h"
#include "cdoxai/rng.h"

namespace cdoxai {

namespace {

constexpr std::int64_t kEpochStart = 1'700'000'000;

[[noreturn]] void Infeasible(const std::string& why) {
  throw Error(ErrorCode::kInfeasibleSpec, why);
}

void CheckRange(const Range& r, const char* name, double min_lo) {
  if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo <= r.hi && r.lo >= min_lo)) {
    Infeasible(std::string(name) + " range is invalid");
  }
}

double Draw(Rng& rng, const Range& r) { return rng.Uniform(r.lo, r.hi); }

// Level flags for n segments with exactly k set, grouped into a few runs
// scattered between the descending segments.
std::vector<bool> PlaceLevelOffs(int n, int k, Rng& rng) {
  std::vector<bool> level(n, false);
  if (k == 0) return level;
  const int descending = n - k;
  const int runs = std::min<int>(k, 1 + static_cast<int>(rng.UniformInt(4)));
  // Distinct gaps between descending segments host the runs.
  std::vector<int> gaps(descending + 1);
  for (int i = 0; i <= descending; ++i) gaps[i] = i;
  rng.Shuffle(gaps);
  gaps.resize(std::min<int>(runs, descending + 1));
  std::sort(gaps.begin(), gaps.end());
  // Split k into gaps.size() positive run lengths.
  std::vector<int> cuts;
  for (int i = 1; i < k; ++i) cuts.push_back(i);
  rng.Shuffle(cuts);
  cuts.resize(gaps.size() - 1);
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0);
  cuts.push_back(k);

  int pos = 0;       // next segment index
  int placed = 0;    // descending segments emitted
  for (std::size_t g = 0; g < gaps.size(); ++g) {
    pos += gaps[g] - placed;
    placed = gaps[g];
    const int len = cuts[g + 1] - cuts[g];
    for (int j = 0; j < len; ++j) level[pos++] = true;
  }
  return level;
}

// Draws a value of one rule feature inside the interval of fuzzy set `set`.
double DrawInSet(Rng& rng, const MembershipFunction& mf, int set,
                 const Range& range, double margin, bool integer) {
  const double m = margin * (mf.upper - mf.lower);
  double lo = range.lo;
  double hi = range.hi;
  if (set == 0) hi = std::min(hi, mf.lower - m);
  if (set == 1) {
    lo = std::max(lo, mf.lower + m);
    hi = std::min(hi, mf.upper - m);
  }
  if (set == 2) lo = std::max(lo, mf.upper + m);
  if (integer) {
    lo = std::ceil(lo);
    hi = std::floor(hi);
  }
  if (!(lo <= hi)) {
    Infeasible(mf.feature + " set " + mf.set_names[set] +
               " has no room inside the generator range");
  }
  if (integer) {
    return static_cast<double>(rng.UniformInt(static_cast<std::int64_t>(lo),
                                              static_cast<std::int64_t>(hi)));
  }
  return rng.Uniform(lo, hi);
}

WeatherCategory DrawWeatherCategory(Rng& rng) {
  static constexpr std::array<std::pair<WeatherCategory, double>, 7> kWeights = {{
      {WeatherCategory::kClear, 0.50},
      {WeatherCategory::kClouds, 0.20},
      {WeatherCategory::kHaze, 0.10},
      {WeatherCategory::kDust, 0.10},
      {WeatherCategory::kMist, 0.05},
      {WeatherCategory::kRain, 0.03},
      {WeatherCategory::kThunderstorm, 0.02},
  }};
  double u = rng.Uniform();
  for (const auto& [category, w] : kWeights) {
    if (u < w) return category;
    u -= w;
  }
  return WeatherCategory::kClear;
}

WeatherRecord DrawWeather(Rng& rng) {
  WeatherRecord w;
  w.temp_f = rng.Uniform(62.0, 108.0);
  w.feels_like_f = w.temp_f + rng.Uniform(-2.0, 12.0);
  w.pressure_hpa = rng.Uniform(996.0, 1021.0);
  w.humidity_pct = rng.Uniform(12.0, 88.0);
  w.dew_point_f = std::min(w.temp_f, rng.Uniform(35.0, 80.0));
  w.clouds_pct = static_cast<double>(rng.UniformInt(0, 100));
  w.wind_speed_mph = rng.Uniform(0.0, 25.0);
  w.wind_deg = static_cast<double>(rng.UniformInt(0, 359));
  w.weather = DrawWeatherCategory(rng);
  return w;
}

WeatherRecord Drift(const WeatherRecord& start, Rng& rng) {
  WeatherRecord w = start;
  w.temp_f += rng.Uniform(-1.5, 1.5);
  w.feels_like_f += rng.Uniform(-1.5, 1.5);
  w.pressure_hpa += rng.Uniform(-0.5, 0.5);
  w.humidity_pct = std::clamp(w.humidity_pct + rng.Uniform(-3.0, 3.0), 0.0, 100.0);
  w.dew_point_f += rng.Uniform(-1.0, 1.0);
  w.wind_speed_mph = std::max(0.0, w.wind_speed_mph + rng.Uniform(-2.0, 2.0));
  if (rng.Bernoulli(0.1)) w.weather = DrawWeatherCategory(rng);
  return w;
}

// Signed difference to - from in (-180, 180].
double SignedTurn(double from_deg, double to_deg) {
  double d = std::fmod(to_deg - from_deg, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

}  // namespace

std::string_view LabelModeName(LabelMode mode) {
  return mode == LabelMode::kGeometric ? "geometric" : "rule";
}

LabelMode ParseLabelMode(std::string_view name) {
  if (name == "geometric") return LabelMode::kGeometric;
  if (name == "rule") return LabelMode::kRule;
  throw Error(ErrorCode::kConfig, "unknown label mode '" + std::string(name) + "'");
}

void SynthSpec::Validate() const {
  tma.Validate();
  CheckRange(segments, "segments", 1.0);
  CheckRange(gradient, "gradient", 0.0);
  CheckRange(mdirection, "mdirection", 0.0);
  CheckRange(distance_nm, "distance_nm", 0.0);
  CheckRange(entry_radius_nm, "entry_radius_nm", 0.0);
  CheckRange(end_altitude_ft, "end_altitude_ft", 0.0);
  CheckRange(ground_speed_kt, "ground_speed_kt", 1.0);
  if (distance_nm.lo <= 0.0) Infeasible("distance_nm must be positive");
  if (mdirection.hi > 90.0) Infeasible("mdirection above 90 degrees per segment");
  if (entry_radius_nm.hi >= tma.radius_nm) {
    Infeasible("entry radius must lie inside the TMA");
  }
  if (distance_nm.hi > entry_radius_nm.lo) {
    Infeasible("flown distance exceeds the entry radius");
  }
  if (end_altitude_ft.lo < tma.altitude_floor_ft) {
    Infeasible("end altitude below the TMA floor");
  }
  if (interval_s[0] < 1 || interval_s[0] > interval_s[1]) {
    Infeasible("sampling interval bounds are invalid");
  }
  for (double f : level_fraction) {
    if (!(f >= 0.0 && f < 1.0)) Infeasible("level fraction outside [0, 1)");
  }
  if (!(level_jitter >= 0.0)) Infeasible("level jitter must be non-negative");
  CheckRange(descent_share, "descent_share", 0.0);
  if (!(descent_share.lo > 0.0 && descent_share.hi < 1.0)) {
    Infeasible("descent_share must lie inside (0, 1)");
  }
  if (!(max_length_ratio >= 1.0)) Infeasible("max_length_ratio must be >= 1");
  if (fixed_segments && *fixed_segments < 1) Infeasible("fixed_segments must be >= 1");
  if (fixed_level_offs) {
    if (*fixed_level_offs < 0) Infeasible("fixed_level_offs must be >= 0");
    const int n = fixed_segments ? *fixed_segments : static_cast<int>(segments.lo);
    if (*fixed_level_offs >= n) {
      Infeasible("level-off count " + std::to_string(*fixed_level_offs) +
                 " leaves no descending segment among " + std::to_string(n));
    }
  }
  if (mode == LabelMode::kRule) {
    if (rules.rules.empty()) Infeasible("rule mode needs a rule table");
    for (const auto& mf : partition.features) mf.Validate();
  }
}

GeneratedTrack GenerateTrack(const SynthSpec& spec, std::size_t index) {
  Rng rng(DeriveSeed(spec.seed, index));
  GeneratedTrack out;
  TrackTruth& truth = out.truth;

  char id[32];
  std::snprintf(id, sizeof(id), "SYN%06zu", index);
  out.track.flight_id = id;

  // Drivers of the label: segment count, gradient, mean turn.
  int n = 0;
  int level_offs = 0;
  if (spec.mode == LabelMode::kRule) {
    const FuzzyRule& rule = spec.rules.rules[rng.UniformInt(spec.rules.rules.size())];
    const auto& p = spec.partition.features;
    truth.gradient = DrawInSet(rng, p[0], rule.antecedent[0], spec.gradient,
                               spec.rule_margin, false);
    n = static_cast<int>(DrawInSet(rng, p[1], rule.antecedent[1], spec.segments,
                                   spec.rule_margin, true));
    truth.mdirection = DrawInSet(rng, p[2], rule.antecedent[2], spec.mdirection,
                                 spec.rule_margin, false);
    truth.rule_label = rule.consequent;
    const Range& frac = rule.consequent == kRuleLow ? spec.low_level_fraction
                                                    : spec.notlow_level_fraction;
    level_offs = static_cast<int>(std::lround(Draw(rng, frac) * n));
  } else {
    n = static_cast<int>(rng.UniformInt(static_cast<std::int64_t>(spec.segments.lo),
                                        static_cast<std::int64_t>(spec.segments.hi)));
    truth.gradient = Draw(rng, spec.gradient);
    truth.mdirection = Draw(rng, spec.mdirection);
    const int bad = (truth.gradient < spec.gradient_threshold) +
                    (n > spec.segments_threshold) +
                    (truth.mdirection > spec.mdirection_threshold);
    const double frac = std::clamp(
        spec.level_fraction[bad] + rng.Uniform(-spec.level_jitter, spec.level_jitter),
        0.0, 0.99);
    level_offs = static_cast<int>(std::lround(frac * n));
  }
  if (spec.fixed_segments) n = *spec.fixed_segments;
  level_offs = std::min(level_offs, n - 1);
  if (spec.fixed_level_offs) {
    if (*spec.fixed_level_offs >= n) {
      Infeasible(std::to_string(*spec.fixed_level_offs) + " level-offs in " +
                 std::to_string(n) + " segments");
    }
    level_offs = *spec.fixed_level_offs;
  }
  if (n < 1 || level_offs < 0) Infeasible("track needs at least one segment");
  truth.n_segments = n;
  truth.level_offs = level_offs;

  const std::vector<bool> level = PlaceLevelOffs(n, level_offs, rng);
  truth.compliant.resize(n);
  for (int i = 0; i < n; ++i) truth.compliant[i] = !level[i];
  truth.adherence = static_cast<double>(n - level_offs) / n;

  // Turn magnitudes rescaled so their mean is exactly the drawn value.
  std::vector<double> turns(n);
  double turn_sum = 0.0;
  for (double& t : turns) {
    t = rng.Uniform(0.2, 1.8);
    turn_sum += t;
  }
  for (double& t : turns) t *= truth.mdirection * n / turn_sum;

  // Horizontal path: enter on a North or East bearing and weave toward the
  // airport.
  const LatLon center = spec.tma.center();
  const double entry_bearing =
      rng.Bernoulli(0.5) ? rng.Uniform(-40.0, 40.0) : rng.Uniform(50.0, 130.0);
  const double distance = Draw(rng, spec.distance_nm);
  const double seg_nm = distance / n;
  std::vector<double> length(n, seg_nm);
  if (level_offs > 0) {
    const int k = level_offs;
    const double share = Draw(rng, spec.descent_share);
    double ratio = (1.0 - share) * (n - k) / (share * k);  // level : descending
    ratio = std::clamp(ratio, 1.0 / spec.max_length_ratio, spec.max_length_ratio);
    const double descending_nm = distance / ((n - k) + k * ratio);
    for (int i = 0; i < n; ++i) length[i] = level[i] ? ratio * descending_nm : descending_nm;
  }
  std::vector<LatLon> pos(n + 1);
  std::vector<double> heading(n + 1);
  pos[0] = DestinationPoint(center, NormalizeHeadingDeg(entry_bearing),
                            Draw(rng, spec.entry_radius_nm));
  heading[0] = NormalizeHeadingDeg(InitialBearingDeg(pos[0], center) +
                                   rng.Uniform(-3.0, 3.0));
  for (int i = 1; i <= n; ++i) {
    const double to_airport = InitialBearingDeg(pos[i - 1], center);
    const double sign = SignedTurn(heading[i - 1], to_airport) >= 0.0 ? 1.0 : -1.0;
    heading[i] = NormalizeHeadingDeg(heading[i - 1] + sign * turns[i - 1]);
    pos[i] = DestinationPoint(pos[i - 1], heading[i], length[i - 1]);
  }

  // Vertical path: constant gradient on descending segments, exact zero
  // altitude change on level ones, ending at the drawn altitude.
  std::vector<double> drop(n, 0.0);
  double total_drop = 0.0;
  for (int i = 0; i < n; ++i) {
    if (level[i]) continue;
    drop[i] = truth.gradient * GreatCircleNm(pos[i], pos[i + 1]) * kFeetPerNm;
    total_drop += drop[i];
  }
  const double end_alt = Draw(rng, spec.end_altitude_ft);

  const double speed = Draw(rng, spec.ground_speed_kt);
  const auto dt = std::clamp<std::int64_t>(std::llround(seg_nm * 3600.0 / speed),
                                           spec.interval_s[0], spec.interval_s[1]);
  const double nominal_speed = seg_nm * 3600.0 / static_cast<double>(dt);
  const std::int64_t t0 = kEpochStart + static_cast<std::int64_t>(index) * 3600;

  out.track.points.resize(n + 1);
  double alt = end_alt + total_drop;
  for (int i = 0; i <= n; ++i) {
    if (i > 0) alt -= drop[i - 1];
    TrackPoint& p = out.track.points[i];
    p.timestamp = t0 + i * dt;
    p.lat = pos[i].lat;
    p.lon = pos[i].lon;
    p.alt_ft = alt;
    p.gspeed_kt = nominal_speed * rng.Uniform(0.97, 1.03);
    p.heading_deg = heading[i];
  }

  out.weather.flight_id = out.track.flight_id;
  out.weather.start = DrawWeather(rng);
  out.weather.end = Drift(out.weather.start, rng);
  return out;
}

SynthFleet GenerateFleet(const SynthSpec& spec, const FeatureConfig& features) {
  spec.Validate();
  std::vector<GeneratedTrack> generated(spec.n_flights);
  ParallelFor(spec.n_flights,
              [&](std::size_t i) { generated[i] = GenerateTrack(spec, i); });

  SynthFleet fleet;
  std::vector<FlightFeatures> rows;
  rows.reserve(spec.n_flights);
  for (GeneratedTrack& g : generated) {
    const ArrivalTrack clipped = ClipToTma(g.track, spec.tma);
    const auto segments = SegmentTrack(clipped);
    if (segments.size() != g.truth.compliant.size()) {
      throw Error(ErrorCode::kDegenerateData,
                  g.track.flight_id + ": clipping removed generated points");
    }
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (IsCdoSegment(segments[s], features.level_threshold) != g.truth.compliant[s]) {
        throw Error(ErrorCode::kDegenerateData,
                    g.track.flight_id + ": segment " + std::to_string(s) +
                        " compliance disagrees with the generator");
      }
    }
    rows.push_back(JoinWeather(ComputeFlightFeatures(clipped, spec.tma, features),
                               g.weather.start, g.weather.end));
    fleet.tracks.push_back(std::move(g.track));
    fleet.weather.push_back(std::move(g.weather));
    fleet.truth.push_back(std::move(g.truth));
  }
  fleet.dataset = AssembleDataset(rows);
  return fleet;
}

}  // namespace cdoxai
