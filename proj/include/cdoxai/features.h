#ifndef CDOXAI_FEATURES_H_
#define CDOXAI_FEATURES_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdoxai/dataset.h"
#include "cdoxai/geo.h"
#include "cdoxai/ingest.h"

namespace cdoxai {

// Interval between two consecutive retained track points.
struct Segment {
  TrackPoint from;
  TrackPoint to;
  double dist_nm = 0.0;
  double d_alt_ft = 0.0;             // to.alt - from.alt
  double heading_change_deg = 0.0;  // [0, 180]
};

std::vector<Segment> SegmentTrack(const ArrivalTrack& track);

// Haversine distance in nautical miles.
inline double GreatCircleNm(double lat1, double lon1, double lat2, double lon2) {
  return GreatCircleNm(LatLon{lat1, lon1}, LatLon{lat2, lon2});
}

inline constexpr double kDefaultLevelThreshold = 0.005;

// Dimensionless descent gradient -d_alt / horizontal distance, both in feet.
// Positive while descending.
double DescentGradient(const Segment& segment, double feet_per_nm = kFeetPerNm);

// A segment is CDO-compliant when it descends with a gradient of at least
// `level_threshold`. Throws kZeroLengthSegment when dist_nm == 0.
bool IsCdoSegment(const Segment& segment,
                  double level_threshold = kDefaultLevelThreshold);

// Compliant segment count over total segment count. Zero-length segments are
// counted as non-compliant. Throws kEmptySegments on an empty span.
double CdoAdherence(std::span<const Segment> segments,
                    double level_threshold = kDefaultLevelThreshold);

enum class CdoCategory { kLow = 0, kMedium = 1, kHigh = 2 };

std::string_view CdoCategoryName(CdoCategory category);
std::optional<CdoCategory> ParseCdoCategory(std::string_view name);

struct AdherenceThresholds {
  double medium = 0.30;  // adherence >= medium is at least Medium
  double high = 0.55;    // adherence >= high is High
};

// Throws kOutOfRange for adherence outside [0, 1] (or NaN).
CdoCategory Cdocat(double adherence, const AdherenceThresholds& thresholds = {});

enum class WeatherCategory {
  kClear = 0,
  kClouds,
  kRain,
  kMist,
  kHaze,
  kDust,
  kThunderstorm,
  kOther,
};

std::string_view WeatherCategoryName(WeatherCategory category);

// Case-insensitive lookup in the controlled vocabulary. Unknown strings map
// to kOther and append a warning when `warnings` is given.
WeatherCategory ParseWeatherCategory(std::string_view text,
                                     std::vector<std::string>* warnings = nullptr);

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// NaN marks a value that was absent from the source file.
struct WeatherRecord {
  double temp_f = kMissing;
  double feels_like_f = kMissing;
  double pressure_hpa = kMissing;
  double humidity_pct = kMissing;
  double dew_point_f = kMissing;
  double clouds_pct = kMissing;
  double wind_speed_mph = kMissing;
  double wind_deg = kMissing;
  WeatherCategory weather = WeatherCategory::kOther;

  // Column values in schema order; the category is encoded as its integer code.
  std::array<double, 9> Values() const;
  // Throws kInvalidWeather for present values outside their physical ranges.
  void Validate() const;
};

inline constexpr std::array<std::string_view, 9> kWeatherFieldNames = {
    "temp",     "feels_like", "pressure",   "humidity", "dew_point",
    "clouds",   "wind_speed", "wind_deg",   "weather"};

inline constexpr std::size_t kNumOperationalFeatures = 11;
inline constexpr std::size_t kNumFeatures = 29;

// Column order of the modeling matrix.
const std::vector<std::string>& FeatureNames();

struct FlightFeatures {
  std::string flight_id;
  Sector sector = Sector::kNorth;
  double altitude_ft = 0.0;
  double mspeed_kt = 0.0;
  double mdrate = 0.0;
  int flt_segments = 0;
  double distance_nm = 0.0;
  double mdirection_deg = 0.0;
  double start_lat = 0.0;
  double start_lon = 0.0;
  double end_lat = 0.0;
  double end_lon = 0.0;
  std::optional<WeatherRecord> start_weather;
  std::optional<WeatherRecord> end_weather;
  double cdo_adherence = 0.0;
  CdoCategory cdocat = CdoCategory::kLow;
};

struct FeatureConfig {
  double level_threshold = kDefaultLevelThreshold;
  AdherenceThresholds adherence;
  // Horizontal distance unit for MDRate; feet per NM yields a dimensionless
  // gradient, 1.0 yields ft/NM.
  double mdrate_feet_per_nm = kFeetPerNm;
};

// Fills the 11 operational fields. MDRate averages the descent gradient over
// descending segments only (0 when none descend); MSpeed averages the mean
// endpoint ground speed of each segment.
FlightFeatures ExtractOperationalFeatures(const ArrivalTrack& track,
                                          std::span<const Segment> segments,
                                          const TmaConfig& tma,
                                          const FeatureConfig& cfg = {});

// Operational features plus CDO adherence and category for a clipped track.
FlightFeatures ComputeFlightFeatures(const ArrivalTrack& track,
                                     const TmaConfig& tma,
                                     const FeatureConfig& cfg = {});

FlightFeatures JoinWeather(FlightFeatures features, const WeatherRecord& start,
                           const WeatherRecord& end);

// Stacks complete flights into the 29-column matrix. Sector is encoded as
// North=0, East=1; labels are the CdoCategory indices. Throws kIncompleteRow
// naming the flight and missing columns.
Dataset AssembleDataset(std::span<const FlightFeatures> flights);

// Weather CSV: flight_id,point,temp,feels_like,pressure,humidity,dew_point,
// clouds,wind_speed,wind_deg,weather with point in {start, end}.
struct WeatherPair {
  std::optional<WeatherRecord> start;
  std::optional<WeatherRecord> end;
};

struct WeatherParseResult {
  std::map<std::string, WeatherPair> records;
  std::vector<std::string> warnings;
};

inline constexpr std::string_view kWeatherCsvHeader =
    "flight_id,point,temp,feels_like,pressure,humidity,dew_point,clouds,"
    "wind_speed,wind_deg,weather";

WeatherParseResult ParseWeatherCsv(std::istream& in);
WeatherParseResult ParseWeatherCsv(const std::filesystem::path& path);

struct FlightWeather {
  std::string flight_id;
  WeatherRecord start;
  WeatherRecord end;
};

void WriteWeatherCsv(std::ostream& out, std::span<const FlightWeather> rows);

}  // namespace cdoxai

#endif  // CDOXAI_FEATURES_H_
