#include "cdoxai/features.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "cdoxai/csv.h"
#include "cdoxai/error.h"

namespace cdoxai {

std::vector<Segment> SegmentTrack(const ArrivalTrack& track) {
  std::vector<Segment> segments;
  if (track.points.size() < 2) return segments;
  segments.reserve(track.points.size() - 1);
  for (std::size_t i = 0; i + 1 < track.points.size(); ++i) {
    const TrackPoint& a = track.points[i];
    const TrackPoint& b = track.points[i + 1];
    segments.push_back({a, b, GreatCircleNm(a.position(), b.position()),
                        b.alt_ft - a.alt_ft,
                        HeadingChangeDeg(a.heading_deg, b.heading_deg)});
  }
  return segments;
}

double DescentGradient(const Segment& segment, double feet_per_nm) {
  return -segment.d_alt_ft / (segment.dist_nm * feet_per_nm);
}

bool IsCdoSegment(const Segment& segment, double level_threshold) {
  if (segment.dist_nm == 0.0) {
    throw Error(ErrorCode::kZeroLengthSegment,
                "segment at t=" + std::to_string(segment.from.timestamp) +
                    " has zero horizontal length");
  }
  return segment.d_alt_ft < 0.0 &&
         DescentGradient(segment) >= level_threshold;
}

double CdoAdherence(std::span<const Segment> segments, double level_threshold) {
  if (segments.empty()) {
    throw Error(ErrorCode::kEmptySegments, "no segments to score");
  }
  std::size_t compliant = 0;
  for (const Segment& s : segments) {
    if (s.dist_nm > 0.0 && IsCdoSegment(s, level_threshold)) ++compliant;
  }
  return static_cast<double>(compliant) / static_cast<double>(segments.size());
}

std::string_view CdoCategoryName(CdoCategory category) {
  switch (category) {
    case CdoCategory::kLow: return "Low";
    case CdoCategory::kMedium: return "Medium";
    case CdoCategory::kHigh: return "High";
  }
  return "Low";
}

std::optional<CdoCategory> ParseCdoCategory(std::string_view name) {
  if (name == "Low") return CdoCategory::kLow;
  if (name == "Medium") return CdoCategory::kMedium;
  if (name == "High") return CdoCategory::kHigh;
  return std::nullopt;
}

CdoCategory Cdocat(double adherence, const AdherenceThresholds& thresholds) {
  if (!(adherence >= 0.0 && adherence <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange,
                "adherence " + csv::FormatDouble(adherence) +
                    " outside [0, 1]");
  }
  if (adherence >= thresholds.high) return CdoCategory::kHigh;
  if (adherence >= thresholds.medium) return CdoCategory::kMedium;
  return CdoCategory::kLow;
}

namespace {

constexpr std::string_view kWeatherVocabulary[] = {
    "clear", "clouds", "rain", "mist", "haze", "dust", "thunderstorm", "other"};

}  // namespace

std::string_view WeatherCategoryName(WeatherCategory category) {
  return kWeatherVocabulary[static_cast<int>(category)];
}

WeatherCategory ParseWeatherCategory(std::string_view text,
                                     std::vector<std::string>* warnings) {
  std::string lowered = csv::Trim(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (std::size_t i = 0; i < std::size(kWeatherVocabulary); ++i) {
    if (lowered == kWeatherVocabulary[i]) return static_cast<WeatherCategory>(i);
  }
  if (warnings != nullptr) {
    warnings->push_back("UnknownWeatherCategory: '" + std::string(text) +
                        "' mapped to other");
  }
  return WeatherCategory::kOther;
}

std::array<double, 9> WeatherRecord::Values() const {
  return {temp_f,     feels_like_f,   pressure_hpa, humidity_pct,
          dew_point_f, clouds_pct,    wind_speed_mph, wind_deg,
          static_cast<double>(static_cast<int>(weather))};
}

void WeatherRecord::Validate() const {
  auto check = [](double v, double lo, double hi, bool hi_open,
                  std::string_view name) {
    if (std::isnan(v)) return;
    const bool ok = std::isfinite(v) && v >= lo && (hi_open ? v < hi : v <= hi);
    if (!ok) {
      throw Error(ErrorCode::kInvalidWeather,
                  std::string(name) + " = " + csv::FormatDouble(v) +
                      " out of range");
    }
  };
  const double inf = std::numeric_limits<double>::max();
  check(temp_f, -inf, inf, false, "temp");
  check(feels_like_f, -inf, inf, false, "feels_like");
  check(pressure_hpa, 0.0, inf, false, "pressure");
  check(humidity_pct, 0.0, 100.0, false, "humidity");
  check(dew_point_f, -inf, inf, false, "dew_point");
  check(clouds_pct, 0.0, 100.0, false, "clouds");
  check(wind_speed_mph, 0.0, inf, false, "wind_speed");
  check(wind_deg, 0.0, 360.0, true, "wind_deg");
}

const std::vector<std::string>& FeatureNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {
        "Sector",      "Altitude",   "MSpeed",    "MDRate",
        "FltSegments", "Distance_NM", "MDirection", "StartLati",
        "StartLong",   "EndLati",    "EndLong"};
    for (const char* prefix : {"start_", "end_"}) {
      for (auto field : kWeatherFieldNames) {
        n.push_back(prefix + std::string(field));
      }
    }
    return n;
  }();
  return names;
}

FlightFeatures ExtractOperationalFeatures(const ArrivalTrack& track,
                                          std::span<const Segment> segments,
                                          const TmaConfig& tma,
                                          const FeatureConfig& cfg) {
  if (segments.empty()) {
    throw Error(ErrorCode::kEmptySegments,
                "flight " + track.flight_id + " has no segments");
  }
  FlightFeatures f;
  f.flight_id = track.flight_id;
  f.sector = EntrySector(track, tma);
  f.altitude_ft = track.points.front().alt_ft;

  double speed_sum = 0.0;
  double distance_sum = 0.0;
  double heading_sum = 0.0;
  double gradient_sum = 0.0;
  std::size_t descending = 0;
  for (const Segment& s : segments) {
    speed_sum += 0.5 * (s.from.gspeed_kt + s.to.gspeed_kt);
    distance_sum += s.dist_nm;
    heading_sum += s.heading_change_deg;
    if (s.d_alt_ft < 0.0 && s.dist_nm > 0.0) {
      gradient_sum += DescentGradient(s, cfg.mdrate_feet_per_nm);
      ++descending;
    }
  }
  const double n = static_cast<double>(segments.size());
  f.mspeed_kt = speed_sum / n;
  f.mdrate = descending > 0 ? gradient_sum / static_cast<double>(descending) : 0.0;
  f.flt_segments = static_cast<int>(segments.size());
  f.distance_nm = distance_sum;
  f.mdirection_deg = heading_sum / n;
  f.start_lat = track.points.front().lat;
  f.start_lon = track.points.front().lon;
  f.end_lat = track.points.back().lat;
  f.end_lon = track.points.back().lon;
  return f;
}

FlightFeatures ComputeFlightFeatures(const ArrivalTrack& track,
                                     const TmaConfig& tma,
                                     const FeatureConfig& cfg) {
  const auto segments = SegmentTrack(track);
  FlightFeatures f = ExtractOperationalFeatures(track, segments, tma, cfg);
  f.cdo_adherence = CdoAdherence(segments, cfg.level_threshold);
  f.cdocat = Cdocat(f.cdo_adherence, cfg.adherence);
  return f;
}

FlightFeatures JoinWeather(FlightFeatures features, const WeatherRecord& start,
                           const WeatherRecord& end) {
  start.Validate();
  end.Validate();
  features.start_weather = start;
  features.end_weather = end;
  return features;
}

Dataset AssembleDataset(std::span<const FlightFeatures> flights) {
  Dataset ds;
  ds.feature_names = FeatureNames();
  ds.features = Matrix(0, kNumFeatures);
  const auto& names = FeatureNames();
  for (const FlightFeatures& f : flights) {
    std::array<double, kNumFeatures> row{};
    row[0] = f.sector == Sector::kNorth ? 0.0 : 1.0;
    row[1] = f.altitude_ft;
    row[2] = f.mspeed_kt;
    row[3] = f.mdrate;
    row[4] = static_cast<double>(f.flt_segments);
    row[5] = f.distance_nm;
    row[6] = f.mdirection_deg;
    row[7] = f.start_lat;
    row[8] = f.start_lon;
    row[9] = f.end_lat;
    row[10] = f.end_lon;
    std::array<double, 9> start_values;
    std::array<double, 9> end_values;
    start_values.fill(kMissing);
    end_values.fill(kMissing);
    if (f.start_weather) start_values = f.start_weather->Values();
    if (f.end_weather) end_values = f.end_weather->Values();
    std::copy(start_values.begin(), start_values.end(),
              row.begin() + kNumOperationalFeatures);
    std::copy(end_values.begin(), end_values.end(),
              row.begin() + kNumOperationalFeatures + 9);

    std::string missing;
    for (std::size_t c = 0; c < kNumFeatures; ++c) {
      if (!std::isfinite(row[c])) {
        if (!missing.empty()) missing += ", ";
        missing += names[c];
      }
    }
    if (!missing.empty()) {
      throw Error(ErrorCode::kIncompleteRow,
                  "flight " + f.flight_id + " missing: " + missing);
    }
    ds.flight_ids.push_back(f.flight_id);
    ds.features.AppendRow(row);
    ds.adherence.push_back(f.cdo_adherence);
    ds.labels.push_back(static_cast<int>(f.cdocat));
  }
  return ds;
}

WeatherParseResult ParseWeatherCsv(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  if (!csv::NextDataLine(in, line, line_number)) {
    throw Error(ErrorCode::kEmptyFile, "weather file has no header");
  }
  const auto header = csv::SplitLine(line);
  constexpr std::string_view kKeyColumns[] = {"flight_id", "point"};
  std::array<std::size_t, 11> index{};
  for (std::size_t c = 0; c < 2; ++c) {
    const auto found = csv::FindColumn(header, kKeyColumns[c]);
    if (!found) {
      throw Error(ErrorCode::kMissingColumn,
                  "weather file lacks column '" + std::string(kKeyColumns[c]) +
                      "'",
                  line_number);
    }
    index[c] = *found;
  }
  for (std::size_t c = 0; c < kWeatherFieldNames.size(); ++c) {
    const auto found = csv::FindColumn(header, kWeatherFieldNames[c]);
    if (!found) {
      throw Error(ErrorCode::kMissingColumn,
                  "weather file lacks column '" +
                      std::string(kWeatherFieldNames[c]) + "'",
                  line_number);
    }
    index[c + 2] = *found;
  }

  WeatherParseResult result;
  while (csv::NextDataLine(in, line, line_number)) {
    const auto fields = csv::SplitLine(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kMalformedRow, "wrong field count", line_number);
    }
    const std::string flight_id = csv::Trim(fields[index[0]]);
    const std::string point = csv::Trim(fields[index[1]]);
    if (point != "start" && point != "end") {
      throw Error(ErrorCode::kMalformedRow,
                  "point must be start or end, got '" + point + "'",
                  line_number);
    }
    WeatherRecord record;
    double* numeric[] = {&record.temp_f,       &record.feels_like_f,
                         &record.pressure_hpa, &record.humidity_pct,
                         &record.dew_point_f,  &record.clouds_pct,
                         &record.wind_speed_mph, &record.wind_deg};
    for (std::size_t c = 0; c < 8; ++c) {
      const std::string text = csv::Trim(fields[index[c + 2]]);
      if (text.empty()) continue;
      const auto value = csv::ParseDouble(text);
      if (!value) {
        throw Error(ErrorCode::kMalformedRow,
                    std::string(kWeatherFieldNames[c]) + " is not a number",
                    line_number);
      }
      *numeric[c] = *value;
    }
    record.weather =
        ParseWeatherCategory(fields[index[10]], &result.warnings);
    auto& pair = result.records[flight_id];
    (point == "start" ? pair.start : pair.end) = record;
  }
  return result;
}

WeatherParseResult ParseWeatherCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ParseWeatherCsv(in);
}

void WriteWeatherCsv(std::ostream& out, std::span<const FlightWeather> rows) {
  out << kWeatherCsvHeader << '\n';
  auto emit = [&](const std::string& id, std::string_view point,
                  const WeatherRecord& r) {
    out << id << ',' << point;
    for (double v : {r.temp_f, r.feels_like_f, r.pressure_hpa, r.humidity_pct,
                     r.dew_point_f, r.clouds_pct, r.wind_speed_mph,
                     r.wind_deg}) {
      out << ',';
      if (!std::isnan(v)) out << csv::FormatDouble(v);
    }
    out << ',' << WeatherCategoryName(r.weather) << '\n';
  };
  for (const auto& row : rows) {
    emit(row.flight_id, "start", row.start);
    emit(row.flight_id, "end", row.end);
  }
}

}  // namespace cdoxai
