#include "cdoxai/ingest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "cdoxai/csv.h"
#include "cdoxai/error.h"

namespace cdoxai {

namespace {

constexpr std::string_view kColumns[] = {
    "flight_id", "timestamp", "lat", "lon", "alt_ft", "gspeed_kt",
    "heading_deg"};

[[noreturn]] void Malformed(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::kMalformedRow, why, line);
}

double RequireDouble(std::string_view field, std::string_view column,
                     std::size_t line) {
  const auto value = csv::ParseDouble(field);
  if (!value || !std::isfinite(*value)) {
    Malformed(line, "column " + std::string(column) + " is not a number: '" +
                        std::string(field) + "'");
  }
  return *value;
}

}  // namespace

void TmaConfig::Validate() const {
  if (!(radius_nm > 0.0) || !std::isfinite(radius_nm)) {
    throw Error(ErrorCode::kConfig, "TMA radius must be positive");
  }
  if (!(altitude_floor_ft >= 0.0) || !std::isfinite(altitude_floor_ft)) {
    throw Error(ErrorCode::kConfig, "altitude floor must be non-negative");
  }
  if (std::fabs(center_lat) > 90.0 || std::fabs(center_lon) > 180.0) {
    throw Error(ErrorCode::kConfig, "TMA center outside WGS-84 range");
  }
}

std::string_view SectorName(Sector sector) {
  return sector == Sector::kNorth ? "North" : "East";
}

TrackParseResult ParseTrackCsv(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  if (!csv::NextDataLine(in, line, line_number)) {
    throw Error(ErrorCode::kEmptyFile, "track file has no header");
  }
  const auto header = csv::SplitLine(line);
  std::size_t index[std::size(kColumns)];
  for (std::size_t c = 0; c < std::size(kColumns); ++c) {
    const auto found = csv::FindColumn(header, kColumns[c]);
    if (!found) {
      throw Error(ErrorCode::kMissingColumn,
                  "track file lacks column '" + std::string(kColumns[c]) + "'",
                  line_number);
    }
    index[c] = *found;
  }

  TrackParseResult result;
  std::map<std::string, std::size_t> track_of;
  std::vector<std::set<std::int64_t>> seen;
  std::size_t rows = 0;
  while (csv::NextDataLine(in, line, line_number)) {
    const auto fields = csv::SplitLine(line);
    if (fields.size() != header.size()) {
      Malformed(line_number, "expected " + std::to_string(header.size()) +
                                 " fields, got " +
                                 std::to_string(fields.size()));
    }
    ++rows;
    const std::string flight_id = csv::Trim(fields[index[0]]);
    if (flight_id.empty()) Malformed(line_number, "empty flight_id");

    TrackPoint p;
    const auto ts = csv::ParseInt(fields[index[1]]);
    if (!ts) Malformed(line_number, "timestamp is not an integer");
    p.timestamp = *ts;
    p.lat = RequireDouble(fields[index[2]], kColumns[2], line_number);
    p.lon = RequireDouble(fields[index[3]], kColumns[3], line_number);
    p.alt_ft = RequireDouble(fields[index[4]], kColumns[4], line_number);
    p.gspeed_kt = RequireDouble(fields[index[5]], kColumns[5], line_number);
    p.heading_deg = RequireDouble(fields[index[6]], kColumns[6], line_number);

    if (p.lat < -90.0 || p.lat > 90.0) Malformed(line_number, "lat out of range");
    if (p.lon < -180.0 || p.lon > 180.0) {
      Malformed(line_number, "lon out of range");
    }
    if (p.alt_ft < 0.0) Malformed(line_number, "negative altitude");
    if (p.gspeed_kt < 0.0) Malformed(line_number, "negative ground speed");
    if (p.heading_deg < 0.0 || p.heading_deg >= 360.0) {
      Malformed(line_number, "heading outside [0, 360)");
    }

    auto [it, inserted] = track_of.emplace(flight_id, result.tracks.size());
    if (inserted) {
      result.tracks.push_back({flight_id, {}});
      seen.emplace_back();
    }
    if (!seen[it->second].insert(p.timestamp).second) {
      result.warnings.push_back("line " + std::to_string(line_number) +
                                ": duplicate timestamp " +
                                std::to_string(p.timestamp) + " for flight " +
                                flight_id + " dropped");
      continue;
    }
    result.tracks[it->second].points.push_back(p);
  }
  if (rows == 0) throw Error(ErrorCode::kEmptyFile, "track file has no rows");

  for (auto& track : result.tracks) {
    std::stable_sort(track.points.begin(), track.points.end(),
                     [](const TrackPoint& a, const TrackPoint& b) {
                       return a.timestamp < b.timestamp;
                     });
  }
  return result;
}

TrackParseResult ParseTrackCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ParseTrackCsv(in);
}

void WriteTrackCsv(std::ostream& out, const std::vector<ArrivalTrack>& tracks) {
  out << kTrackCsvHeader << '\n';
  for (const auto& track : tracks) {
    for (const auto& p : track.points) {
      out << track.flight_id << ',' << p.timestamp << ','
          << csv::FormatDouble(p.lat) << ',' << csv::FormatDouble(p.lon) << ','
          << csv::FormatDouble(p.alt_ft) << ','
          << csv::FormatDouble(p.gspeed_kt) << ','
          << csv::FormatDouble(p.heading_deg) << '\n';
    }
  }
}

bool InsideTma(const TrackPoint& point, const TmaConfig& cfg) {
  return point.alt_ft >= cfg.altitude_floor_ft &&
         GreatCircleNm(point.position(), cfg.center()) <= cfg.radius_nm;
}

ArrivalTrack ClipToTma(const ArrivalTrack& track, const TmaConfig& cfg) {
  ArrivalTrack clipped{track.flight_id, {}};
  const auto first = std::find_if(
      track.points.begin(), track.points.end(),
      [&](const TrackPoint& p) { return InsideTma(p, cfg); });
  for (auto it = first; it != track.points.end() && InsideTma(*it, cfg); ++it) {
    clipped.points.push_back(*it);
  }
  if (clipped.points.size() < 2) {
    throw Error(ErrorCode::kTooFewPoints,
                "flight " + track.flight_id + " keeps " +
                    std::to_string(clipped.points.size()) +
                    " point(s) inside the TMA");
  }
  return clipped;
}

Sector EntrySector(const ArrivalTrack& track, const TmaConfig& cfg) {
  if (track.points.empty()) {
    throw Error(ErrorCode::kTooFewPoints, "empty track " + track.flight_id);
  }
  const double bearing =
      InitialBearingDeg(cfg.center(), track.points.front().position());
  if (bearing >= 315.0 || bearing < 45.0) return Sector::kNorth;
  if (bearing < 135.0) return Sector::kEast;
  throw Error(ErrorCode::kUnsupportedSector,
              "flight " + track.flight_id + " enters on bearing " +
                  csv::FormatDouble(bearing));
}

}  // namespace cdoxai
