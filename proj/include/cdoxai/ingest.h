#ifndef CDOXAI_INGEST_H_
#define CDOXAI_INGEST_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cdoxai/geo.h"

namespace cdoxai {

struct TrackPoint {
  std::int64_t timestamp = 0;  // UTC seconds
  double lat = 0.0;            // degrees
  double lon = 0.0;            // degrees
  double alt_ft = 0.0;
  double gspeed_kt = 0.0;
  double heading_deg = 0.0;  // [0, 360)

  LatLon position() const { return {lat, lon}; }
  friend bool operator==(const TrackPoint&, const TrackPoint&) = default;
};

struct ArrivalTrack {
  std::string flight_id;
  std::vector<TrackPoint> points;  // strictly increasing timestamps

  friend bool operator==(const ArrivalTrack&, const ArrivalTrack&) = default;
};

struct TmaConfig {
  double center_lat = 25.2731;  // OTHH airport reference point
  double center_lon = 51.6081;
  double radius_nm = 60.0;
  double altitude_floor_ft = 3500.0;

  LatLon center() const { return {center_lat, center_lon}; }
  // Throws kConfig unless radius_nm > 0 and altitude_floor_ft >= 0.
  void Validate() const;
};

enum class Sector { kNorth = 0, kEast = 1 };

std::string_view SectorName(Sector sector);

inline constexpr std::string_view kTrackCsvHeader =
    "flight_id,timestamp,lat,lon,alt_ft,gspeed_kt,heading_deg";

struct TrackParseResult {
  std::vector<ArrivalTrack> tracks;  // in order of first appearance
  std::vector<std::string> warnings;
};

// Parses the track CSV schema. Rows with unparseable or out-of-range fields
// raise kMalformedRow carrying the physical line number. Within a flight the
// first row for a timestamp wins; later duplicates are dropped with a warning.
TrackParseResult ParseTrackCsv(std::istream& in);
TrackParseResult ParseTrackCsv(const std::filesystem::path& path);

// Writes tracks in the same schema; values use shortest round-trip decimal
// formatting so ParseTrackCsv(WriteTrackCsv(t)) == t field-for-field.
void WriteTrackCsv(std::ostream& out, const std::vector<ArrivalTrack>& tracks);

// True when a point lies in the geofenced disc (boundary inclusive) and at or
// above the altitude floor.
bool InsideTma(const TrackPoint& point, const TmaConfig& cfg);

// Keeps the contiguous run of points starting at the first point inside the
// TMA and ending just before the first point that leaves the disc or drops
// below the floor. Throws kTooFewPoints when fewer than two points remain.
ArrivalTrack ClipToTma(const ArrivalTrack& track, const TmaConfig& cfg);

// Sector of the entry point as seen from the airport: bearing in [315, 45) is
// North, [45, 135) is East. Anything else throws kUnsupportedSector.
Sector EntrySector(const ArrivalTrack& track, const TmaConfig& cfg);

}  // namespace cdoxai

#endif  // CDOXAI_INGEST_H_
