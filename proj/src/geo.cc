#include "cdoxai/geo.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cdoxai {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

}  // namespace

double GreatCircleNm(const LatLon& a, const LatLon& b) {
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double dlat = (b.lat - a.lat) * kDegToRad;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double s_lat = std::sin(dlat / 2.0);
  const double s_lon = std::sin(dlon / 2.0);
  double h = s_lat * s_lat + std::cos(lat1) * std::cos(lat2) * s_lon * s_lon;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusNm * std::asin(std::sqrt(h));
}

double InitialBearingDeg(const LatLon& from, const LatLon& to) {
  const double lat1 = from.lat * kDegToRad;
  const double lat2 = to.lat * kDegToRad;
  const double dlon = (to.lon - from.lon) * kDegToRad;
  const double y = std::sin(dlon) * std::cos(lat2);
  const double x = std::cos(lat1) * std::sin(lat2) -
                   std::sin(lat1) * std::cos(lat2) * std::cos(dlon);
  return NormalizeHeadingDeg(std::atan2(y, x) * kRadToDeg);
}

LatLon DestinationPoint(const LatLon& origin, double bearing_deg,
                        double distance_nm) {
  const double delta = distance_nm / kEarthRadiusNm;
  const double theta = bearing_deg * kDegToRad;
  const double lat1 = origin.lat * kDegToRad;
  const double lon1 = origin.lon * kDegToRad;
  const double sin_lat2 = std::sin(lat1) * std::cos(delta) +
                          std::cos(lat1) * std::sin(delta) * std::cos(theta);
  const double lat2 = std::asin(std::clamp(sin_lat2, -1.0, 1.0));
  const double lon2 =
      lon1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(lat1),
                        std::cos(delta) - std::sin(lat1) * sin_lat2);
  double lon_deg = lon2 * kRadToDeg;
  lon_deg = std::fmod(lon_deg + 540.0, 360.0) - 180.0;
  return {lat2 * kRadToDeg, lon_deg};
}

double NormalizeHeadingDeg(double degrees) {
  double wrapped = std::fmod(degrees, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  // fmod of a tiny negative number can round up to exactly 360.
  if (wrapped >= 360.0) wrapped = 0.0;
  return wrapped;
}

double HeadingChangeDeg(double from_deg, double to_deg) {
  const double delta = std::fabs(NormalizeHeadingDeg(to_deg) -
                                 NormalizeHeadingDeg(from_deg));
  return std::min(delta, 360.0 - delta);
}

}  // namespace cdoxai
