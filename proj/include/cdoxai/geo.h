#ifndef CDOXAI_GEO_H_
#define CDOXAI_GEO_H_

namespace cdoxai {

inline constexpr double kEarthRadiusNm = 3440.065;
inline constexpr double kFeetPerNm = 6076.12;

struct LatLon {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
};

// Haversine distance on a sphere of radius kEarthRadiusNm.
double GreatCircleNm(const LatLon& a, const LatLon& b);

// Initial great-circle bearing from `from` to `to`, degrees in [0, 360).
double InitialBearingDeg(const LatLon& from, const LatLon& to);

// Point reached by travelling `distance_nm` from `origin` on the initial
// bearing `bearing_deg`.
LatLon DestinationPoint(const LatLon& origin, double bearing_deg,
                        double distance_nm);

// Wraps any angle into [0, 360).
double NormalizeHeadingDeg(double degrees);

// Smallest absolute angle between two headings, in [0, 180].
double HeadingChangeDeg(double from_deg, double to_deg);

}  // namespace cdoxai

#endif  // CDOXAI_GEO_H_
