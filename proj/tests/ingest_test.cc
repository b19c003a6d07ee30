#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "cdoxai/error.h"
#include "cdoxai/geo.h"
#include "cdoxai/ingest.h"
#include "oracles.h"
#include "test_util.h"

namespace cdoxai {
namespace {

constexpr char kHeader[] = "flight_id,timestamp,lat,lon,alt_ft,gspeed_kt,heading_deg\n";

TEST(GreatCircle, Identity) {
  EXPECT_EQ(GreatCircleNm({25.2854, 51.6080}, {25.2854, 51.6080}), 0.0);
}

TEST(GreatCircle, MatchesLawOfCosines) {
  const double d = GreatCircleNm({25.2854, 51.6080}, {25.2854, 52.6080});
  EXPECT_NEAR(d, oracle::LawOfCosinesNm(25.2854, 51.6080, 25.2854, 52.6080), 1e-6);
  EXPECT_NEAR(d, 54.26, 0.05);
}

TEST(GreatCircle, AntipodalMeridianArc) {
  EXPECT_NEAR(GreatCircleNm({0, 0}, {0, 180}), std::numbers::pi * 3440.065, 1e-9);
}

TEST(GreatCircle, DestinationRoundTrip) {
  const LatLon origin{25.0, 51.0};
  const LatLon p = DestinationPoint(origin, 37.0, 12.5);
  EXPECT_NEAR(GreatCircleNm(origin, p), 12.5, 1e-9);
  EXPECT_NEAR(InitialBearingDeg(origin, p), 37.0, 1e-9);
}

TEST(Heading, ChangeWrapsAround) {
  EXPECT_DOUBLE_EQ(HeadingChangeDeg(350, 10), 20);
  EXPECT_DOUBLE_EQ(HeadingChangeDeg(10, 350), 20);
  EXPECT_DOUBLE_EQ(HeadingChangeDeg(0, 180), 180);
  EXPECT_DOUBLE_EQ(NormalizeHeadingDeg(-30), 330);
}

TEST(ParseTrackCsv, TwoFlightsThreeRowsEach) {
  std::istringstream in(std::string(kHeader) +
                        "A,3,25.5,51.6,9000,250,180\n"
                        "B,1,25.4,51.9,8000,240,270\n"
                        "A,1,25.7,51.6,10000,260,180\n"
                        "A,2,25.6,51.6,9500,255,180\n"
                        "B,2,25.4,51.8,7800,238,270\n"
                        "B,3,25.4,51.7,7600,236,270\n");
  const auto r = ParseTrackCsv(in);
  ASSERT_EQ(r.tracks.size(), 2u);
  EXPECT_EQ(r.tracks[0].flight_id, "A");
  EXPECT_EQ(r.tracks[0].points.size(), 3u);
  EXPECT_EQ(r.tracks[1].points.size(), 3u);
  EXPECT_EQ(r.tracks[0].points.front().timestamp, 1);
  EXPECT_EQ(r.tracks[0].points.back().alt_ft, 9000);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(ParseTrackCsv, HeadingOutOfRangeReportsLine) {
  std::istringstream in(std::string(kHeader) +
                        "A,1,25.7,51.6,10000,260,180\n"
                        "A,2,25.6,51.6,9500,255,180\n"
                        "A,3,25.5,51.6,9000,250,180\n"
                        "A,4,25.4,51.6,8500,250,180\n"
                        "A,5,25.3,51.6,8000,250,180\n"
                        "A,6,25.2,51.6,7500,250,361\n");
  std::size_t line = 0;
  EXPECT_EQ(CodeOf([&] { ParseTrackCsv(in); }, &line), ErrorCode::kMalformedRow);
  EXPECT_EQ(line, 7u);
}

TEST(ParseTrackCsv, DuplicateTimestampKeepsFirst) {
  std::istringstream in(std::string(kHeader) +
                        "A,1,25.7,51.6,10000,260,180\n"
                        "A,2,25.6,51.6,9500,255,180\n"
                        "A,2,25.0,51.0,1,1,1\n");
  const auto r = ParseTrackCsv(in);
  ASSERT_EQ(r.tracks.size(), 1u);
  ASSERT_EQ(r.tracks[0].points.size(), 2u);
  EXPECT_EQ(r.tracks[0].points[1].alt_ft, 9500);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("duplicate"), std::string::npos);
}

TEST(ParseTrackCsv, Errors) {
  std::istringstream missing("flight_id,timestamp,lat,lon,alt_ft,gspeed_kt\nA,1,2,3,4,5\n");
  EXPECT_EQ(CodeOf([&] { ParseTrackCsv(missing); }), ErrorCode::kMissingColumn);
  std::istringstream empty("");
  EXPECT_EQ(CodeOf([&] { ParseTrackCsv(empty); }), ErrorCode::kEmptyFile);
  std::istringstream header_only(kHeader);
  EXPECT_EQ(CodeOf([&] { ParseTrackCsv(header_only); }), ErrorCode::kEmptyFile);
}

TEST(ParseTrackCsv, WriteParseRoundTripIsExact) {
  ArrivalTrack t{"QR1", {}};
  for (int i = 0; i < 5; ++i) {
    t.points.push_back({1'700'000'000 + i, 25.1 + 0.1 / 3 * i, 51.7 - i * 1e-7,
                        9000.0 - 1.0 / 7 * i, 250.125, std::nextafter(360.0, 0.0)});
  }
  std::ostringstream out;
  WriteTrackCsv(out, {t});
  std::istringstream in(out.str());
  const auto r = ParseTrackCsv(in);
  ASSERT_EQ(r.tracks.size(), 1u);
  EXPECT_EQ(r.tracks[0], t);
}

ArrivalTrack LineTrack(double bearing_from_center, double start_nm, double end_nm,
                       int n, double alt0, double alt1) {
  const TmaConfig cfg;
  ArrivalTrack t{"T", {}};
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    const LatLon p = DestinationPoint(cfg.center(), bearing_from_center,
                                      start_nm + (end_nm - start_nm) * f);
    t.points.push_back({i, p.lat, p.lon, alt0 + (alt1 - alt0) * f, 250, 180});
  }
  return t;
}

TEST(ClipToTma, InsideTrackUnchanged) {
  const auto t = LineTrack(0, 50, 10, 8, 12000, 5000);
  EXPECT_EQ(ClipToTma(t, TmaConfig{}), t);
}

TEST(ClipToTma, DropsPointsBelowFloor) {
  auto t = LineTrack(0, 50, 10, 12, 12000, 5000);
  for (int i = 7; i < 12; ++i) t.points[i].alt_ft = 3000;
  const auto c = ClipToTma(t, TmaConfig{});
  EXPECT_EQ(c.points.size(), 7u);
  EXPECT_EQ(ClipToTma(c, TmaConfig{}), c);
}

TEST(ClipToTma, DropsLeadingPointsOutsideRadius) {
  const auto t = LineTrack(90, 85, 25, 7, 15000, 6000);  // 10 NM steps
  const auto c = ClipToTma(t, TmaConfig{});
  EXPECT_EQ(c.points.size(), 4u);
  for (const auto& p : c.points) EXPECT_TRUE(InsideTma(p, TmaConfig{}));
}

TEST(ClipToTma, BoundaryPointIncluded) {
  const TmaConfig cfg;
  const LatLon p = DestinationPoint(cfg.center(), 10, 30);
  TrackPoint q{0, p.lat, p.lon, 3500, 0, 0};
  EXPECT_TRUE(InsideTma(q, cfg));
  TmaConfig tight = cfg;
  tight.radius_nm = GreatCircleNm(cfg.center(), p);
  EXPECT_TRUE(InsideTma(q, tight));
}

TEST(ClipToTma, FullyOutsideThrows) {
  const auto t = LineTrack(0, 100, 80, 5, 12000, 9000);
  EXPECT_EQ(CodeOf([&] { ClipToTma(t, TmaConfig{}); }), ErrorCode::kTooFewPoints);
}

TEST(EntrySector, AxisCases) {
  const TmaConfig cfg;
  EXPECT_EQ(EntrySector(LineTrack(0, 50, 10, 3, 9000, 5000), cfg), Sector::kNorth);
  EXPECT_EQ(EntrySector(LineTrack(90, 50, 10, 3, 9000, 5000), cfg), Sector::kEast);
  EXPECT_EQ(EntrySector(LineTrack(330, 50, 10, 3, 9000, 5000), cfg), Sector::kNorth);
  EXPECT_EQ(CodeOf([&] { EntrySector(LineTrack(180, 50, 10, 3, 9000, 5000), cfg); }),
            ErrorCode::kUnsupportedSector);
  EXPECT_EQ(CodeOf([&] { EntrySector(LineTrack(270, 50, 10, 3, 9000, 5000), cfg); }),
            ErrorCode::kUnsupportedSector);
}

}  // namespace
}  // namespace cdoxai
