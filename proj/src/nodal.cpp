#include "rwlab/nodal.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "rwlab/error.hpp"

namespace rwlab {
namespace {

constexpr double kZeroNudge = 1e-12;

double nudged(double v) { return v == 0.0 ? kZeroNudge : v; }

// Crossing on the edge from p (value fp) to q (value fq); fp and fq have opposite sign.
Point crossing(Point p, double fp, Point q, double fq) {
  const double t = fp / (fp - fq);
  return {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
}

}  // namespace

double Segment::length() const { return std::hypot(b.x - a.x, b.y - a.y); }

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

NodalCurve nodal_length(const FieldGrid& grid) {
  const int n = grid.size();
  if (n < 2) throw DataError("nodal_length: grid needs at least 2 points per side");
  for (double v : grid.nodes.values) {
    if (std::isnan(v)) throw DataError("nodal_length: grid contains NaN");
  }
  for (double v : grid.centers.values) {
    if (std::isnan(v)) throw DataError("nodal_length: grid contains NaN");
  }

  NodalCurve curve;
  const auto& f = grid.nodes;
  for (int r = 0; r + 1 < n; ++r) {
    for (int c = 0; c + 1 < n; ++c) {
      // corners counter-clockwise from the lower left
      const double v00 = nudged(f.value(r, c));
      const double v10 = nudged(f.value(r, c + 1));
      const double v11 = nudged(f.value(r + 1, c + 1));
      const double v01 = nudged(f.value(r + 1, c));
      const bool s00 = v00 > 0.0;
      const bool s10 = v10 > 0.0;
      const bool s11 = v11 > 0.0;
      const bool s01 = v01 > 0.0;
      if (s00 == s10 && s10 == s11 && s11 == s01) continue;

      const Point p00{grid.node_x(c), grid.node_y(r)};
      const Point p10{grid.node_x(c + 1), grid.node_y(r)};
      const Point p11{grid.node_x(c + 1), grid.node_y(r + 1)};
      const Point p01{grid.node_x(c), grid.node_y(r + 1)};

      // edges: bottom, right, top, left
      std::array<Point, 4> cross{};
      std::array<bool, 4> has{s00 != s10, s10 != s11, s01 != s11, s00 != s01};
      if (has[0]) cross[0] = crossing(p00, v00, p10, v10);
      if (has[1]) cross[1] = crossing(p10, v10, p11, v11);
      if (has[2]) cross[2] = crossing(p01, v01, p11, v11);
      if (has[3]) cross[3] = crossing(p00, v00, p01, v01);

      if (has[0] && has[1] && has[2] && has[3]) {
        const bool center_positive = nudged(grid.centers.value(r, c)) > 0.0;
        if (center_positive == s00) {
          // v00's sign connects through the center: cut off the 10 and 01 corners
          curve.segments.push_back({cross[0], cross[1]});
          curve.segments.push_back({cross[2], cross[3]});
        } else {
          curve.segments.push_back({cross[3], cross[0]});
          curve.segments.push_back({cross[1], cross[2]});
        }
        continue;
      }
      std::array<Point, 2> ends{};
      int found = 0;
      for (int e = 0; e < 4; ++e) {
        if (has[e]) ends[found++] = cross[e];
      }
      curve.segments.push_back({ends[0], ends[1]});
    }
  }

  std::vector<double> lengths;
  lengths.reserve(curve.segments.size());
  for (const auto& s : curve.segments) lengths.push_back(s.length());
  curve.total_length = pairwise_sum(lengths);
  return curve;
}

double mean_length_formula(double energy, const Domain& domain) {
  if (!(energy > 0.0)) throw DomainError("mean_length_formula: energy must be positive");
  return domain.area() * std::numbers::pi / std::numbers::sqrt2 * std::sqrt(energy);
}

void write_segments_csv(const NodalCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string());
  out << "x0,y0,x1,y1\n";
  char line[128];
  for (const auto& s : curve.segments) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", s.a.x, s.a.y, s.b.x, s.b.y);
    out << line;
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace rwlab
