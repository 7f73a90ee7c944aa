#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "rwlab/randomwave.hpp"

namespace rwlab {

struct Point {
  double x;
  double y;
};

struct Segment {
  Point a;
  Point b;
  double length() const;
};

/// Polyline approximation of the zero set of a sampled field.
struct NodalCurve {
  std::vector<Segment> segments;
  double total_length = 0.0;
};

/// Marching-squares zero set with linear edge interpolation. Saddle cells
/// are resolved by the sign of the cell-center sample. Throws DataError on NaN.
NodalCurve nodal_length(const FieldGrid& grid);

/// Expected nodal length area(D) * pi / sqrt(2) * sqrt(E).
double mean_length_formula(double energy, const Domain& domain);

/// CSV with header x0,y0,x1,y1.
void write_segments_csv(const NodalCurve& curve, const std::filesystem::path& path);

/// Pairwise summation in a fixed order; the result depends only on the input sequence.
double pairwise_sum(std::span<const double> values);

}  // namespace rwlab
