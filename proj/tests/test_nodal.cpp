#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>

#include "rwlab/error.hpp"
#include "rwlab/nodal.hpp"
#include "rwlab/randomwave.hpp"

using namespace rwlab;

TEST_CASE("straight line through the unit square") {
  const auto g = synthetic_grid(Domain{}, 11, [](double, double y) { return y - 0.5; });
  const auto curve = nodal_length(g);
  CHECK(curve.total_length == doctest::Approx(1.0).epsilon(1e-14));
  // the same line passing exactly through a node row
  const auto g2 = synthetic_grid(Domain{}, 11, [](double, double y) { return y - 0.3; });
  CHECK(nodal_length(g2).total_length == doctest::Approx(1.0).epsilon(1e-9));
  // oblique line y = x: length sqrt 2 with the diagonal zeros nudged
  const auto g3 = synthetic_grid(Domain{}, 21, [](double x, double y) { return y - x + 1e-3; });
  CHECK(nodal_length(g3).total_length == doctest::Approx(std::numbers::sqrt2).epsilon(2e-3));
}

TEST_CASE("parallel nodal lines of a cosine") {
  const double k = 6.0 * std::numbers::pi;
  const auto g = synthetic_grid(Domain{}, 301, [k](double x, double) { return std::cos(k * x); });
  CHECK(std::abs(nodal_length(g).total_length - 6.0) < 1e-9);
}

TEST_CASE("circle converges to its circumference") {
  const Domain d{2.0, -1.0, -1.0};
  auto circle = [](double x, double y) { return x * x + y * y - 0.09; };
  const auto fine = synthetic_grid(d, 2001, circle);
  const double exact = 2.0 * std::numbers::pi * 0.3;
  CHECK(std::abs(nodal_length(fine).total_length - exact) / exact < 0.01);
  const double coarse_err =
      std::abs(nodal_length(synthetic_grid(d, 51, circle)).total_length - exact);
  const double mid_err =
      std::abs(nodal_length(synthetic_grid(d, 201, circle)).total_length - exact);
  CHECK(mid_err < coarse_err);
  // piecewise linear chords are inscribed, so they underestimate
  CHECK(nodal_length(fine).total_length < exact);
}

TEST_CASE("sign flip leaves the nodal set unchanged") {
  const auto cfg = make_config(100.0, GridRule{}, Domain{}, 21, 0);
  auto g = sample_field(cfg);
  const double len = nodal_length(g).total_length;
  for (auto& v : g.nodes.values) v = -v;
  for (auto& v : g.centers.values) v = -v;
  CHECK(nodal_length(g).total_length == doctest::Approx(len).epsilon(1e-12));
}

TEST_CASE("refinement of a random field stabilises") {
  GridRule coarse{10.0, 4.0}, fine{40.0, 4.0};
  const auto a = nodal_length(sample_field(make_config(25.0, coarse, Domain{}, 9, 0)));
  const auto b = nodal_length(sample_field(make_config(25.0, fine, Domain{}, 9, 0)));
  CHECK(std::abs(a.total_length - b.total_length) / b.total_length < 0.02);
}

TEST_CASE("NaN in the field is a data error") {
  auto g = synthetic_grid(Domain{}, 11, [](double x, double) { return x - 0.5; });
  g.nodes.value(3, 4) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(nodal_length(g), DataError);
}

TEST_CASE("segment invariants") {
  const auto cfg = make_config(100.0, GridRule{}, Domain{}, 4, 3);
  const auto g = sample_field(cfg);
  const auto curve = nodal_length(g);
  REQUIRE(!curve.segments.empty());
  double sum = 0.0;
  const double tol = 1e-12;
  for (const auto& s : curve.segments) {
    for (const auto& p : {s.a, s.b}) {
      CHECK(p.x >= -tol);
      CHECK(p.x <= 1.0 + tol);
      CHECK(p.y >= -tol);
      CHECK(p.y <= 1.0 + tol);
    }
    CHECK(s.length() <= g.spacing * std::numbers::sqrt2 + tol);
    sum += s.length();
  }
  CHECK(curve.total_length == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("expected nodal length formula") {
  CHECK(mean_length_formula(100.0, Domain{}) == doctest::Approx(22.2144).epsilon(1e-5));
  CHECK(mean_length_formula(1.0, Domain{}) == doctest::Approx(2.2214).epsilon(1e-4));
  CHECK(mean_length_formula(100.0, Domain{2.0, 0.0, 0.0}) ==
        doctest::Approx(4.0 * mean_length_formula(100.0, Domain{})));
}

TEST_CASE("pairwise sum") {
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
}

TEST_CASE("segments csv") {
  const auto g = synthetic_grid(Domain{}, 5, [](double, double y) { return y - 0.5; });
  const auto curve = nodal_length(g);
  const auto path = std::filesystem::temp_directory_path() / "rwlab_segments_test.csv";
  write_segments_csv(curve, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x0,y0,x1,y1");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == static_cast<int>(curve.segments.size()));
  std::filesystem::remove(path);
}
