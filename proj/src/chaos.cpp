#include "rwlab/chaos.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "rwlab/error.hpp"
#include "rwlab/nodal.hpp"
#include "rwlab/specfun.hpp"

namespace rwlab {

double derivative_scale(double energy) {
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw DomainError("energy must be positive and finite");
  }
  return std::sqrt(2.0 * std::numbers::pi * std::numbers::pi * energy);
}

double trispectrum(const FieldGrid& grid) {
  const auto& v = grid.centers.values;
  std::vector<double> cells(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) cells[i] = hermite4(v[i]);
  return pairwise_sum(cells) * grid.spacing * grid.spacing;
}

double m_statistic(double energy, double h4) { return -derivative_scale(energy) / 96.0 * h4; }

ChaosTerms chaos4_terms(const FieldGrid& grid) {
  const auto& c = grid.centers;
  const std::size_t cells = c.values.size();
  std::array<std::vector<double>, 6> integrand;
  for (auto& plane : integrand) plane.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double b = c.values[i];
    const double g1 = c.d1[i];
    const double g2 = c.d2[i];
    const double h2b = hermite2(b);
    const double h2g1 = hermite2(g1);
    const double h2g2 = hermite2(g2);
    integrand[0][i] = hermite4(b);
    integrand[1][i] = hermite4(g1);
    integrand[2][i] = hermite4(g2);
    integrand[3][i] = h2g1 * h2g2;
    integrand[4][i] = h2b * h2g1;
    integrand[5][i] = h2b * h2g2;
  }
  const double cell_area = grid.spacing * grid.spacing;
  ChaosTerms terms{};
  for (int j = 0; j < 6; ++j) terms[j] = pairwise_sum(integrand[j]) * cell_area;
  return terms;
}

double chaos4_projection(double energy, const ChaosTerms& a) {
  return derivative_scale(energy) / 128.0 *
         (8.0 * a[0] - a[1] - a[2] - 2.0 * a[3] - 8.0 * a[4] - 8.0 * a[5]);
}

ChaosRecord make_record(const FieldGrid& grid, double energy, std::uint64_t replication_index,
                        double nodal_len) {
  ChaosRecord rec;
  rec.replication_index = replication_index;
  rec.energy = energy;
  rec.nodal_len = nodal_len;
  rec.a = chaos4_terms(grid);
  rec.h4 = rec.a[0];
  rec.m_stat = m_statistic(energy, rec.h4);
  rec.l4 = chaos4_projection(energy, rec.a);
  return rec;
}

std::string format_record(const ChaosRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                static_cast<unsigned long long>(r.replication_index), r.energy, r.nodal_len, r.h4,
                r.m_stat, r.a[0], r.a[1], r.a[2], r.a[3], r.a[4], r.a[5], r.l4);
  return buf;
}

ChaosRecord parse_record(const std::string& line, const std::string& where) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) fields.push_back(item);
  if (fields.size() != 12) {
    throw ParseError(where + ": expected 12 columns, found " + std::to_string(fields.size()));
  }
  auto number = [&](std::size_t i) {
    const char* begin = fields[i].c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v)) {
      throw ParseError(where + ": column " + std::to_string(i + 1) + " is not a finite number: '" +
                       fields[i] + "'");
    }
    return v;
  };
  ChaosRecord r;
  {
    const char* begin = fields[0].c_str();
    char* end = nullptr;
    const unsigned long long idx = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0') {
      throw ParseError(where + ": bad replication_index '" + fields[0] + "'");
    }
    r.replication_index = idx;
  }
  r.energy = number(1);
  r.nodal_len = number(2);
  r.h4 = number(3);
  r.m_stat = number(4);
  for (int j = 0; j < 6; ++j) r.a[j] = number(5 + j);
  r.l4 = number(11);
  return r;
}

}  // namespace rwlab
