#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rwlab/randomwave.hpp"

namespace rwlab {

/// Six fourth-chaos integrals, in order
///   H4(B), H4(d1), H4(d2), H2(d1)H2(d2), H2(B)H2(d1), H2(B)H2(d2).
using ChaosTerms = std::array<double, 6>;

/// Per-replication observables.
struct ChaosRecord {
  std::uint64_t replication_index = 0;
  double energy = 0.0;
  double nodal_len = 0.0;
  double h4 = 0.0;
  double m_stat = 0.0;
  ChaosTerms a{};
  double l4 = 0.0;
};

/// Derivative standard deviation sqrt(2 pi^2 E) = k / sqrt(2); common prefactor
/// of the rescaled trispectrum and of the fourth chaotic projection.
double derivative_scale(double energy);

/// Midpoint-rule integral of H4(B) over the domain, B sampled at cell centers.
double trispectrum(const FieldGrid& grid);

/// -sqrt(2 pi^2 E) / 96 * h4.
double m_statistic(double energy, double h4);

/// All six integrands evaluated in one pass over the cell centers.
ChaosTerms chaos4_terms(const FieldGrid& grid);

/// sqrt(2 pi^2 E) / 128 * (8 a1 - a2 - a3 - 2 a4 - 8 a5 - 8 a6).
double chaos4_projection(double energy, const ChaosTerms& terms);

ChaosRecord make_record(const FieldGrid& grid, double energy, std::uint64_t replication_index,
                        double nodal_len);

/// CSV columns: replication_index,E,nodal_len,h4,m_stat,a1,...,a6,l4
inline constexpr const char* kRecordHeader =
    "replication_index,E,nodal_len,h4,m_stat,a1,a2,a3,a4,a5,a6,l4";

std::string format_record(const ChaosRecord& record);

/// Parses one data row; throws ParseError with `where` in the message.
ChaosRecord parse_record(const std::string& line, const std::string& where);

}  // namespace rwlab
