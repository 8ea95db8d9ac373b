#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qtherm/equilibrium.hpp"

namespace qtherm {

enum class CriterionStatus { pass, fail, not_applicable };
std::string_view to_string(CriterionStatus s);

struct CriterionResult {
  int id;
  std::string name;
  CriterionStatus status;
  std::map<std::string, double> witness;
  std::string note;
};

struct CriteriaConfig {
  std::vector<std::size_t> dims = {2, 3, 4, 8, 16};
  std::size_t trials = 20;
  std::uint64_t seed = 42;
  /// High-energy point for the box vs ideal-gas comparison and its tolerance.
  double box_energy = 800.0;
  double box_tolerance = 0.05;
};

struct CriteriaReport {
  std::uint64_t seed;
  std::vector<CriterionResult> criteria;  // always nine, ids 1..9

  bool all_pass() const;
  std::string to_json() const;
  std::string to_text() const;
};

/// Zeroes the off-diagonal part of rho in the given orthonormal basis.
DensityOperator dephase(const DensityOperator& rho, const ComplexMatrix& basis);

CriteriaReport run_criteria_suite(const CriteriaConfig& config = {});

}  // namespace qtherm
