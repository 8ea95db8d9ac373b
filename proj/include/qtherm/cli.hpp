#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtherm/shape.hpp"

namespace qtherm::cli {

/// Exit codes: 0 success, 2 invalid input, 1 unexpected internal failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInvalid = 2;

struct RunConfig {
  std::string subcommand;
  std::string output_dir;
  std::uint64_t seed = 42;
  double k = 1.0;
};

/// Parses a trajectory document:
/// {"volume": V, "mode": "constant_temperature" | "constant_energy", "T": ..., "E": ...,
///  "samples": [{"t": ..., "r_b": ..., "r_c": ...}, ...]}
ShapeTrajectory parse_trajectory(const nlohmann::json& doc);

/// Dispatches one subcommand; all artifacts go under --out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qtherm::cli
