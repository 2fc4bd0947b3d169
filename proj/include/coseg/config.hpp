#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coseg/errors.hpp"

namespace coseg {

struct RunConfig {
  std::vector<std::string> shapes;
  int n_parts = 0;
  int L = 0;  // defaults to n_parts when absent
  int k_basis = 50;
  int k_eigs = 300;
  int k_embed = 10;
  int n_times = 100;
  double h_factor = 2.0;
  std::optional<double> ridge;  // absent -> per-pair default from ||S||
  std::uint64_t seed = 0;
  std::string output_dir = "coseg_out";
  std::string cache_dir;  // empty disables the eigensolve cache
  int verbosity = 1;
};

// Strict parse: unknown keys rejected, ranges validated, shape paths checked
// for existence. Throws ValidationError with a field-level message.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& json_text,
                            bool check_paths = true);

std::string config_to_json(const RunConfig& config);
std::uint64_t config_hash(const RunConfig& config);

}  // namespace coseg
