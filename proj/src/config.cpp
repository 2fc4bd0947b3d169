#include "coseg/config.hpp"

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

namespace coseg {

namespace {

const std::set<std::string> kKnownKeys = {
    "shapes", "n_parts", "L",        "k_basis",    "k_eigs",    "k_embed",
    "n_times", "h_factor", "ridge",  "seed",       "output_dir", "cache_dir",
    "verbosity"};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

}  // namespace

RunConfig parse_config_text(const std::string& json_text, bool check_paths) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  require(j.is_object(), "config root must be a JSON object");
  for (const auto& [key, _] : j.items())
    require(kKnownKeys.count(key) > 0, "unknown config key '" + key + "'");

  RunConfig c;
  require(j.contains("shapes"), "missing required key 'shapes'");
  require(j.contains("n_parts"), "missing required key 'n_parts'");
  c.shapes = j.at("shapes").get<std::vector<std::string>>();
  c.n_parts = j.at("n_parts").get<int>();
  c.L = j.value("L", c.n_parts);
  c.k_basis = j.value("k_basis", 50);
  c.k_eigs = j.value("k_eigs", 300);
  c.k_embed = j.value("k_embed", 10);
  c.n_times = j.value("n_times", 100);
  c.h_factor = j.value("h_factor", 2.0);
  if (j.contains("ridge")) c.ridge = j.at("ridge").get<double>();
  c.seed = j.value("seed", std::uint64_t{0});
  c.output_dir = j.value("output_dir", std::string("coseg_out"));
  c.cache_dir = j.value("cache_dir", std::string());
  c.verbosity = j.value("verbosity", 1);

  require(!c.shapes.empty(), "shapes: must list at least one mesh path");
  require(c.n_parts >= 1, "n_parts: must be >= 1");
  require(c.L >= 1, "L: must be >= 1");
  require(c.k_basis >= 2, "k_basis: must be >= 2");
  require(c.k_eigs >= 2, "k_eigs: must be >= 2");
  require(c.k_embed >= 1, "k_embed: must be >= 1");
  require(c.n_times >= 2, "n_times: must be >= 2");
  require(c.h_factor > 0.0, "h_factor: must be > 0");
  if (c.ridge) require(*c.ridge >= 0.0, "ridge: must be >= 0");

  if (check_paths)
    for (const auto& p : c.shapes)
      require(std::filesystem::exists(p), "shapes: path does not exist: " + p);
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_to_json(const RunConfig& config) {
  nlohmann::json j;
  j["shapes"] = config.shapes;
  j["n_parts"] = config.n_parts;
  j["L"] = config.L;
  j["k_basis"] = config.k_basis;
  j["k_eigs"] = config.k_eigs;
  j["k_embed"] = config.k_embed;
  j["n_times"] = config.n_times;
  j["h_factor"] = config.h_factor;
  if (config.ridge) j["ridge"] = *config.ridge;
  j["seed"] = config.seed;
  j["output_dir"] = config.output_dir;
  j["cache_dir"] = config.cache_dir;
  j["verbosity"] = config.verbosity;
  return j.dump(2) + "\n";
}

std::uint64_t config_hash(const RunConfig& config) {
  std::string s = config_to_json(config);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace coseg
