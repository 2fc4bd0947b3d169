#include <CLI11.hpp>
#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "coseg/coseg.hpp"
#include "coseg/hks.hpp"
#include "coseg/laplace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// fixed palette, cycled when L exceeds it
const std::array<std::array<std::uint8_t, 3>, 12> kPalette = {{
    {230, 25, 75},   {60, 180, 75},   {255, 225, 25}, {0, 130, 200},
    {245, 130, 48},  {145, 30, 180},  {70, 240, 240}, {240, 50, 230},
    {210, 245, 60},  {170, 110, 40},  {128, 128, 128}, {255, 250, 200},
}};

std::map<int, std::array<std::uint8_t, 3>> palette_for(int n_labels) {
  std::map<int, std::array<std::uint8_t, 3>> p;
  for (int l = 0; l < n_labels; ++l) p[l] = kPalette[l % kPalette.size()];
  return p;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw coseg::IoError("cannot write " + path.string());
  out << text;
}

int cmd_info(const std::string& mesh_path) {
  coseg::TriMesh mesh = coseg::load_mesh(mesh_path);
  std::cout << "vertices: " << mesh.n_vertices() << "\n"
            << "faces: " << mesh.n_faces() << "\n"
            << "area: " << mesh.total_area() << "\n"
            << "mean_edge_length: " << mesh.mean_edge_length() << "\n"
            << "components: " << mesh.connected_components() << "\n"
            << "hash: " << std::hex << mesh.content_hash() << std::dec << "\n";
  return 0;
}

int cmd_presegment(const std::string& mesh_path, int parts, int embed_dim,
                   std::uint64_t seed, double h_factor, const std::string& out) {
  coseg::TriMesh mesh = coseg::load_mesh(mesh_path);
  coseg::LaplaceSystem sys = coseg::build_laplace(mesh, h_factor);
  coseg::SpectralBasis basis = coseg::compute_basis(sys, embed_dim + 1);
  coseg::Segmentation seg =
      coseg::pre_segment(mesh, basis, parts, embed_dim, seed);
  std::string path = out.empty() ? mesh_path + ".seg.json" : out;
  write_file(path, coseg::segmentation_to_json(seg));
  std::cerr << "wrote " << path << "\n";
  return 0;
}

int cmd_fmap(const std::string& source_path, const std::string& target_path,
             int k, double ridge, int k_eigs, int n_times, double h_factor,
             const std::string& out) {
  auto prep = [&](const std::string& path, coseg::SpectralBasis& basis,
                  coseg::HksField& hks) {
    coseg::TriMesh mesh = coseg::load_mesh(path);
    int k_solve = std::min(mesh.n_vertices() - 1,
                           std::max(k, std::min(k_eigs, mesh.n_vertices() - 1)));
    coseg::LaplaceSystem sys = coseg::build_laplace(mesh, h_factor);
    std::ostringstream id;
    id << "mesh:" << std::hex << mesh.content_hash() << std::dec
       << ":h=" << h_factor << ":k=" << k_solve;
    coseg::SpectralBasis full = coseg::compute_basis(
        sys, k_solve, coseg::EigenSolverKind::Auto, id.str());
    coseg::HksConfig hc;
    hc.n_times = n_times;
    hc.k_eigs = std::min(k_eigs, full.k());
    hc.scale_normalize = true;
    hks = coseg::compute_hks(full, hc);
    basis = full.truncated(std::min(k, full.k()));
  };
  coseg::SpectralBasis sb, tb;
  coseg::HksField sh, th;
  prep(source_path, sb, sh);
  prep(target_path, tb, th);
  coseg::ConstraintSet cs = coseg::build_hks_constraints(sb, sh, tb, th);
  coseg::FunctionalMap map = coseg::estimate_map(cs, ridge);
  std::string path = out.empty() ? "fmap.json" : out;
  write_file(path, coseg::fmap_to_json(map));
  std::cerr << "wrote " << path << " (residual " << map.fit_residual
            << ", sparsity " << coseg::sparsity_fraction(map) << ")\n";
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& output_dir,
            const std::string& cache_dir, std::int64_t seed_override) {
  coseg::RunConfig config = coseg::parse_config(config_path);
  if (!output_dir.empty()) config.output_dir = output_dir;
  if (!cache_dir.empty()) config.cache_dir = cache_dir;
  if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);

  std::vector<coseg::TriMesh> meshes;
  for (const auto& p : config.shapes) meshes.push_back(coseg::load_mesh(p));
  coseg::CosegResult result = coseg::run_coseg(config, meshes);

  fs::path out(config.output_dir);
  fs::create_directories(out);
  auto palette = palette_for(config.L);

  json manifest;
  manifest["config_hash"] = coseg::config_hash(config);
  manifest["config"] = json::parse(coseg::config_to_json(config));
  manifest["reference_shape"] = result.reference_shape;
  manifest["mesh_hashes"] = json::array();
  manifest["artifact_version"] = "1.0.0";

  for (size_t s = 0; s < meshes.size(); ++s) {
    std::string stem = fs::path(config.shapes[s]).stem().string() + "_" +
                       std::to_string(s);
    coseg::export_labeled_mesh(meshes[s], result.labelings[s].label_of, palette,
                               (out / (stem + "_labeled.ply")).string());
    write_file(out / (stem + "_labels.json"),
               coseg::labeling_to_json(result.labelings[s]));
    write_file(out / (stem + "_preseg.json"),
               coseg::segmentation_to_json(result.segmentations[s]));
    if (static_cast<int>(s) != result.reference_shape)
      write_file(out / (stem + "_map.json"),
                 coseg::fmap_to_json(result.maps[s]));
    manifest["mesh_hashes"].push_back(meshes[s].content_hash());
  }

  json diag = json::array();
  for (const auto& d : result.diagnostics)
    diag.push_back({{"shape", d.shape_index},
                    {"residual", d.fit_residual},
                    {"sparsity", d.sparsity},
                    {"rank", d.constraint_rank}});
  json part_to_label = json::array();
  for (const auto& [key, label] : result.part_to_label)
    part_to_label.push_back(
        {{"shape", key.first}, {"part", key.second}, {"label", label}});
  write_file(out / "diagnostics.json",
             json({{"maps", diag}, {"part_to_label", part_to_label}}).dump(2) + "\n");
  write_file(out / "manifest.json", manifest.dump(2) + "\n");
  std::cerr << "wrote results to " << out.string() << "\n";
  return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path,
             const std::string& mesh_path) {
  coseg::TriMesh mesh = coseg::load_mesh(mesh_path);
  std::ifstream in(pred_path);
  if (!in) throw coseg::IoError("cannot open " + pred_path);
  std::stringstream buf;
  buf << in.rdbuf();
  json j = json::parse(buf.str());
  // accept either a labeling document or a bare JSON array
  std::vector<int> pred = j.is_array()
                              ? j.get<std::vector<int>>()
                              : coseg::labeling_from_json(buf.str()).label_of;
  std::vector<int> truth = coseg::load_ground_truth(truth_path, mesh);
  Eigen::VectorXd masses = coseg::vertex_lumped_mass(mesh);
  double acc = coseg::label_accuracy(pred, truth, masses);
  std::cout << "accuracy " << acc << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consistent co-segmentation of triangle mesh sets"};
  app.require_subcommand(1);

  std::string mesh_path, source_path, target_path, config_path, out_path;
  std::string pred_path, truth_path, output_dir, cache_dir;
  int parts = 4, embed_dim = 10, k = 50, k_eigs = 300, n_times = 100;
  std::uint64_t seed = 0;
  std::int64_t seed_override = -1;
  double h_factor = 2.0, ridge = -1.0;

  auto* info = app.add_subcommand("info", "print mesh statistics");
  info->add_option("--mesh", mesh_path, "mesh file (.off/.obj)")->required();

  auto* preseg = app.add_subcommand("presegment", "per-shape spectral pre-segmentation");
  preseg->add_option("--mesh", mesh_path)->required();
  preseg->add_option("--parts", parts, "number of parts");
  preseg->add_option("--embed-dim", embed_dim, "embedding dimension");
  preseg->add_option("--seed", seed);
  preseg->add_option("--h-factor", h_factor);
  preseg->add_option("--out", out_path, "output JSON path");

  auto* fmap = app.add_subcommand("fmap", "estimate a functional map between two meshes");
  fmap->add_option("--source", source_path)->required();
  fmap->add_option("--target", target_path)->required();
  fmap->add_option("--k", k, "basis size");
  fmap->add_option("--ridge", ridge, "ridge weight (negative = default)");
  fmap->add_option("--k-eigs", k_eigs);
  fmap->add_option("--n-times", n_times);
  fmap->add_option("--h-factor", h_factor);
  fmap->add_option("--out", out_path);

  auto* run = app.add_subcommand("run", "full co-segmentation run from a config");
  run->add_option("--config", config_path)->required();
  run->add_option("--output-dir", output_dir, "override config output_dir");
  run->add_option("--cache-dir", cache_dir, "override config cache_dir");
  run->add_option("--seed", seed_override, "override config seed");

  auto* eval = app.add_subcommand("eval", "score a labeling against ground truth");
  eval->add_option("--pred", pred_path)->required();
  eval->add_option("--truth", truth_path)->required();
  eval->add_option("--mesh", mesh_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (info->parsed()) return cmd_info(mesh_path);
    if (preseg->parsed())
      return cmd_presegment(mesh_path, parts, embed_dim, seed, h_factor, out_path);
    if (fmap->parsed())
      return cmd_fmap(source_path, target_path, k, ridge, k_eigs, n_times,
                      h_factor, out_path);
    if (run->parsed()) return cmd_run(config_path, output_dir, cache_dir, seed_override);
    if (eval->parsed()) return cmd_eval(pred_path, truth_path, mesh_path);
  } catch (const coseg::ValidationError& e) {
    std::cerr << "error: validation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
