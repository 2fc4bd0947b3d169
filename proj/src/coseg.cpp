#include "coseg/coseg.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "coseg/hks.hpp"
#include "coseg/hungarian.hpp"
#include "coseg/laplace.hpp"

namespace coseg {

int choose_reference(const std::vector<int>& vertex_counts) {
  if (vertex_counts.empty()) throw EmptySet("no shapes");
  const int n = static_cast<int>(vertex_counts.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return vertex_counts[a] < vertex_counts[b];
  });
  int median_count = vertex_counts[order[(n - 1) / 2]];
  for (int i = 0; i < n; ++i)
    if (vertex_counts[i] == median_count) return i;
  return 0;  // unreachable
}

Eigen::VectorXd part_indicator(const Segmentation& seg, int part_id,
                               const Eigen::VectorXd& masses) {
  const int n = static_cast<int>(seg.part_of.size());
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  double mass = 0.0;
  for (int v = 0; v < n; ++v)
    if (seg.part_of[v] == part_id) {
      f[v] = 1.0;
      mass += masses[v];
    }
  if (mass <= 0.0)
    throw EmptyPart("part " + std::to_string(part_id) + " is empty");
  f /= std::sqrt(mass);  // f^T D f = 1
  return f;
}

std::vector<PartSignature> build_signatures(const std::vector<ShapeBundle>& shapes,
                                            int reference) {
  std::vector<PartSignature> sigs;
  for (int s = 0; s < static_cast<int>(shapes.size()); ++s) {
    const ShapeBundle& sb = shapes[s];
    if (s != reference && sb.map_to_ref == nullptr)
      throw MissingMap("shape " + std::to_string(s) + " has no map to reference");
    for (int p = 0; p < sb.seg->n_parts; ++p) {
      Eigen::VectorXd ind = part_indicator(*sb.seg, p, sb.basis->mass);
      FunctionCoefficients a = project(*sb.basis, ind);
      Eigen::VectorXd coeffs =
          (s == reference) ? a.coeffs : push_function(*sb.map_to_ref, a).coeffs;
      PartSignature ps;
      ps.shape_index = s;
      ps.part_id = p;
      double nrm = coeffs.norm();
      if (nrm <= 0.0) throw EmptyPart("zero signature for part " + std::to_string(p));
      ps.sig = coeffs / nrm;
      double area = 0.0;
      for (int v = 0; v < static_cast<int>(sb.seg->part_of.size()); ++v)
        if (sb.seg->part_of[v] == p) area += sb.basis->mass[v];
      ps.part_area = area;
      sigs.push_back(std::move(ps));
    }
  }
  return sigs;
}

std::map<std::pair<int, int>, int> cluster_parts(
    const std::vector<PartSignature>& signatures, int L, std::uint64_t seed) {
  const int m = static_cast<int>(signatures.size());
  if (L > m)
    throw TooFewParts("L = " + std::to_string(L) + " exceeds " +
                      std::to_string(m) + " parts");
  Eigen::MatrixXd pts(m, signatures[0].sig.size());
  for (int i = 0; i < m; ++i) pts.row(i) = signatures[i].sig.transpose();
  KMeansParams params;
  params.n_clusters = L;
  params.seed = seed;
  std::vector<int> assign = kmeans(pts, params);
  std::map<std::pair<int, int>, int> table;
  for (int i = 0; i < m; ++i)
    table[{signatures[i].shape_index, signatures[i].part_id}] = assign[i];
  return table;
}

CosegResult run_coseg(const RunConfig& config) {
  std::vector<TriMesh> meshes;
  meshes.reserve(config.shapes.size());
  for (const auto& path : config.shapes) meshes.push_back(load_mesh(path));
  return run_coseg(config, meshes);
}

CosegResult run_coseg(const RunConfig& config, const std::vector<TriMesh>& meshes) {
  const int n_shapes = static_cast<int>(meshes.size());
  if (n_shapes < 2) throw ValidationError("co-segmentation needs >= 2 shapes");

  std::vector<SpectralBasis> full_bases(n_shapes), map_bases(n_shapes);
  std::vector<HksField> hks(n_shapes);
  std::vector<Segmentation> segs(n_shapes);
  std::vector<int> counts(n_shapes);

  for (int s = 0; s < n_shapes; ++s) {
    const TriMesh& mesh = meshes[s];
    counts[s] = mesh.n_vertices();
    const int n = mesh.n_vertices();
    const int k_solve = std::min(
        n - 1,
        std::max({config.k_basis, config.k_embed + 1, std::min(config.k_eigs, n - 1)}));

    std::ostringstream id;
    id << "mesh:" << std::hex << mesh.content_hash() << std::dec
       << ":h=" << config.h_factor << ":k=" << k_solve;

    bool cached = false;
    std::string cache_path;
    if (!config.cache_dir.empty()) {
      std::filesystem::create_directories(config.cache_dir);
      std::ostringstream fn;
      fn << std::hex << mesh.content_hash() << "_h" << config.h_factor << "_k"
         << k_solve << ".basis";
      cache_path = (std::filesystem::path(config.cache_dir) / fn.str()).string();
      cached = load_basis_cache(cache_path, mesh.content_hash(), config.h_factor,
                                k_solve, full_bases[s]);
    }
    if (!cached) {
      LaplaceSystem sys = build_laplace(mesh, config.h_factor);
      full_bases[s] =
          compute_basis(sys, k_solve, EigenSolverKind::Auto, id.str());
      if (!cache_path.empty())
        save_basis_cache(full_bases[s], mesh.content_hash(), config.h_factor,
                         cache_path);
    }

    HksConfig hc;
    hc.n_times = config.n_times;
    hc.k_eigs = std::min(config.k_eigs, full_bases[s].k());
    hc.scale_normalize = true;  // cross-shape comparability inside the pipeline
    hks[s] = compute_hks(full_bases[s], hc);

    segs[s] = pre_segment(mesh, full_bases[s], config.n_parts, config.k_embed,
                          config.seed);
    map_bases[s] = full_bases[s].truncated(std::min(config.k_basis, k_solve));
  }

  CosegResult result;
  result.reference_shape = choose_reference(counts);
  const int ref = result.reference_shape;

  std::vector<FunctionalMap> maps(n_shapes);
  for (int s = 0; s < n_shapes; ++s) {
    if (s == ref) continue;
    ConstraintSet cs =
        build_hks_constraints(map_bases[s], hks[s], map_bases[ref], hks[ref]);
    maps[s] = estimate_map(cs, config.ridge.value_or(-1.0));
    MapDiagnostics d;
    d.shape_index = s;
    d.fit_residual = maps[s].fit_residual;
    d.sparsity = sparsity_fraction(maps[s]);
    d.constraint_rank = maps[s].constraint_rank;
    result.diagnostics.push_back(d);
    if (d.sparsity < 0.9)
      std::cerr << "[coseg] warning: map for shape " << s << " has sparsity "
                << d.sparsity << " (< 0.9); the pair may be far from isometric\n";
  }

  std::vector<ShapeBundle> bundles(n_shapes);
  for (int s = 0; s < n_shapes; ++s) {
    bundles[s].mesh = &meshes[s];
    bundles[s].basis = &map_bases[s];
    bundles[s].seg = &segs[s];
    bundles[s].map_to_ref = s == ref ? nullptr : &maps[s];
  }
  std::vector<PartSignature> sigs = build_signatures(bundles, ref);
  result.part_to_label = cluster_parts(sigs, config.L, config.seed);

  for (int s = 0; s < n_shapes; ++s) {
    Labeling lab;
    lab.shape = meshes[s].name;
    lab.L = config.L;
    lab.label_of.resize(meshes[s].n_vertices());
    for (int v = 0; v < meshes[s].n_vertices(); ++v)
      lab.label_of[v] = result.part_to_label.at({s, segs[s].part_of[v]});
    result.labelings.push_back(std::move(lab));
  }
  result.maps = std::move(maps);
  result.segmentations = std::move(segs);
  return result;
}

double label_accuracy(const std::vector<int>& predicted,
                      const std::vector<int>& truth,
                      const Eigen::VectorXd& masses) {
  if (predicted.size() != truth.size() ||
      static_cast<int>(predicted.size()) != masses.size())
    throw LengthMismatch("predicted/truth/mass lengths differ");

  // compact both label sets
  auto compact = [](const std::vector<int>& labels) {
    std::map<int, int> ids;
    for (int l : labels) ids.emplace(l, 0);
    int next = 0;
    for (auto& [_, id] : ids) id = next++;
    return ids;
  };
  std::map<int, int> pid = compact(predicted), tid = compact(truth);

  Eigen::MatrixXd confusion =
      Eigen::MatrixXd::Zero(static_cast<int>(pid.size()), static_cast<int>(tid.size()));
  double total = 0.0;
  for (size_t v = 0; v < predicted.size(); ++v) {
    confusion(pid.at(predicted[v]), tid.at(truth[v])) += masses[static_cast<int>(v)];
    total += masses[static_cast<int>(v)];
  }
  std::vector<int> match = hungarian_max_assignment(confusion);
  double correct = 0.0;
  for (int p = 0; p < confusion.rows(); ++p)
    if (match[p] >= 0) correct += confusion(p, match[p]);
  return total > 0.0 ? correct / total : 0.0;
}

std::vector<int> load_ground_truth(const std::string& path, const TriMesh& mesh) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<int> raw;
  int v;
  while (in >> v) raw.push_back(v);

  if (static_cast<int>(raw.size()) == mesh.n_vertices()) return raw;

  if (static_cast<int>(raw.size()) == mesh.n_faces()) {
    // majority vote over incident faces, ties to the smallest label id
    std::vector<std::map<int, int>> votes(mesh.n_vertices());
    for (int f = 0; f < mesh.n_faces(); ++f)
      for (int e = 0; e < 3; ++e) ++votes[mesh.faces[f][e]][raw[f]];
    std::vector<int> labels(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i) {
      int best = -1, best_count = -1;
      for (const auto& [label, count] : votes[i])
        if (count > best_count) {  // map iterates ascending: ties keep smallest
          best = label;
          best_count = count;
        }
      labels[i] = best;
    }
    return labels;
  }
  throw CountMismatch("label count " + std::to_string(raw.size()) +
                      " matches neither " + std::to_string(mesh.n_vertices()) +
                      " vertices nor " + std::to_string(mesh.n_faces()) + " faces");
}

std::string labeling_to_json(const Labeling& labeling) {
  nlohmann::json j;
  j["shape"] = labeling.shape;
  j["L"] = labeling.L;
  j["label_of"] = labeling.label_of;
  return j.dump(2) + "\n";
}

Labeling labeling_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Labeling lab;
  lab.shape = j.at("shape").get<std::string>();
  lab.L = j.at("L").get<int>();
  lab.label_of = j.at("label_of").get<std::vector<int>>();
  return lab;
}

}  // namespace coseg
