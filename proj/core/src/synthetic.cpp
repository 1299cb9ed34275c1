#include "netclust/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "netclust/rng.hpp"

namespace netclust {

namespace {

void check_spec(const SyntheticSpec& spec) {
  if (spec.n_vertices < 1 || spec.k_clusters < 1 || spec.m_features < 1)
    throw std::runtime_error("synthetic spec: counts must be >= 1");
  if (spec.k_clusters > spec.n_vertices)
    throw std::runtime_error("synthetic spec: k_clusters exceeds n_vertices");
  if (spec.edge_scale <= 0.0)
    throw std::runtime_error("synthetic spec: edge_scale must be > 0");
  if (spec.theme_purity < 0.0 || spec.theme_purity > 1.0 ||
      spec.noise < 0.0 || spec.noise > 1.0)
    throw std::runtime_error("synthetic spec: probabilities must be in [0,1]");
  if (spec.membership_concentration <= 0.0)
    throw std::runtime_error("synthetic spec: membership_concentration must be > 0");
}

int block_of(int index, int count, int blocks) {
  return std::min(blocks - 1, static_cast<int>(static_cast<long long>(index) * blocks / count));
}

}  // namespace

SyntheticData generate_network(const SyntheticSpec& spec) {
  check_spec(spec);
  const int n = spec.n_vertices;
  const int k_n = spec.k_clusters;
  const int m = spec.m_features;
  Rng rng(spec.seed);

  SyntheticData data;
  data.planted_v.resize(n, k_n);
  std::vector<double> alpha(k_n), row(k_n);
  for (int i = 0; i < n; ++i) {
    const int home = block_of(i, n, k_n);
    double total = 0.0;
    for (int k = 0; k < k_n; ++k) {
      const double a = (k == home) ? spec.membership_concentration : 1.0;
      row[k] = rng.gamma(a);
      total += row[k];
    }
    for (int k = 0; k < k_n; ++k) data.planted_v(i, k) = row[k] / total;
  }

  data.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int k = 1; k < k_n; ++k)
      if (data.planted_v(i, k) > data.planted_v(i, best)) best = k;
    data.labels[i] = best;
  }

  // Poisson counts binarized: edge iff at least one event
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double rate = spec.edge_scale * data.planted_v.row(i).dot(data.planted_v.row(j));
      data.expected_edge_count += 1.0 - std::exp(-rate);
      if (rng.poisson(rate) > 0) edges.emplace_back(i, j);
    }
  }
  if (edges.empty())
    throw std::runtime_error(
        "synthetic spec produced an empty edge set; increase edge_scale");
  data.net = network_from_edges(n, edges);

  // themes: purity mass uniform on the cluster's own block, the rest uniform
  // on the other blocks
  data.planted_u = Mat::Zero(m, k_n);
  std::vector<int> block_size(k_n, 0);
  for (int j = 0; j < m; ++j) block_size[block_of(j, m, k_n)]++;
  for (int j = 0; j < m; ++j) {
    const int b = block_of(j, m, k_n);
    for (int k = 0; k < k_n; ++k) {
      if (k == b)
        data.planted_u(j, k) = spec.theme_purity / block_size[b];
      else if (m > block_size[k])
        data.planted_u(j, k) = (1.0 - spec.theme_purity) / (m - block_size[k]);
    }
  }
  if (k_n == 1) data.planted_u.col(0).setConstant(1.0 / m);

  const double m_over_k = static_cast<double>(m) / k_n;
  std::vector<std::pair<int, int>> incidences;  // (feature, vertex)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double signal = m_over_k * data.planted_v.row(i).dot(data.planted_u.row(j));
      const double p = std::min(1.0, (1.0 - spec.noise) * signal + spec.noise / k_n);
      if (rng.uniform() < p) incidences.emplace_back(j, i);
    }
  }
  attach_features(data.net, m, incidences);

  data.net.labels = data.labels;
  data.net.has_labels = true;
  return data;
}

void write_synthetic_files(const SyntheticData& data, const SyntheticSpec& spec,
                           const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  const auto& net = data.net;

  {
    std::FILE* out = std::fopen((fs::path(directory) / "edges.tsv").c_str(), "w");
    if (!out) throw std::runtime_error("cannot write edges.tsv");
    std::fprintf(out, "# vertices=%d\n", net.n_vertices);
    for (int i = 0; i < net.n_vertices; ++i)
      for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p)
        if (i < net.adj_neighbors[p])
          std::fprintf(out, "%d\t%d\n", i, net.adj_neighbors[p]);
    std::fclose(out);
  }
  {
    std::FILE* out = std::fopen((fs::path(directory) / "features.tsv").c_str(), "w");
    if (!out) throw std::runtime_error("cannot write features.tsv");
    std::fprintf(out, "# features=%d\n", net.n_features);
    for (int e = 0; e < net.feature_entry_count(); ++e)
      std::fprintf(out, "%d\t%d\n", net.entry_vertex[e], net.entry_feature[e]);
    std::fclose(out);
  }
  {
    std::FILE* out = std::fopen((fs::path(directory) / "labels.tsv").c_str(), "w");
    if (!out) throw std::runtime_error("cannot write labels.tsv");
    for (int i = 0; i < net.n_vertices; ++i)
      std::fprintf(out, "%d\t%d\n", i, data.labels[i]);
    std::fclose(out);
  }

  nlohmann::json sidecar;
  sidecar["spec"] = {{"n_vertices", spec.n_vertices},
                     {"k_clusters", spec.k_clusters},
                     {"m_features", spec.m_features},
                     {"membership_concentration", spec.membership_concentration},
                     {"edge_scale", spec.edge_scale},
                     {"theme_purity", spec.theme_purity},
                     {"noise", spec.noise},
                     {"seed", spec.seed}};
  sidecar["edge_count"] = net.edge_count();
  sidecar["expected_edge_count"] = data.expected_edge_count;
  sidecar["labels"] = data.labels;
  auto matrix_rows = [](const Mat& m) {
    std::vector<std::vector<double>> rows(m.rows());
    for (int i = 0; i < m.rows(); ++i) {
      rows[i].resize(m.cols());
      for (int k = 0; k < m.cols(); ++k) rows[i][k] = m(i, k);
    }
    return rows;
  };
  sidecar["planted_v"] = matrix_rows(data.planted_v);
  sidecar["planted_u"] = matrix_rows(data.planted_u);

  std::ofstream out(fs::path(directory) / "planted.json");
  if (!out) throw std::runtime_error("cannot write planted.json");
  out << sidecar.dump(2) << "\n";
}

}  // namespace netclust
