#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "netclust/network.hpp"
#include "netclust/similarity.hpp"
#include "netclust/synthetic.hpp"

using namespace netclust;

TEST_CASE("generator is deterministic and structurally sound") {
  SyntheticSpec spec;
  spec.n_vertices = 80;
  spec.k_clusters = 3;
  spec.m_features = 30;
  spec.seed = 12;
  const auto a = generate_network(spec);
  const auto b = generate_network(spec);
  CHECK(a.net.adj_neighbors == b.net.adj_neighbors);
  CHECK(a.net.entry_feature == b.net.entry_feature);
  CHECK(a.labels == b.labels);
  CHECK(a.planted_v == b.planted_v);

  const auto report = validate_network(a.net);
  CHECK(report.adjacency_symmetric);
  CHECK(report.zero_diagonal);

  for (int i = 0; i < spec.n_vertices; ++i) {
    int best = 0;
    for (int k = 1; k < spec.k_clusters; ++k)
      if (a.planted_v(i, k) > a.planted_v(i, best)) best = k;
    CHECK(a.labels[i] == best);
    CHECK(a.net.labels[i] == best);
  }
}

TEST_CASE("pure themes on one-hot memberships give block-diagonal features") {
  SyntheticSpec spec;
  spec.n_vertices = 20;
  spec.k_clusters = 2;
  spec.m_features = 6;  // divisible by K so every block rate is exactly 1
  spec.theme_purity = 1.0;
  spec.noise = 0.0;
  spec.membership_concentration = 2000.0;
  spec.edge_scale = 3.0;
  spec.seed = 4;
  const auto data = generate_network(spec);
  for (int e = 0; e < data.net.feature_entry_count(); ++e) {
    const int i = data.net.entry_vertex[e];
    const int j = data.net.entry_feature[e];
    const int vertex_block = data.labels[i];
    const int feature_block = j / 3;
    CHECK(vertex_block == feature_block);
  }
  // near-one-hot memberships make own-block features near-certain
  CHECK(data.net.feature_entry_count() > 40);
}

TEST_CASE("tiny edge_scale raises the empty-graph error") {
  SyntheticSpec spec;
  spec.n_vertices = 10;
  spec.k_clusters = 2;
  spec.m_features = 4;
  spec.edge_scale = 1e-4;
  spec.seed = 0;
  CHECK_THROWS_WITH_AS(generate_network(spec),
                       doctest::Contains("edge_scale"), std::runtime_error);
}

TEST_CASE("intra-cluster edge density exceeds inter-cluster density") {
  SyntheticSpec spec;  // N=200, K=4 defaults
  spec.seed = 31;
  const auto data = generate_network(spec);
  long intra_edges = 0, inter_edges = 0, intra_pairs = 0, inter_pairs = 0;
  for (int i = 0; i < spec.n_vertices; ++i) {
    for (int j = i + 1; j < spec.n_vertices; ++j) {
      const bool same = data.labels[i] == data.labels[j];
      (same ? intra_pairs : inter_pairs)++;
      if (data.net.has_edge(i, j)) (same ? intra_edges : inter_edges)++;
    }
  }
  const double intra_density = static_cast<double>(intra_edges) / intra_pairs;
  const double inter_density = static_cast<double>(inter_edges) / inter_pairs;
  CHECK(intra_density > inter_density);
}

TEST_CASE("edge counts track the expected count over repeated seeds") {
  SyntheticSpec spec;
  spec.n_vertices = 60;
  spec.k_clusters = 3;
  spec.m_features = 12;
  long long total = 0;
  double expected = 0.0;
  const int runs = 20;
  for (int r = 0; r < runs; ++r) {
    spec.seed = 500 + r;
    const auto data = generate_network(spec);
    total += data.net.edge_count();
    expected += data.expected_edge_count;
  }
  // each pair is Bernoulli(p): variance p(1-p) <= expected
  const double sigma = std::sqrt(expected);
  CHECK(std::abs(total - expected) <= 3.0 * sigma);
}

TEST_CASE("emitted files round-trip through the loaders") {
  SyntheticSpec spec;
  spec.n_vertices = 40;
  spec.k_clusters = 2;
  spec.m_features = 10;
  spec.seed = 77;
  const auto data = generate_network(spec);
  const std::string dir = "synth_test_scratch";
  write_synthetic_files(data, spec, dir);

  auto net = load_edge_list(dir + "/edges.tsv");
  load_feature_table(dir + "/features.tsv", net);
  load_labels(dir + "/labels.tsv", net);
  CHECK(net.n_vertices == data.net.n_vertices);
  CHECK(net.n_features == data.net.n_features);
  CHECK(net.edge_count() == data.net.edge_count());
  CHECK(net.adj_neighbors == data.net.adj_neighbors);
  CHECK(net.entry_feature == data.net.entry_feature);
  CHECK(net.labels == data.net.labels);
  CHECK(std::filesystem::exists(dir + "/planted.json"));
}
