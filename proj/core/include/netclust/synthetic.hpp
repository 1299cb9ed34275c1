#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netclust/model_state.hpp"
#include "netclust/network.hpp"

namespace netclust {

// Planted-cluster sampler. Edges come from per-pair Poisson rates driven by
// the planted cluster preferences; features come from per-cluster themes
// concentrated on a contiguous feature block per cluster.
struct SyntheticSpec {
  int n_vertices = 200;
  int k_clusters = 4;
  int m_features = 192;
  double membership_concentration = 8.0;  // Dirichlet weight on the home cluster
  double edge_scale = 0.5;                // multiplier on the Poisson rates
  double theme_purity = 0.8;              // theme mass on the cluster's own block
  double noise = 0.05;                    // mix-in weight of a flat feature rate
  std::uint64_t seed = 0;
};

struct SyntheticData {
  AttributedNetwork net;        // with ground-truth labels attached
  Mat planted_v;                // N x K planted cluster preferences
  Mat planted_u;                // M x K planted themes
  std::vector<int> labels;      // argmax of each planted row
  double expected_edge_count = 0.0;  // sum over pairs of P(edge)
};

SyntheticData generate_network(const SyntheticSpec& spec);

// Emits edges.tsv / features.tsv / labels.tsv in the loader formats plus a
// planted.json sidecar with the spec and planted parameters.
void write_synthetic_files(const SyntheticData& data, const SyntheticSpec& spec,
                           const std::string& directory);

}  // namespace netclust
