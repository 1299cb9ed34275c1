#pragma once

#include <string>
#include <utility>
#include <vector>

namespace netclust {

// Observed attributed network: symmetric binary adjacency in CSR form plus
// binary vertex features stored as an incidence list. Immutable after
// loading; safe to share across threads.
struct AttributedNetwork {
  int n_vertices = 0;  // N
  int n_features = 0;  // M

  // Adjacency over directed connected pairs: both directions of every
  // undirected edge are stored, rows sorted, no diagonal entries.
  std::vector<int> adj_offsets;    // size N+1
  std::vector<int> adj_neighbors;  // size 2|E|

  // Feature incidences in vertex-major order: entry e is the pair
  // (entry_feature[e], entry_vertex[e]); entries of vertex i occupy
  // [feat_offsets[i], feat_offsets[i+1]) with feature ids sorted.
  std::vector<int> feat_offsets;  // size N+1
  std::vector<int> entry_feature;
  std::vector<int> entry_vertex;
  // Feature-major view: entry ids grouped by feature.
  std::vector<int> by_feature_offsets;  // size M+1
  std::vector<int> by_feature_entries;

  // Ground-truth cluster ids, -1 where missing.
  bool has_labels = false;
  std::vector<int> labels;

  std::vector<std::string> vertex_names;
  std::vector<std::string> feature_names;

  int degree(int i) const { return adj_offsets[i + 1] - adj_offsets[i]; }
  int pair_count() const { return static_cast<int>(adj_neighbors.size()); }
  int edge_count() const { return pair_count() / 2; }
  int feature_entry_count() const { return static_cast<int>(entry_feature.size()); }
  int feature_count_of(int i) const { return feat_offsets[i + 1] - feat_offsets[i]; }

  // CSR index of directed pair (i,j); -1 when not connected.
  int pair_index(int i, int j) const;
  bool has_edge(int i, int j) const { return pair_index(i, j) >= 0; }
  int distinct_label_count() const;
};

struct ValidationReport {
  std::vector<int> isolated_vertices;
  std::vector<int> featureless_vertices;
  bool adjacency_symmetric = true;
  bool zero_diagonal = true;
  std::string note;

  bool ok() const { return adjacency_symmetric && zero_diagonal; }
};

// Build a network from an explicit edge set: symmetrizes, drops self-loops,
// deduplicates. n_vertices must cover every id (it may exceed the largest).
AttributedNetwork network_from_edges(
    int n_vertices, const std::vector<std::pair<int, int>>& edges);

// Attach (feature, vertex) incidences; duplicates are merged.
void attach_features(AttributedNetwork& net, int n_features,
                     const std::vector<std::pair<int, int>>& incidences);

// Text loaders. Lines are whitespace-separated nonnegative integer columns;
// '#' starts a comment; "# vertices=N" / "# features=M" inside comments fix
// a dimension explicitly (explicit beats inferred). 0-based ids throughout.
AttributedNetwork load_edge_list(const std::string& path, int n_override = 0);
void load_feature_table(const std::string& path, AttributedNetwork& net,
                        int m_override = 0);
void load_labels(const std::string& path, AttributedNetwork& net);

// Report-only checks; never mutates.
ValidationReport validate_network(const AttributedNetwork& net);

}  // namespace netclust
