#include "netclust/similarity.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace netclust {

namespace {

// |A ∩ B| for sorted ranges
int intersection_size(const int* a, int na, const int* b, int nb) {
  int count = 0, ia = 0, ib = 0;
  while (ia < na && ib < nb) {
    if (a[ia] < b[ib]) ++ia;
    else if (a[ia] > b[ib]) ++ib;
    else { ++count; ++ia; ++ib; }
  }
  return count;
}

double binary_cosine(int common, int norm_a, int norm_b) {
  if (norm_a == 0 || norm_b == 0) return 0.0;
  return static_cast<double>(common) /
         std::sqrt(static_cast<double>(norm_a) * static_cast<double>(norm_b));
}

}  // namespace

void topology_similarity(const AttributedNetwork& net, SimilarityMaps& maps) {
  maps.z.assign(net.pair_count(), 0.0);
  const int* nbrs = net.adj_neighbors.data();
  for (int i = 0; i < net.n_vertices; ++i) {
    const int* row_i = nbrs + net.adj_offsets[i];
    const int deg_i = net.degree(i);
    for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p) {
      const int j = net.adj_neighbors[p];
      const int common = intersection_size(row_i, deg_i,
                                           nbrs + net.adj_offsets[j], net.degree(j));
      maps.z[p] = binary_cosine(common, deg_i, net.degree(j));
    }
  }
}

void feature_similarity(const AttributedNetwork& net, SimilarityMaps& maps) {
  maps.g.assign(net.pair_count(), 0.0);
  const int* feats = net.entry_feature.data();
  for (int i = 0; i < net.n_vertices; ++i) {
    const int* col_i = feats + net.feat_offsets[i];
    const int nf_i = net.feature_count_of(i);
    for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p) {
      const int j = net.adj_neighbors[p];
      const int common = intersection_size(col_i, nf_i,
                                           feats + net.feat_offsets[j],
                                           net.feature_count_of(j));
      maps.g[p] = binary_cosine(common, nf_i, net.feature_count_of(j));
    }
  }
}

SimilarityMaps compute_similarities(const AttributedNetwork& net) {
  SimilarityMaps maps;
  topology_similarity(net, maps);
  feature_similarity(net, maps);
  return maps;
}

void dump_similarity(const std::string& path, const AttributedNetwork& net,
                     const std::vector<double>& values) {
  if (static_cast<int>(values.size()) != net.pair_count())
    throw std::runtime_error("similarity dump: size mismatch with pair set");
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (int i = 0; i < net.n_vertices; ++i)
    for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p)
      std::fprintf(out, "%d %d %.17g\n", i, net.adj_neighbors[p], values[p]);
  std::fclose(out);
}

}  // namespace netclust
