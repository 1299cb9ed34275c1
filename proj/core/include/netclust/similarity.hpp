#pragma once

#include <string>
#include <vector>

#include "netclust/network.hpp"

namespace netclust {

// Observed vertex-vertex similarities, computed only on connected pairs and
// aligned with the network's directed pair enumeration: z[p] / g[p] belong
// to the pair at CSR index p. Values are cosines of binary vectors, so they
// lie in [0,1]; pairs with a zero vector on either side get 0.
struct SimilarityMaps {
  std::vector<double> z;  // topology cosine per pair
  std::vector<double> g;  // feature cosine per pair

  int pair_count() const { return static_cast<int>(z.size()); }
};

// Cosine between adjacency rows i and j for every connected pair.
void topology_similarity(const AttributedNetwork& net, SimilarityMaps& maps);

// Cosine between feature columns i and j for every connected pair.
void feature_similarity(const AttributedNetwork& net, SimilarityMaps& maps);

SimilarityMaps compute_similarities(const AttributedNetwork& net);

// Debug dump, one "i j value" line per stored directed pair.
void dump_similarity(const std::string& path, const AttributedNetwork& net,
                     const std::vector<double>& values);

}  // namespace netclust
