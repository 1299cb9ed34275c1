#pragma once

#include <string>
#include <vector>

#include "netclust/model_state.hpp"
#include "netclust/network.hpp"

namespace netclust {

// JSON state dump: v, u, h, s, lambda as row arrays, x as (i, j, value)
// triplets, with a dimensions header. With exact=true doubles are written
// as hex-float strings and the round trip is bitwise; the default decimal
// form is value-exact but human-readable.
void write_checkpoint(const std::string& path, const ModelState& state,
                      const AttributedNetwork& net, bool exact = false);

ModelState read_checkpoint(const std::string& path, const AttributedNetwork& net);

// Label file: one "vertex<TAB>cluster" line per vertex.
void write_labels_file(const std::string& path, const std::vector<int>& labels);
std::vector<int> read_labels_file(const std::string& path);

}  // namespace netclust
