#include "netclust/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace netclust {

namespace {

using nlohmann::json;

json encode_double(double v, bool exact) {
  if (!exact) return v;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return std::string(buf);
}

double decode_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw std::runtime_error("checkpoint: bad float '" + s + "'");
    return v;
  }
  throw std::runtime_error("checkpoint: expected number or hex-float string");
}

json encode_matrix(const Mat& m, bool exact) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(encode_double(m(i, k), exact));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat decode_matrix(const json& j, int rows, int cols, const char* name) {
  if (static_cast<int>(j.size()) != rows)
    throw std::runtime_error(std::string("checkpoint: wrong row count for ") + name);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols)
      throw std::runtime_error(std::string("checkpoint: wrong column count for ") + name);
    for (int k = 0; k < cols; ++k) m(i, k) = decode_double(j[i][k]);
  }
  return m;
}

}  // namespace

void write_checkpoint(const std::string& path, const ModelState& state,
                      const AttributedNetwork& net, bool exact) {
  json j;
  j["format"] = "netclust-state";
  j["version"] = 1;
  j["exact"] = exact;
  j["n_vertices"] = net.n_vertices;
  j["n_features"] = net.n_features;
  j["k_clusters"] = state.k_clusters;
  j["v"] = encode_matrix(state.v, exact);
  j["u"] = encode_matrix(state.u, exact);
  j["h"] = encode_matrix(state.h, exact);
  j["s"] = encode_matrix(state.s, exact);
  json lambda = json::array();
  for (int i = 0; i < state.lambda.size(); ++i)
    lambda.push_back(encode_double(state.lambda(i), exact));
  j["lambda"] = std::move(lambda);
  json x = json::array();
  for (int i = 0; i < net.n_vertices; ++i)
    for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p)
      x.push_back(json::array(
          {i, net.adj_neighbors[p], encode_double(state.x[p], exact)}));
  j["x"] = std::move(x);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open checkpoint '" + path + "' for writing");
  out << j.dump(1) << "\n";
}

ModelState read_checkpoint(const std::string& path, const AttributedNetwork& net) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint '" + path + "'");
  json j;
  in >> j;
  if (j.value("format", "") != "netclust-state")
    throw std::runtime_error("checkpoint: unrecognized format");
  if (j["n_vertices"].get<int>() != net.n_vertices ||
      j["n_features"].get<int>() != net.n_features)
    throw std::runtime_error("checkpoint: dimensions do not match the network");

  ModelState state;
  state.k_clusters = j["k_clusters"].get<int>();
  state.v = decode_matrix(j["v"], net.n_vertices, state.k_clusters, "v");
  state.u = decode_matrix(j["u"], net.n_features, state.k_clusters, "u");
  state.h = decode_matrix(j["h"], net.n_vertices, state.k_clusters, "h");
  state.s = decode_matrix(j["s"], net.n_vertices, 2, "s");
  state.lambda.resize(net.n_vertices);
  if (static_cast<int>(j["lambda"].size()) != net.n_vertices)
    throw std::runtime_error("checkpoint: wrong lambda length");
  for (int i = 0; i < net.n_vertices; ++i)
    state.lambda(i) = decode_double(j["lambda"][i]);

  state.x.assign(net.pair_count(), 0.0);
  for (const auto& triplet : j["x"]) {
    const int i = triplet.at(0).get<int>();
    const int nbr = triplet.at(1).get<int>();
    const int p = net.pair_index(i, nbr);
    if (p < 0)
      throw std::runtime_error("checkpoint: x triplet (" + std::to_string(i) + "," +
                               std::to_string(nbr) + ") is not a stored pair");
    state.x[p] = decode_double(triplet.at(2));
  }
  return state;
}

void write_labels_file(const std::string& path, const std::vector<int>& labels) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (std::size_t i = 0; i < labels.size(); ++i)
    std::fprintf(out, "%zu\t%d\n", i, labels[i]);
  std::fclose(out);
}

std::vector<int> read_labels_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file '" + path + "'");
  std::vector<std::pair<long, long>> rows;
  long vertex = 0, cluster = 0;
  long max_vertex = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (std::sscanf(line.c_str(), "%ld %ld", &vertex, &cluster) != 2)
      throw std::runtime_error("malformed label line '" + line + "' in " + path);
    rows.emplace_back(vertex, cluster);
    max_vertex = std::max(max_vertex, vertex);
  }
  std::vector<int> labels(max_vertex + 1, -1);
  for (const auto& [v, c] : rows) labels[v] = static_cast<int>(c);
  return labels;
}

}  // namespace netclust
