#include "netclust/network.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace netclust {

namespace {

std::string loc(const std::string& path, int lineno) {
  return path + ":" + std::to_string(lineno);
}

bool is_comment_line(const std::string& line) {
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '#';
  }
  return true;  // blank counts as comment
}

// Recognizes "vertices=N" / "features=M" inside a comment line.
bool parse_directive(const std::string& comment, const std::string& key,
                     long long& value) {
  auto pos = comment.find(key + "=");
  if (pos == std::string::npos) return false;
  const char* s = comment.c_str() + pos + key.size() + 1;
  char* end = nullptr;
  long long v = std::strtoll(s, &end, 10);
  if (end == s || v < 0) return false;
  value = v;
  return true;
}

// Splits a data line into integer fields. Returns false for blank/comment
// lines; throws on malformed content.
bool parse_fields(const std::string& line, const std::string& path, int lineno,
                  std::vector<long long>& fields) {
  fields.clear();
  std::size_t i = 0;
  while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  if (i >= line.size() || line[i] == '#') return false;
  std::istringstream ss(line.substr(i));
  std::string tok;
  while (ss >> tok) {
    if (tok[0] == '#') break;  // trailing comment
    char* end = nullptr;
    errno = 0;
    long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
      throw std::runtime_error(loc(path, lineno) + ": malformed field '" + tok + "'");
    if (errno == ERANGE || v > std::numeric_limits<int>::max())
      throw std::runtime_error(loc(path, lineno) + ": id overflow in '" + tok + "'");
    if (v < 0)
      throw std::runtime_error(loc(path, lineno) + ": negative id '" + tok + "'");
    fields.push_back(v);
  }
  return !fields.empty();
}

void build_feature_index(AttributedNetwork& net,
                         std::vector<std::pair<int, int>> vertex_feature) {
  // vertex-major order with duplicates merged
  std::sort(vertex_feature.begin(), vertex_feature.end());
  vertex_feature.erase(std::unique(vertex_feature.begin(), vertex_feature.end()),
                       vertex_feature.end());

  const int n = net.n_vertices;
  const int m = net.n_features;
  const int nnz = static_cast<int>(vertex_feature.size());
  net.feat_offsets.assign(n + 1, 0);
  net.entry_feature.resize(nnz);
  net.entry_vertex.resize(nnz);
  for (const auto& [i, j] : vertex_feature) net.feat_offsets[i + 1]++;
  for (int i = 0; i < n; ++i) net.feat_offsets[i + 1] += net.feat_offsets[i];
  for (int e = 0; e < nnz; ++e) {
    net.entry_vertex[e] = vertex_feature[e].first;
    net.entry_feature[e] = vertex_feature[e].second;
  }

  net.by_feature_offsets.assign(m + 1, 0);
  net.by_feature_entries.resize(nnz);
  for (int e = 0; e < nnz; ++e) net.by_feature_offsets[net.entry_feature[e] + 1]++;
  for (int j = 0; j < m; ++j) net.by_feature_offsets[j + 1] += net.by_feature_offsets[j];
  std::vector<int> cursor(net.by_feature_offsets.begin(), net.by_feature_offsets.end() - 1);
  for (int e = 0; e < nnz; ++e) net.by_feature_entries[cursor[net.entry_feature[e]]++] = e;
}

}  // namespace

int AttributedNetwork::pair_index(int i, int j) const {
  auto first = adj_neighbors.begin() + adj_offsets[i];
  auto last = adj_neighbors.begin() + adj_offsets[i + 1];
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return -1;
  return static_cast<int>(it - adj_neighbors.begin());
}

int AttributedNetwork::distinct_label_count() const {
  std::set<int> distinct;
  for (int l : labels)
    if (l >= 0) distinct.insert(l);
  return static_cast<int>(distinct.size());
}

AttributedNetwork network_from_edges(
    int n_vertices, const std::vector<std::pair<int, int>>& edges) {
  AttributedNetwork net;
  net.n_vertices = n_vertices;
  std::vector<std::vector<int>> rows(n_vertices);
  for (const auto& [a, b] : edges) {
    if (a == b) continue;  // self-loops dropped
    if (a < 0 || a >= n_vertices || b < 0 || b >= n_vertices)
      throw std::runtime_error("edge endpoint out of range");
    rows[a].push_back(b);
    rows[b].push_back(a);
  }
  net.adj_offsets.assign(n_vertices + 1, 0);
  for (int i = 0; i < n_vertices; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    net.adj_offsets[i + 1] = net.adj_offsets[i] + static_cast<int>(r.size());
  }
  net.adj_neighbors.reserve(net.adj_offsets[n_vertices]);
  for (const auto& r : rows)
    net.adj_neighbors.insert(net.adj_neighbors.end(), r.begin(), r.end());

  net.feat_offsets.assign(n_vertices + 1, 0);
  net.by_feature_offsets.assign(1, 0);
  net.labels.assign(n_vertices, -1);
  return net;
}

void attach_features(AttributedNetwork& net, int n_features,
                     const std::vector<std::pair<int, int>>& incidences) {
  std::vector<std::pair<int, int>> vf;
  vf.reserve(incidences.size());
  for (const auto& [j, i] : incidences) {
    if (i < 0 || i >= net.n_vertices)
      throw std::runtime_error("feature incidence names vertex " + std::to_string(i) +
                               " >= n_vertices " + std::to_string(net.n_vertices));
    if (j < 0 || j >= n_features)
      throw std::runtime_error("feature id " + std::to_string(j) + " out of range");
    vf.emplace_back(i, j);
  }
  net.n_features = n_features;
  build_feature_index(net, std::move(vf));
}

AttributedNetwork load_edge_list(const std::string& path, int n_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list '" + path + "'");

  std::vector<std::pair<int, int>> edges;
  long long declared_n = n_override;
  long long max_id = -1;
  std::string line;
  std::vector<long long> f;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    long long dv = 0;
    if (is_comment_line(line)) {
      if (parse_directive(line, "vertices", dv)) declared_n = std::max(declared_n, dv);
      continue;
    }
    if (!parse_fields(line, path, lineno, f)) continue;
    if (f.size() != 2 && f.size() != 3)
      throw std::runtime_error(loc(path, lineno) + ": expected 'src dst' or " +
                               "'src dst {0,1}', got " + std::to_string(f.size()) +
                               " fields");
    if (f.size() == 3) {  // triplet form
      if (f[2] != 0 && f[2] != 1)
        throw std::runtime_error(loc(path, lineno) + ": triplet value must be 0 or 1");
      if (f[2] == 0) continue;
    }
    edges.emplace_back(static_cast<int>(f[0]), static_cast<int>(f[1]));
    max_id = std::max({max_id, f[0], f[1]});
  }
  if (edges.empty()) throw std::runtime_error("empty edge list '" + path + "'");

  long long n = std::max(declared_n, max_id + 1);
  if (declared_n > 0 && max_id + 1 > declared_n)
    throw std::runtime_error(path + ": vertex id " + std::to_string(max_id) +
                             " exceeds declared vertex count " + std::to_string(declared_n));
  return network_from_edges(static_cast<int>(n), edges);
}

void load_feature_table(const std::string& path, AttributedNetwork& net,
                        int m_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open feature table '" + path + "'");

  std::vector<std::pair<int, int>> incidences;  // (feature, vertex)
  long long declared_m = m_override;
  long long max_feat = -1;
  std::string line;
  std::vector<long long> f;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    long long dv = 0;
    if (is_comment_line(line)) {
      if (parse_directive(line, "features", dv)) declared_m = std::max(declared_m, dv);
      continue;
    }
    if (!parse_fields(line, path, lineno, f)) continue;
    if (f.size() != 2 && f.size() != 3)
      throw std::runtime_error(loc(path, lineno) +
                               ": expected 'vertex feature' or 'vertex feature {0,1}'");
    if (f.size() == 3) {
      if (f[2] != 0 && f[2] != 1)
        throw std::runtime_error(loc(path, lineno) + ": triplet value must be 0 or 1");
      if (f[2] == 0) continue;
    }
    const long long vertex = f[0], feature = f[1];
    if (vertex >= net.n_vertices)
      throw std::runtime_error(loc(path, lineno) + ": vertex id " + std::to_string(vertex) +
                               " >= n_vertices " + std::to_string(net.n_vertices));
    incidences.emplace_back(static_cast<int>(feature), static_cast<int>(vertex));
    max_feat = std::max(max_feat, feature);
  }

  long long m = std::max(declared_m, max_feat + 1);
  if (declared_m > 0 && max_feat + 1 > declared_m)
    throw std::runtime_error(path + ": feature id " + std::to_string(max_feat) +
                             " exceeds declared feature count " + std::to_string(declared_m));
  if (incidences.empty())
    std::cerr << "warning: feature table '" << path << "' has no entries (M="
              << m << ")\n";
  attach_features(net, static_cast<int>(m), incidences);
}

void load_labels(const std::string& path, AttributedNetwork& net) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file '" + path + "'");

  net.labels.assign(net.n_vertices, -1);
  std::string line;
  std::vector<long long> f;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!parse_fields(line, path, lineno, f)) continue;
    if (f.size() != 2)
      throw std::runtime_error(loc(path, lineno) + ": expected 'vertex cluster'");
    const long long vertex = f[0], cluster = f[1];
    if (vertex >= net.n_vertices)
      throw std::runtime_error(loc(path, lineno) + ": unknown vertex id " +
                               std::to_string(vertex));
    int& slot = net.labels[vertex];
    if (slot >= 0 && slot != cluster)
      throw std::runtime_error(loc(path, lineno) + ": conflicting label for vertex " +
                               std::to_string(vertex));
    slot = static_cast<int>(cluster);
  }
  net.has_labels = true;
}

ValidationReport validate_network(const AttributedNetwork& net) {
  ValidationReport report;
  for (int i = 0; i < net.n_vertices; ++i) {
    if (net.degree(i) == 0) report.isolated_vertices.push_back(i);
    if (net.feature_count_of(i) == 0) report.featureless_vertices.push_back(i);
    for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p) {
      const int j = net.adj_neighbors[p];
      if (j == i) report.zero_diagonal = false;
      else if (net.pair_index(j, i) < 0) report.adjacency_symmetric = false;
    }
  }
  std::ostringstream note;
  note << report.isolated_vertices.size() << " isolated, "
       << report.featureless_vertices.size() << " featureless vertices";
  if (!report.adjacency_symmetric) note << "; adjacency NOT symmetric";
  if (!report.zero_diagonal) note << "; diagonal NOT zero";
  report.note = note.str();
  return report;
}

}  // namespace netclust
