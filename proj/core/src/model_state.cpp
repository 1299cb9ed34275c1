#include "netclust/model_state.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include "netclust/rng.hpp"

namespace netclust {

namespace {

double floored_log(double x) { return std::log(std::max(x, kEpsNum)); }

void check_finite(double value, const char* term) {
  if (!std::isfinite(value))
    throw std::runtime_error(std::string("non-finite likelihood term: ") + term);
}

}  // namespace

ModelState init_state(const AttributedNetwork& net, int k_clusters,
                      std::uint64_t seed) {
  const int n = net.n_vertices;
  const int m = net.n_features;
  if (k_clusters < 1) throw std::runtime_error("k_clusters must be >= 1");
  if (k_clusters > n)
    throw std::runtime_error("k_clusters " + std::to_string(k_clusters) +
                             " exceeds vertex count " + std::to_string(n));

  ModelState state;
  state.k_clusters = k_clusters;
  state.v.resize(n, k_clusters);
  state.u.resize(m, k_clusters);
  state.h.resize(n, k_clusters);
  state.s.resize(n, 2);
  state.lambda = Vec::Ones(n);
  state.x.assign(net.pair_count(), 0.0);

  Rng rng(seed);
  std::vector<double> buf(std::max(n, std::max(m, k_clusters)));

  for (int i = 0; i < n; ++i) {  // v rows
    rng.dirichlet(1.0, std::span(buf.data(), k_clusters));
    for (int k = 0; k < k_clusters; ++k) state.v(i, k) = buf[k];
  }
  for (int k = 0; k < k_clusters; ++k) {  // u columns over M
    if (m == 0) break;
    rng.dirichlet(1.0, std::span(buf.data(), m));
    for (int j = 0; j < m; ++j) state.u(j, k) = buf[j];
  }
  for (int k = 0; k < k_clusters; ++k) {  // h columns over N
    rng.dirichlet(1.0, std::span(buf.data(), n));
    for (int j = 0; j < n; ++j) state.h(j, k) = buf[j];
  }
  for (int i = 0; i < n; ++i) {
    const int deg = net.degree(i);
    if (deg == 0) continue;
    const double w = 1.0 / deg;
    for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p) state.x[p] = w;
  }
  state.s.setConstant(0.5);
  return state;
}

void responsibilities_theta(const ModelState& state, const AttributedNetwork& net,
                            Responsibilities& resp) {
  const int k_n = state.k_clusters;
  resp.k_clusters = k_n;
  resp.theta.assign(static_cast<std::size_t>(net.pair_count()) * k_n, 0.0);
  for (int i = 0; i < net.n_vertices; ++i) {
    for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p) {
      const int j = net.adj_neighbors[p];
      double* row = resp.theta.data() + static_cast<std::size_t>(p) * k_n;
      double total = 0.0;
      for (int k = 0; k < k_n; ++k) {
        row[k] = std::max(state.v(i, k) * state.v(j, k), kEpsNum);
        total += row[k];
      }
      for (int k = 0; k < k_n; ++k) row[k] /= total;
    }
  }
}

void responsibilities_phi(const ModelState& state, const AttributedNetwork& net,
                          Responsibilities& resp) {
  const int k_n = state.k_clusters;
  resp.k_clusters = k_n;
  resp.phi.assign(static_cast<std::size_t>(net.feature_entry_count()) * k_n, 0.0);
  for (int e = 0; e < net.feature_entry_count(); ++e) {
    const int i = net.entry_vertex[e];
    const int j = net.entry_feature[e];
    double* row = resp.phi.data() + static_cast<std::size_t>(e) * k_n;
    double total = 0.0;
    for (int k = 0; k < k_n; ++k) {
      row[k] = std::max(state.v(i, k) * state.u(j, k), kEpsNum);
      total += row[k];
    }
    for (int k = 0; k < k_n; ++k) row[k] /= total;
  }
}

Responsibilities compute_responsibilities(const ModelState& state,
                                          const AttributedNetwork& net) {
  Responsibilities resp;
  responsibilities_theta(state, net, resp);
  responsibilities_phi(state, net, resp);
  return resp;
}

EnergyCache energy_cache(const ModelState& state, const SimilarityMaps& sims,
                         const AttributedNetwork& net) {
  EnergyCache cache;
  cache.epsilon.assign(net.pair_count(), 0.0);
  cache.boltzmann.assign(net.pair_count(), 1.0);
  cache.a_norm = 0.0;
  for (int i = 0; i < net.n_vertices; ++i) {
    for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p) {
      const int j = net.adj_neighbors[p];
      const double eta = state.s(i, 0) * state.s(j, 0) * sims.z[p] +
                         state.s(i, 1) * state.s(j, 1) * sims.g[p];
      cache.epsilon[p] = -state.x[p] * eta;
      cache.boltzmann[p] = std::exp(-cache.epsilon[p]);
      cache.a_norm += cache.boltzmann[p];
    }
  }
  return cache;
}

Mat xh_product(const ModelState& state, const AttributedNetwork& net) {
  Mat xh = Mat::Zero(net.n_vertices, state.k_clusters);
  for (int i = 0; i < net.n_vertices; ++i)
    for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p)
      xh.row(i) += state.x[p] * state.h.row(net.adj_neighbors[p]);
  return xh;
}

double log_likelihood(const ModelState& state, const AttributedNetwork& net,
                      const SimilarityMaps&, const EnergyCache& cache,
                      LikelihoodBreakdown* breakdown) {
  const int n = net.n_vertices;
  const int k_n = state.k_clusters;
  LikelihoodBreakdown b;

  b.gaussian_precision = k_n * 0.5 * state.lambda.array().log().sum();
  check_finite(b.gaussian_precision, "gaussian_precision");

  const Mat xh = xh_product(state, net);
  for (int i = 0; i < n; ++i) {
    double r2 = 0.0;
    for (int k = 0; k < k_n; ++k) {
      const double r = state.v(i, k) - xh(i, k);
      r2 += r * r;
    }
    b.gaussian_residual -= 0.5 * state.lambda(i) * r2;
  }
  check_finite(b.gaussian_residual, "gaussian_residual");

  for (int e = 0; e < net.feature_entry_count(); ++e) {
    const int i = net.entry_vertex[e];
    const int j = net.entry_feature[e];
    b.feature_loglik += floored_log(state.v.row(i).dot(state.u.row(j)));
  }
  check_finite(b.feature_loglik, "feature_loglik");

  for (int i = 0; i < n; ++i)
    for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p)
      b.edge_loglik += floored_log(state.v.row(i).dot(state.v.row(net.adj_neighbors[p])));
  check_finite(b.edge_loglik, "edge_loglik");

  // sum_{i != j} (VV^T)_ij = sum_k (colsum_k^2 - sum_i v_ik^2)
  for (int k = 0; k < k_n; ++k) {
    const double colsum = state.v.col(k).sum();
    b.poisson_penalty -= colsum * colsum - state.v.col(k).squaredNorm();
  }
  check_finite(b.poisson_penalty, "poisson_penalty");

  for (double eps_p : cache.epsilon) b.boltzmann_energy -= eps_p;
  check_finite(b.boltzmann_energy, "boltzmann_energy");

  b.log_normalizer = -floored_log(cache.a_norm);
  check_finite(b.log_normalizer, "log_normalizer");

  b.total = b.gaussian_precision + b.gaussian_residual + b.feature_loglik +
            b.edge_loglik + b.poisson_penalty + b.boltzmann_energy + b.log_normalizer;
  check_finite(b.total, "total");
  if (breakdown) *breakdown = b;
  return b.total;
}

double lower_bound(const ModelState& state, const Responsibilities& resp,
                   const AttributedNetwork& net, const SimilarityMaps&,
                   const EnergyCache& cache) {
  const int n = net.n_vertices;
  const int k_n = state.k_clusters;
  double q = 0.0;

  // edge block: Y_ij sum_k theta log(v_ik v_jk / theta), theta = 0 terms skipped
  for (int i = 0; i < n; ++i) {
    for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p) {
      const int j = net.adj_neighbors[p];
      const double* th = resp.theta.data() + static_cast<std::size_t>(p) * k_n;
      for (int k = 0; k < k_n; ++k) {
        if (th[k] <= 0.0) continue;
        q += th[k] * (floored_log(state.v(i, k) * state.v(j, k)) - std::log(th[k]));
      }
    }
  }
  check_finite(q, "bound_edge_block");

  for (int k = 0; k < k_n; ++k) {
    const double colsum = state.v.col(k).sum();
    q -= colsum * colsum - state.v.col(k).squaredNorm();
  }

  for (int e = 0; e < net.feature_entry_count(); ++e) {
    const int i = net.entry_vertex[e];
    const int j = net.entry_feature[e];
    const double* ph = resp.phi.data() + static_cast<std::size_t>(e) * k_n;
    for (int k = 0; k < k_n; ++k) {
      if (ph[k] <= 0.0) continue;
      q += ph[k] * (floored_log(state.v(i, k) * state.u(j, k)) - std::log(ph[k]));
    }
  }
  check_finite(q, "bound_feature_block");

  q += k_n * 0.5 * state.lambda.array().log().sum();

  // Gaussian block in the expanded v^2 - 2(xh)v + (xh)^2 form
  const Mat xh = xh_product(state, net);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < k_n; ++k) {
      const double v = state.v(i, k), w = xh(i, k);
      acc += v * v - 2.0 * w * v + w * w;
    }
    q -= 0.5 * state.lambda(i) * acc;
  }
  check_finite(q, "bound_gaussian_block");

  for (double eps_p : cache.epsilon) q -= eps_p;
  q -= floored_log(cache.a_norm);
  check_finite(q, "bound_total");
  return q;
}

}  // namespace netclust
