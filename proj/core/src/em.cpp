#include "netclust/em.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace netclust {

namespace {

double guarded(double denom) { return std::max(denom, kEpsNum); }

void check_entry(double value, const char* block, int row, int col) {
  if (!std::isfinite(value))
    throw std::runtime_error(std::string("non-finite ") + block + " update at (" +
                             std::to_string(row) + "," + std::to_string(col) + ")");
}

void renormalize_rows(Mat& m) {
  for (int i = 0; i < m.rows(); ++i) {
    const double total = m.row(i).sum();
    if (total > kEpsNum) m.row(i) /= total;
    else m.row(i).setConstant(1.0 / m.cols());
  }
}

void renormalize_cols(Mat& m) {
  for (int k = 0; k < m.cols(); ++k) {
    const double total = m.col(k).sum();
    if (total > kEpsNum) m.col(k) /= total;
    else m.col(k).setConstant(m.rows() > 0 ? 1.0 / m.rows() : 0.0);
  }
}

}  // namespace

void update_v(ModelState& state, const Responsibilities& resp,
              const AttributedNetwork& net, bool renormalize) {
  const int n = net.n_vertices;
  const int k_n = state.k_clusters;
  const Mat v_old = state.v;
  const Vec colsum = v_old.colwise().sum();
  const Mat xh = xh_product(state, net);

  std::vector<double> delta(k_n), lam_big(k_n);
  for (int i = 0; i < n; ++i) {
    const double lambda_i = state.lambda(i);
    for (int k = 0; k < k_n; ++k) {
      double d = lambda_i * xh(i, k) * v_old(i, k);
      for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p)
        d += 2.0 * resp.theta[static_cast<std::size_t>(p) * k_n + k];
      for (int e = net.feat_offsets[i]; e < net.feat_offsets[i + 1]; ++e)
        d += resp.phi[static_cast<std::size_t>(e) * k_n + k];
      delta[k] = d;
      lam_big[k] = 2.0 * colsum(k) + lambda_i * v_old(i, k);
    }
    double sa = 0.0, sb = 0.0;
    for (int k = 0; k < k_n; ++k) {
      sa += v_old(i, k) / guarded(lam_big[k]);
      sb += v_old(i, k) * delta[k] / guarded(lam_big[k]);
    }
    for (int k = 0; k < k_n; ++k) {
      state.v(i, k) = (delta[k] * sa + v_old(i, k)) / guarded(lam_big[k] * sa + sb);
      check_entry(state.v(i, k), "v", i, k);
    }
  }
  if (renormalize) renormalize_rows(state.v);
}

void update_u(ModelState& state, const Responsibilities& resp,
              const AttributedNetwork& net) {
  const int m = net.n_features;
  const int k_n = state.k_clusters;
  if (m == 0) return;
  Mat num = Mat::Zero(m, k_n);
  Vec den = Vec::Zero(k_n);
  for (int e = 0; e < net.feature_entry_count(); ++e) {
    const int j = net.entry_feature[e];
    for (int k = 0; k < k_n; ++k) {
      const double p = resp.phi[static_cast<std::size_t>(e) * k_n + k];
      num(j, k) += p;
      den(k) += p;
    }
  }
  for (int k = 0; k < k_n; ++k) {
    if (den(k) > kEpsNum) state.u.col(k) = num.col(k) / den(k);
    else state.u.col(k).setConstant(1.0 / m);  // no feature mass anywhere
    for (int j = 0; j < m; ++j) check_entry(state.u(j, k), "u", j, k);
  }
}

void update_x(ModelState& state, const SimilarityMaps& sims,
              const EnergyCache& cache, const AttributedNetwork& net,
              bool renormalize) {
  const int n = net.n_vertices;
  const int k_n = state.k_clusters;
  const std::vector<double> x_old = state.x;
  const Mat xh = xh_product(state, net);  // frozen at the old x

  std::vector<double> delta, lam_big;
  for (int i = 0; i < n; ++i) {
    const int begin = net.adj_offsets[i], end = net.adj_offsets[i + 1];
    if (begin == end) continue;
    const double lambda_i = state.lambda(i);
    delta.assign(end - begin, 0.0);
    lam_big.assign(end - begin, 0.0);
    for (int p = begin; p < end; ++p) {
      const int j = net.adj_neighbors[p];
      const double eta = state.s(i, 0) * state.s(j, 0) * sims.z[p] +
                         state.s(i, 1) * state.s(j, 1) * sims.g[p];
      double vh = 0.0, xhh = 0.0;
      for (int k = 0; k < k_n; ++k) {
        vh += state.v(i, k) * state.h(j, k);
        xhh += xh(i, k) * state.h(j, k);
      }
      delta[p - begin] = (lambda_i * vh + eta) * x_old[p];
      lam_big[p - begin] = lambda_i * xhh + eta * cache.boltzmann[p] / cache.a_norm;
    }
    double sa = 0.0, sb = 0.0;
    for (int p = begin; p < end; ++p) {
      sa += x_old[p] / guarded(lam_big[p - begin]);
      sb += x_old[p] * delta[p - begin] / guarded(lam_big[p - begin]);
    }
    double row_sum = 0.0;
    for (int p = begin; p < end; ++p) {
      state.x[p] = (delta[p - begin] * sa + x_old[p]) /
                   guarded(lam_big[p - begin] * sa + sb);
      check_entry(state.x[p], "x", i, net.adj_neighbors[p]);
      row_sum += state.x[p];
    }
    if (renormalize) {
      if (row_sum > kEpsNum)
        for (int p = begin; p < end; ++p) state.x[p] /= row_sum;
      else
        for (int p = begin; p < end; ++p) state.x[p] = 1.0 / (end - begin);
    }
  }
}

void update_h(ModelState& state, const AttributedNetwork& net, bool renormalize) {
  const int n = net.n_vertices;
  const int k_n = state.k_clusters;
  const Mat h_old = state.h;

  // p_mat = X^T V, q_mat = X^T X H, both via the stored pairs only
  Mat p_mat = Mat::Zero(n, k_n);
  Mat q_mat = Mat::Zero(n, k_n);
  const Mat xh = xh_product(state, net);
  for (int i = 0; i < n; ++i) {
    for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p) {
      const int j = net.adj_neighbors[p];
      p_mat.row(j) += state.x[p] * state.v.row(i);
      q_mat.row(j) += state.x[p] * xh.row(i);
    }
  }

  for (int k = 0; k < k_n; ++k) {
    double sa = 0.0, sb = 0.0;
    for (int j = 0; j < n; ++j) {
      sa += h_old(j, k) / guarded(q_mat(j, k));
      sb += h_old(j, k) * p_mat(j, k) / guarded(q_mat(j, k));
    }
    for (int j = 0; j < n; ++j) {
      state.h(j, k) = (h_old(j, k) * p_mat(j, k) * sa + h_old(j, k)) /
                      guarded(q_mat(j, k) * sa + sb);
      check_entry(state.h(j, k), "h", j, k);
    }
  }
  if (renormalize) renormalize_cols(state.h);
}

void update_s(ModelState& state, const SimilarityMaps& sims,
              const EnergyCache& cache, const AttributedNetwork& net,
              bool renormalize) {
  const int n = net.n_vertices;
  const Mat s_old = state.s;
  for (int i = 0; i < n; ++i) {
    double ds1 = 0.0, ls2 = 0.0, ps1 = 0.0, fs2 = 0.0;
    for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p) {
      const int j = net.adj_neighbors[p];
      const double xz = state.x[p] * sims.z[p];
      const double xg = state.x[p] * sims.g[p];
      const double w = cache.boltzmann[p] / cache.a_norm;
      ds1 += xz * s_old(j, 0);
      ls2 += xg * s_old(j, 1);
      ps1 += xz * w * s_old(j, 0);
      fs2 += xg * w * s_old(j, 1);
    }
    const double r = s_old(i, 0) / guarded(ps1) + s_old(i, 1) / guarded(fs2);
    const double shared = s_old(i, 0) * ds1 / guarded(ps1) +
                          s_old(i, 1) * ls2 / guarded(fs2);
    double s1 = (s_old(i, 0) * r * ds1 + s_old(i, 0)) / guarded(ps1 * r + shared);
    double s2 = (s_old(i, 1) * r * ls2 + s_old(i, 1)) / guarded(fs2 * r + shared);
    check_entry(s1, "s", i, 0);
    check_entry(s2, "s", i, 1);
    if (renormalize) {
      const double total = s1 + s2;
      if (total > kEpsNum) { s1 /= total; s2 /= total; }
      else { s1 = s2 = 0.5; }
    }
    state.s(i, 0) = s1;
    state.s(i, 1) = s2;
  }
}

void update_lambda(ModelState& state, const AttributedNetwork& net) {
  const Mat xh = xh_product(state, net);
  const int k_n = state.k_clusters;
  for (int i = 0; i < net.n_vertices; ++i) {
    double r2 = 0.0;
    for (int k = 0; k < k_n; ++k) {
      const double r = state.v(i, k) - xh(i, k);
      r2 += r * r;
    }
    state.lambda(i) = std::clamp(k_n / r2, kLambdaMin, kLambdaMax);
  }
}

std::vector<int> assign_labels(const ModelState& state) {
  std::vector<int> labels(state.v.rows());
  for (int i = 0; i < state.v.rows(); ++i) {
    int best = 0;
    for (int k = 1; k < state.k_clusters; ++k)
      if (state.v(i, k) > state.v(i, best)) best = k;
    labels[i] = best;
  }
  return labels;
}

FitResult fit(const AttributedNetwork& net, const SimilarityMaps& sims,
              const EMConfig& cfg) {
  if (net.edge_count() == 0) throw std::runtime_error("fit: empty graph");
  if (cfg.max_iters < 1) throw std::runtime_error("fit: max_iters must be >= 1");
  if (cfg.tol < 0.0) throw std::runtime_error("fit: tol must be >= 0");
  if (sims.pair_count() != net.pair_count() ||
      static_cast<int>(sims.g.size()) != net.pair_count())
    throw std::runtime_error("fit: similarity maps do not match the network");

  FitResult result;
  result.state = init_state(net, cfg.k_clusters, cfg.seed);
  ModelState& state = result.state;

  std::FILE* trace_file = nullptr;
  if (!cfg.trace_path.empty()) {
    trace_file = std::fopen(cfg.trace_path.c_str(), "w");
    if (!trace_file)
      throw std::runtime_error("fit: cannot open trace file '" + cfg.trace_path + "'");
    std::fprintf(trace_file, "iteration,loglik,delta\n");
  }

  try {
    EnergyCache cache = energy_cache(state, sims, net);
    double loglik_prev = log_likelihood(state, net, sims, cache);

    for (int t = 1; t <= cfg.max_iters; ++t) {
      try {
        const Responsibilities resp = compute_responsibilities(state, net);
        update_v(state, resp, net, cfg.renormalize);
        update_u(state, resp, net);
        update_x(state, sims, cache, net, cfg.renormalize);
        update_h(state, net, cfg.renormalize);
        update_s(state, sims, cache, net, cfg.renormalize);
        update_lambda(state, net);
        cache = energy_cache(state, sims, net);  // once per iteration
      } catch (const std::exception& e) {
        throw std::runtime_error("iteration " + std::to_string(t) + ": " + e.what());
      }

      const double loglik = log_likelihood(state, net, sims, cache);
      const double delta = loglik - loglik_prev;
      result.trace.push_back({t, loglik, delta});
      if (trace_file) {
        std::fprintf(trace_file, "%d,%.17g,%.17g\n", t, loglik, delta);
        std::fflush(trace_file);
      }
      result.iterations_run = t;

      const double threshold =
          cfg.relative_tol ? cfg.tol * (1.0 + std::abs(loglik_prev)) : cfg.tol;
      if (delta < -threshold) {
        ++result.tolerance_violations;
        std::fprintf(stderr,
                     "netclust: iteration %d decreased the likelihood by %g\n",
                     t, -delta);
      }
      loglik_prev = loglik;
      if (delta <= threshold) {
        result.converged = true;
        break;
      }
    }
    result.final_loglik = loglik_prev;
  } catch (...) {
    if (trace_file) std::fclose(trace_file);
    throw;
  }
  if (trace_file) std::fclose(trace_file);

  result.labels = assign_labels(state);
  return result;
}

}  // namespace netclust
