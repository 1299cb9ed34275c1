#include "reference.hpp"

#include <algorithm>
#include <cmath>

namespace refimpl {

namespace {

double flog(double v) { return std::log(std::max(v, kFloor)); }
double guard(double v) { return std::max(v, kFloor); }

}  // namespace

DenseInstance densify(const netclust::AttributedNetwork& net,
                      const netclust::SimilarityMaps& sims,
                      const netclust::ModelState& state) {
  DenseInstance inst;
  inst.n = net.n_vertices;
  inst.m = net.n_features;
  inst.k = state.k_clusters;
  inst.y.assign(inst.n, std::vector<double>(inst.n, 0.0));
  inst.z.assign(inst.n, std::vector<double>(inst.n, 0.0));
  inst.g.assign(inst.n, std::vector<double>(inst.n, 0.0));
  inst.x.assign(inst.n, std::vector<double>(inst.n, 0.0));
  for (int i = 0; i < inst.n; ++i) {
    for (int p = net.adj_offsets[i]; p < net.adj_offsets[i + 1]; ++p) {
      const int j = net.adj_neighbors[p];
      inst.y[i][j] = 1.0;
      inst.z[i][j] = sims.z[p];
      inst.g[i][j] = sims.g[p];
      inst.x[i][j] = state.x[p];
    }
  }
  inst.f.assign(inst.m, std::vector<double>(inst.n, 0.0));
  for (int e = 0; e < net.feature_entry_count(); ++e)
    inst.f[net.entry_feature[e]][net.entry_vertex[e]] = 1.0;

  inst.v.assign(inst.n, std::vector<double>(inst.k, 0.0));
  inst.h.assign(inst.n, std::vector<double>(inst.k, 0.0));
  inst.u.assign(inst.m, std::vector<double>(inst.k, 0.0));
  for (int i = 0; i < inst.n; ++i)
    for (int k = 0; k < inst.k; ++k) {
      inst.v[i][k] = state.v(i, k);
      inst.h[i][k] = state.h(i, k);
    }
  for (int j = 0; j < inst.m; ++j)
    for (int k = 0; k < inst.k; ++k) inst.u[j][k] = state.u(j, k);
  inst.s.assign(inst.n, {0.0, 0.0});
  inst.lambda.assign(inst.n, 0.0);
  for (int i = 0; i < inst.n; ++i) {
    inst.s[i] = {state.s(i, 0), state.s(i, 1)};
    inst.lambda[i] = state.lambda(i);
  }
  return inst;
}

Resp3 ref_theta(const DenseInstance& inst) {
  Resp3 theta(inst.n, std::vector<std::vector<double>>(
                          inst.n, std::vector<double>(inst.k, 0.0)));
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.n; ++j) {
      if (inst.y[i][j] == 0.0) continue;
      double total = 0.0;
      for (int k = 0; k < inst.k; ++k) {
        theta[i][j][k] = std::max(inst.v[i][k] * inst.v[j][k], kFloor);
        total += theta[i][j][k];
      }
      for (int k = 0; k < inst.k; ++k) theta[i][j][k] /= total;
    }
  return theta;
}

Resp3 ref_phi(const DenseInstance& inst) {
  Resp3 phi(inst.m, std::vector<std::vector<double>>(
                        inst.n, std::vector<double>(inst.k, 0.0)));
  for (int j = 0; j < inst.m; ++j)
    for (int i = 0; i < inst.n; ++i) {
      if (inst.f[j][i] == 0.0) continue;
      double total = 0.0;
      for (int k = 0; k < inst.k; ++k) {
        phi[j][i][k] = std::max(inst.v[i][k] * inst.u[j][k], kFloor);
        total += phi[j][i][k];
      }
      for (int k = 0; k < inst.k; ++k) phi[j][i][k] /= total;
    }
  return phi;
}

RefEnergy ref_energy(const DenseInstance& inst) {
  RefEnergy energy;
  energy.epsilon.assign(inst.n, std::vector<double>(inst.n, 0.0));
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.n; ++j) {
      if (inst.y[i][j] == 0.0) continue;
      const double eta = inst.s[i][0] * inst.s[j][0] * inst.z[i][j] +
                         inst.s[i][1] * inst.s[j][1] * inst.g[i][j];
      energy.epsilon[i][j] = -inst.x[i][j] * eta;
      energy.a += std::exp(-energy.epsilon[i][j]);
    }
  return energy;
}

double ref_log_likelihood(const DenseInstance& inst) {
  double total = 0.0;
  for (int i = 0; i < inst.n; ++i) total += inst.k * std::log(std::sqrt(inst.lambda[i]));

  for (int i = 0; i < inst.n; ++i)
    for (int k = 0; k < inst.k; ++k) {
      double xh = 0.0;
      for (int l = 0; l < inst.n; ++l) xh += inst.x[i][l] * inst.h[l][k];
      const double r = inst.v[i][k] - xh;
      total -= 0.5 * inst.lambda[i] * r * r;
    }

  for (int j = 0; j < inst.m; ++j)
    for (int i = 0; i < inst.n; ++i) {
      if (inst.f[j][i] == 0.0) continue;
      double uv = 0.0;
      for (int k = 0; k < inst.k; ++k) uv += inst.u[j][k] * inst.v[i][k];
      total += flog(uv);
    }

  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.n; ++j) {
      if (i == j) continue;
      double vv = 0.0;
      for (int k = 0; k < inst.k; ++k) vv += inst.v[i][k] * inst.v[j][k];
      if (inst.y[i][j] != 0.0) total += flog(vv);
      total -= vv;
    }

  const RefEnergy energy = ref_energy(inst);
  total -= flog(energy.a);
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.n; ++j)
      if (inst.y[i][j] != 0.0) total -= energy.epsilon[i][j];
  return total;
}

double ref_lower_bound(const DenseInstance& inst, const Resp3& theta,
                       const Resp3& phi) {
  double total = 0.0;
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.n; ++j) {
      if (i == j) continue;
      if (inst.y[i][j] != 0.0)
        for (int k = 0; k < inst.k; ++k) {
          const double t = theta[i][j][k];
          if (t <= 0.0) continue;
          total += t * (flog(inst.v[i][k] * inst.v[j][k]) - std::log(t));
        }
      double vv = 0.0;
      for (int k = 0; k < inst.k; ++k) vv += inst.v[i][k] * inst.v[j][k];
      total -= vv;
    }

  for (int j = 0; j < inst.m; ++j)
    for (int i = 0; i < inst.n; ++i) {
      if (inst.f[j][i] == 0.0) continue;
      for (int k = 0; k < inst.k; ++k) {
        const double p = phi[j][i][k];
        if (p <= 0.0) continue;
        total += p * (flog(inst.v[i][k] * inst.u[j][k]) - std::log(p));
      }
    }

  for (int i = 0; i < inst.n; ++i) total += inst.k * std::log(std::sqrt(inst.lambda[i]));
  for (int i = 0; i < inst.n; ++i)
    for (int k = 0; k < inst.k; ++k) {
      double xh = 0.0;
      for (int l = 0; l < inst.n; ++l) xh += inst.x[i][l] * inst.h[l][k];
      total -= 0.5 * inst.lambda[i] *
               (inst.v[i][k] * inst.v[i][k] - 2.0 * xh * inst.v[i][k] + xh * xh);
    }

  const RefEnergy energy = ref_energy(inst);
  total -= flog(energy.a);
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.n; ++j)
      if (inst.y[i][j] != 0.0) total -= energy.epsilon[i][j];
  return total;
}

std::vector<std::vector<double>> ref_update_v(const DenseInstance& inst,
                                              const Resp3& theta, const Resp3& phi) {
  std::vector<std::vector<double>> out(inst.n, std::vector<double>(inst.k, 0.0));
  for (int i = 0; i < inst.n; ++i) {
    std::vector<double> delta(inst.k, 0.0), lam(inst.k, 0.0);
    for (int k = 0; k < inst.k; ++k) {
      double d = 0.0;
      for (int j = 0; j < inst.n; ++j)
        if (inst.y[i][j] != 0.0) d += 2.0 * theta[i][j][k];
      for (int j = 0; j < inst.m; ++j)
        if (inst.f[j][i] != 0.0) d += phi[j][i][k];
      double xh = 0.0;
      for (int l = 0; l < inst.n; ++l) xh += inst.x[i][l] * inst.h[l][k];
      d += inst.lambda[i] * xh * inst.v[i][k];
      delta[k] = d;

      double colsum = 0.0;
      for (int j = 0; j < inst.n; ++j) colsum += inst.v[j][k];
      lam[k] = 2.0 * colsum + inst.lambda[i] * inst.v[i][k];
    }
    double sa = 0.0, sb = 0.0;
    for (int k = 0; k < inst.k; ++k) {
      sa += inst.v[i][k] / guard(lam[k]);
      sb += inst.v[i][k] * delta[k] / guard(lam[k]);
    }
    for (int k = 0; k < inst.k; ++k)
      out[i][k] = (delta[k] * sa + inst.v[i][k]) / guard(lam[k] * sa + sb);
  }
  return out;
}

std::vector<std::vector<double>> ref_update_u(const DenseInstance& inst,
                                              const Resp3& phi) {
  std::vector<std::vector<double>> out(inst.m, std::vector<double>(inst.k, 0.0));
  for (int k = 0; k < inst.k; ++k) {
    double den = 0.0;
    for (int j = 0; j < inst.m; ++j)
      for (int i = 0; i < inst.n; ++i)
        if (inst.f[j][i] != 0.0) den += phi[j][i][k];
    for (int j = 0; j < inst.m; ++j) {
      double num = 0.0;
      for (int i = 0; i < inst.n; ++i)
        if (inst.f[j][i] != 0.0) num += phi[j][i][k];
      out[j][k] = den > kFloor ? num / den : 1.0 / inst.m;
    }
  }
  return out;
}

std::vector<std::vector<double>> ref_update_x(const DenseInstance& inst) {
  const RefEnergy energy = ref_energy(inst);
  std::vector<std::vector<double>> out(inst.n, std::vector<double>(inst.n, 0.0));
  for (int i = 0; i < inst.n; ++i) {
    std::vector<double> delta(inst.n, 0.0), lam(inst.n, 0.0);
    for (int j = 0; j < inst.n; ++j) {
      if (inst.y[i][j] == 0.0) continue;
      const double eta = inst.s[i][0] * inst.s[j][0] * inst.z[i][j] +
                         inst.s[i][1] * inst.s[j][1] * inst.g[i][j];
      double vh = 0.0;
      for (int k = 0; k < inst.k; ++k) vh += inst.v[i][k] * inst.h[j][k];
      double xhh = 0.0;  // (X H H^T)_ij = sum_k (sum_l x_il h_lk) h_jk
      for (int k = 0; k < inst.k; ++k) {
        double xh = 0.0;
        for (int l = 0; l < inst.n; ++l) xh += inst.x[i][l] * inst.h[l][k];
        xhh += xh * inst.h[j][k];
      }
      delta[j] = (inst.lambda[i] * vh + eta) * inst.x[i][j];
      lam[j] = inst.lambda[i] * xhh +
               eta * std::exp(-energy.epsilon[i][j]) / energy.a;
    }
    double sa = 0.0, sb = 0.0;
    for (int j = 0; j < inst.n; ++j) {
      if (inst.y[i][j] == 0.0) continue;
      sa += inst.x[i][j] / guard(lam[j]);
      sb += inst.x[i][j] * delta[j] / guard(lam[j]);
    }
    for (int j = 0; j < inst.n; ++j) {
      if (inst.y[i][j] == 0.0) continue;
      out[i][j] = (delta[j] * sa + inst.x[i][j]) / guard(lam[j] * sa + sb);
    }
  }
  return out;
}

std::vector<std::vector<double>> ref_update_h(const DenseInstance& inst) {
  std::vector<std::vector<double>> out(inst.n, std::vector<double>(inst.k, 0.0));
  for (int k = 0; k < inst.k; ++k) {
    std::vector<double> p_col(inst.n, 0.0), q_col(inst.n, 0.0);
    for (int j = 0; j < inst.n; ++j) {
      for (int i = 0; i < inst.n; ++i) p_col[j] += inst.x[i][j] * inst.v[i][k];
      for (int i = 0; i < inst.n; ++i) {
        double xh = 0.0;
        for (int l = 0; l < inst.n; ++l) xh += inst.x[i][l] * inst.h[l][k];
        q_col[j] += inst.x[i][j] * xh;
      }
    }
    double sa = 0.0, sb = 0.0;
    for (int j = 0; j < inst.n; ++j) {
      sa += inst.h[j][k] / guard(q_col[j]);
      sb += inst.h[j][k] * p_col[j] / guard(q_col[j]);
    }
    for (int j = 0; j < inst.n; ++j)
      out[j][k] = (inst.h[j][k] * p_col[j] * sa + inst.h[j][k]) /
                  guard(q_col[j] * sa + sb);
  }
  return out;
}

std::vector<std::array<double, 2>> ref_update_s(const DenseInstance& inst) {
  const RefEnergy energy = ref_energy(inst);
  std::vector<std::array<double, 2>> out(inst.n, {0.0, 0.0});
  for (int i = 0; i < inst.n; ++i) {
    double ds1 = 0.0, ls2 = 0.0, ps1 = 0.0, fs2 = 0.0;
    for (int j = 0; j < inst.n; ++j) {
      if (inst.y[i][j] == 0.0) continue;
      const double w = std::exp(-energy.epsilon[i][j]) / energy.a;
      ds1 += inst.x[i][j] * inst.z[i][j] * inst.s[j][0];
      ls2 += inst.x[i][j] * inst.g[i][j] * inst.s[j][1];
      ps1 += inst.x[i][j] * inst.z[i][j] * w * inst.s[j][0];
      fs2 += inst.x[i][j] * inst.g[i][j] * w * inst.s[j][1];
    }
    const double r = inst.s[i][0] / guard(ps1) + inst.s[i][1] / guard(fs2);
    const double shared =
        inst.s[i][0] * ds1 / guard(ps1) + inst.s[i][1] * ls2 / guard(fs2);
    out[i][0] = (inst.s[i][0] * r * ds1 + inst.s[i][0]) / guard(ps1 * r + shared);
    out[i][1] = (inst.s[i][1] * r * ls2 + inst.s[i][1]) / guard(fs2 * r + shared);
  }
  return out;
}

std::vector<double> ref_update_lambda(const DenseInstance& inst) {
  std::vector<double> out(inst.n, 0.0);
  for (int i = 0; i < inst.n; ++i) {
    double r2 = 0.0;
    for (int k = 0; k < inst.k; ++k) {
      double xh = 0.0;
      for (int l = 0; l < inst.n; ++l) xh += inst.x[i][l] * inst.h[l][k];
      const double r = inst.v[i][k] - xh;
      r2 += r * r;
    }
    out[i] = std::clamp(inst.k / r2, 1e-6, 1e9);
  }
  return out;
}

}  // namespace refimpl
