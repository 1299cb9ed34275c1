#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "netclust/network.hpp"
#include "netclust/similarity.hpp"

namespace netclust {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Floor applied inside every log and every normalization denominator.
inline constexpr double kEpsNum = 1e-12;
// Precision clamp: the closed-form precision update diverges as the
// residual vanishes.
inline constexpr double kLambdaMin = 1e-6;
inline constexpr double kLambdaMax = 1e9;

// All latent parameters of the model. Simplex layout:
//   v: N x K, rows sum to 1          (cluster preference per vertex)
//   u: M x K, columns sum to 1       (cluster feature theme)
//   h: N x K, columns sum to 1       (cluster-vertex proportion)
//   x: per directed pair, each row's neighbor block sums to 1
//                                    (latent neighbor preference)
//   s: N x 2, rows sum to 1          (inclination: col 0 topology, col 1 features)
//   lambda: N positive precisions, clamped to [kLambdaMin, kLambdaMax]
struct ModelState {
  int k_clusters = 0;
  Mat v;
  Mat u;
  Mat h;
  std::vector<double> x;  // aligned with net pair order
  Mat s;
  Vec lambda;
};

// Per-edge and per-feature-entry cluster posteriors, normalized over k.
// theta[p*K + k] belongs to directed pair p; phi[e*K + k] to feature entry e.
struct Responsibilities {
  int k_clusters = 0;
  std::vector<double> theta;
  std::vector<double> phi;
};

// Boltzmann energy over stored pairs and its normalizer.
//   epsilon[p] = -x_p * (s_i1 s_j1 z_p + s_i2 s_j2 g_p)  (<= 0)
//   boltzmann[p] = exp(-epsilon[p])                       (>= 1)
//   a_norm = sum_p boltzmann[p], accumulated in CSR pair order
struct EnergyCache {
  std::vector<double> epsilon;
  std::vector<double> boltzmann;
  double a_norm = 0.0;
};

// Named pieces of the log-likelihood; non-finite terms are reported by name.
struct LikelihoodBreakdown {
  double gaussian_precision = 0.0;  // K * sum_i log sqrt(lambda_i)
  double gaussian_residual = 0.0;   // -sum_{i,k} lambda_i/2 [v - (xh)]^2
  double feature_loglik = 0.0;      // sum over present features of log (UV^T)
  double edge_loglik = 0.0;         // sum over edges of log (VV^T)
  double poisson_penalty = 0.0;     // -sum_{i != j} (VV^T)_ij
  double boltzmann_energy = 0.0;    // sum_p x_p (s s z + s s g)
  double log_normalizer = 0.0;      // -log A
  double total = 0.0;
};

// Dirichlet(1) rows/columns for v, u, h; x uniform over each neighbor set;
// s rows (0.5, 0.5); lambda = 1. Deterministic in the seed.
ModelState init_state(const AttributedNetwork& net, int k_clusters,
                      std::uint64_t seed);

// theta_{ij,k} proportional to v_ik v_jk over the stored edges. Products are
// floored at kEpsNum before normalizing, so degenerate rows come out uniform.
void responsibilities_theta(const ModelState& state, const AttributedNetwork& net,
                            Responsibilities& resp);

// phi_{ji,k} proportional to v_ik u_jk over present feature entries.
void responsibilities_phi(const ModelState& state, const AttributedNetwork& net,
                          Responsibilities& resp);

Responsibilities compute_responsibilities(const ModelState& state,
                                          const AttributedNetwork& net);

EnergyCache energy_cache(const ModelState& state, const SimilarityMaps& sims,
                         const AttributedNetwork& net);

// (XH): row i is sum over i's neighbors j of x_ij * h_j.
Mat xh_product(const ModelState& state, const AttributedNetwork& net);

// Joint log-likelihood with const = 0 and logs floored at kEpsNum. The
// Poisson log term runs over edges only; the (VV^T) penalty runs over all
// ordered pairs i != j via the column-sum identity.
double log_likelihood(const ModelState& state, const AttributedNetwork& net,
                      const SimilarityMaps& sims, const EnergyCache& cache,
                      LikelihoodBreakdown* breakdown = nullptr);

// Jensen lower bound Q(theta, phi); equals the log-likelihood when the
// responsibilities are the plug-in values of the current state.
double lower_bound(const ModelState& state, const Responsibilities& resp,
                   const AttributedNetwork& net, const SimilarityMaps& sims,
                   const EnergyCache& cache);

}  // namespace netclust
