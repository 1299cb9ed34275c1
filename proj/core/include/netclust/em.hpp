#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netclust/model_state.hpp"
#include "netclust/network.hpp"
#include "netclust/similarity.hpp"

namespace netclust {

struct EMConfig {
  int k_clusters = 2;
  int max_iters = 300;
  double tol = 1e-6;          // stop when dL <= tol (scaled when relative_tol)
  bool relative_tol = true;   // scale tol by (1 + |L_prev|)
  std::uint64_t seed = 0;
  bool renormalize = true;    // project back onto the simplices after each update
  std::string trace_path;     // CSV "iteration,loglik,delta" when nonempty
};

struct TracePoint {
  int iteration = 0;
  double loglik = 0.0;
  double delta = 0.0;
};

struct FitResult {
  ModelState state;
  std::vector<int> labels;
  std::vector<TracePoint> trace;
  bool converged = false;
  int iterations_run = 0;
  double final_loglik = 0.0;
  // iterations whose likelihood fell by more than the stop threshold; the
  // coupled Boltzmann normalizer leaves no ascent guarantee, so drops are
  // tracked rather than assumed away
  int tolerance_violations = 0;
};

// Multiplicative M-step updates. Each replaces one block in place using the
// current values of all the others; the simplex constraint is restored
// afterward when renormalize is set. Non-finite results raise a diagnostic
// naming the offending entry.
void update_v(ModelState& state, const Responsibilities& resp,
              const AttributedNetwork& net, bool renormalize = true);
void update_u(ModelState& state, const Responsibilities& resp,
              const AttributedNetwork& net);
void update_x(ModelState& state, const SimilarityMaps& sims,
              const EnergyCache& cache, const AttributedNetwork& net,
              bool renormalize = true);
void update_h(ModelState& state, const AttributedNetwork& net,
              bool renormalize = true);
void update_s(ModelState& state, const SimilarityMaps& sims,
              const EnergyCache& cache, const AttributedNetwork& net,
              bool renormalize = true);
void update_lambda(ModelState& state, const AttributedNetwork& net);

// Hard assignment: argmax_k v_ik, ties broken by lowest k.
std::vector<int> assign_labels(const ModelState& state);

// Full EM loop: init, then per iteration the E-step (responsibilities and
// energy cache) followed by the M-step updates in the order
// v, u, x, h, s, lambda; stops on the likelihood-change tolerance or at
// max_iters. Deterministic given (inputs, seed, config).
FitResult fit(const AttributedNetwork& net, const SimilarityMaps& sims,
              const EMConfig& cfg);

}  // namespace netclust
