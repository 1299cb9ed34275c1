#include "netclust/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace netclust {

namespace {

// compacts arbitrary label values to 0..K-1 in ascending value order
std::map<int, int> compact_ids(const std::vector<int>& labels) {
  std::map<int, int> ids;
  for (int l : labels) ids.emplace(l, 0);
  int next = 0;
  for (auto& [value, id] : ids) id = next++;
  return ids;
}

std::vector<std::vector<long>> confusion_matrix(const std::vector<int>& pred,
                                                const std::vector<int>& truth,
                                                std::map<int, int>& pred_ids,
                                                std::map<int, int>& true_ids) {
  if (pred.size() != truth.size())
    throw std::runtime_error("label vectors differ in length");
  if (pred.empty()) throw std::runtime_error("empty label vectors");
  pred_ids = compact_ids(pred);
  true_ids = compact_ids(truth);
  std::vector<std::vector<long>> counts(pred_ids.size(),
                                        std::vector<long>(true_ids.size(), 0));
  for (std::size_t i = 0; i < pred.size(); ++i)
    counts[pred_ids.at(pred[i])][true_ids.at(truth[i])]++;
  return counts;
}

}  // namespace

double nmi(const std::vector<int>& pred, const std::vector<int>& truth,
           NmiNormalization normalization) {
  std::map<int, int> pred_ids, true_ids;
  const auto counts = confusion_matrix(pred, truth, pred_ids, true_ids);
  const double n = static_cast<double>(pred.size());
  const std::size_t kp = counts.size(), kt = counts[0].size();

  std::vector<double> row_sum(kp, 0.0), col_sum(kt, 0.0);
  for (std::size_t a = 0; a < kp; ++a)
    for (std::size_t b = 0; b < kt; ++b) {
      row_sum[a] += counts[a][b];
      col_sum[b] += counts[a][b];
    }

  double mutual = 0.0;
  for (std::size_t a = 0; a < kp; ++a)
    for (std::size_t b = 0; b < kt; ++b)
      if (counts[a][b] > 0)
        mutual += counts[a][b] / n *
                  std::log(counts[a][b] * n / (row_sum[a] * col_sum[b]));

  double h_pred = 0.0, h_true = 0.0;
  for (double s : row_sum)
    if (s > 0) h_pred -= s / n * std::log(s / n);
  for (double s : col_sum)
    if (s > 0) h_true -= s / n * std::log(s / n);

  if (h_pred == 0.0 && h_true == 0.0) return 100.0;  // two trivial partitions
  double value = 0.0;
  if (normalization == NmiNormalization::kArithmeticMean)
    value = 2.0 * mutual / (h_pred + h_true);
  else
    value = (h_pred == 0.0 || h_true == 0.0) ? 0.0
                                             : mutual / std::sqrt(h_pred * h_true);
  return std::clamp(value, 0.0, 1.0) * 100.0;
}

std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int rows = static_cast<int>(cost.size());
  const int cols = rows > 0 ? static_cast<int>(cost[0].size()) : 0;
  if (rows == 0 || cols == 0) return {};
  for (const auto& r : cost) {
    if (static_cast<int>(r.size()) != cols)
      throw std::runtime_error("hungarian: ragged cost matrix");
    for (double c : r)
      if (!std::isfinite(c)) throw std::runtime_error("hungarian: non-finite cost");
  }
  const int n = std::max(rows, cols);
  auto at = [&](int i, int j) {
    return (i < rows && j < cols) ? cost[i][j] : 0.0;  // zero-cost dummies
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(rows, -1);
  for (int j = 1; j <= n; ++j)
    if (match[j] >= 1 && match[j] <= rows && j <= cols)
      row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  std::map<int, int> pred_ids, true_ids;
  const auto counts = confusion_matrix(pred, truth, pred_ids, true_ids);

  std::vector<std::vector<double>> neg(counts.size(),
                                       std::vector<double>(counts[0].size(), 0.0));
  for (std::size_t a = 0; a < counts.size(); ++a)
    for (std::size_t b = 0; b < counts[0].size(); ++b)
      neg[a][b] = -static_cast<double>(counts[a][b]);

  const auto match = hungarian(neg);
  long matched = 0;
  for (std::size_t a = 0; a < counts.size(); ++a)
    if (match[a] >= 0) matched += counts[a][match[a]];
  return 100.0 * matched / static_cast<double>(pred.size());
}

EvalReport evaluate(const std::vector<int>& pred, const std::vector<int>& truth,
                    NmiNormalization normalization) {
  EvalReport report;
  report.normalization = normalization;
  std::map<int, int> pred_ids, true_ids;
  report.confusion = confusion_matrix(pred, truth, pred_ids, true_ids);
  for (const auto& [value, id] : pred_ids) report.pred_values.push_back(value);
  for (const auto& [value, id] : true_ids) report.true_values.push_back(value);

  report.nmi = nmi(pred, truth, normalization);
  report.acc = accuracy(pred, truth);

  std::vector<std::vector<double>> neg(report.confusion.size(),
                                       std::vector<double>(report.true_values.size(), 0.0));
  for (std::size_t a = 0; a < report.confusion.size(); ++a)
    for (std::size_t b = 0; b < report.true_values.size(); ++b)
      neg[a][b] = -static_cast<double>(report.confusion[a][b]);
  const auto match = hungarian(neg);
  for (std::size_t a = 0; a < match.size(); ++a)
    report.assignment.emplace_back(report.pred_values[a],
                                   match[a] >= 0 ? report.true_values[match[a]] : -1);
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["nmi"] = report.nmi;
  j["acc"] = report.acc;
  j["confusion"] = report.confusion;
  j["pred_values"] = report.pred_values;
  j["true_values"] = report.true_values;
  nlohmann::json assignment = nlohmann::json::object();
  for (const auto& [p, t] : report.assignment)
    assignment[std::to_string(p)] = t;
  j["assignment"] = assignment;
  j["normalization_variant"] =
      report.normalization == NmiNormalization::kArithmeticMean ? "mean" : "sqrt";
  return j.dump(2);
}

}  // namespace netclust
