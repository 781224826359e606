// Task metrics: normalized mean square error, per-sample classification
// accuracy, and PAM-4 symbol error ratio.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ringrc/common.hpp"

namespace ringrc {

inline void require_same_length(const std::vector<double>& pred,
                                const std::vector<double>& target) {
  if (pred.size() != target.size() || pred.empty())
    throw undefined_metric("prediction and target must be non-empty and equal length");
}

// Mean squared error over the population variance of the target.
inline double nmse(const std::vector<double>& pred, const std::vector<double>& target) {
  require_same_length(pred, target);
  const double n = static_cast<double>(target.size());
  double mean = 0.0;
  for (double v : target) mean += v;
  mean /= n;
  double var = 0.0, se = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    var += (target[i] - mean) * (target[i] - mean);
    se += (pred[i] - target[i]) * (pred[i] - target[i]);
  }
  var /= n;
  if (var == 0.0) throw undefined_metric("nmse undefined for a constant target");
  return se / n / var;
}

// Threshold at 0.5 (0.5 itself counts as class 1), compare to binary targets.
inline double classification_accuracy(const std::vector<double>& pred,
                                      const std::vector<double>& target) {
  require_same_length(pred, target);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    double label = pred[i] >= 0.5 ? 1.0 : 0.0;
    if (label == target[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

// Nearest symbol in {-3,-1,+1,+3}; equidistant predictions resolve to the
// smaller-magnitude symbol, and the symmetric midpoint 0 to -1.
inline double nearest_pam4(double p) {
  static constexpr double alphabet[4] = {-3.0, -1.0, 1.0, 3.0};
  double best = alphabet[0];
  double best_d = std::abs(p - alphabet[0]);
  for (int i = 1; i < 4; ++i) {
    double d = std::abs(p - alphabet[i]);
    if (d < best_d || (d == best_d && std::abs(alphabet[i]) < std::abs(best))) {
      best = alphabet[i];
      best_d = d;
    }
  }
  return best;
}

inline double ser(const std::vector<double>& pred, const std::vector<double>& target) {
  require_same_length(pred, target);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (nearest_pam4(pred[i]) != target[i]) ++errors;
  return static_cast<double>(errors) / static_cast<double>(pred.size());
}

inline double evaluate_metric(const std::string& kind, const std::vector<double>& pred,
                              const std::vector<double>& target) {
  if (kind == "nmse") return nmse(pred, target);
  if (kind == "accuracy") return classification_accuracy(pred, target);
  if (kind == "ser") return ser(pred, target);
  throw config_error("unknown metric kind '" + kind + "'");
}

// Per-subset metric values with their mean and population standard deviation.
struct metric_report {
  std::string kind;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> per_subset;
};

inline metric_report summarize_subsets(const std::string& kind, std::vector<double> values) {
  if (values.empty()) throw undefined_metric("metric report needs at least one subset");
  metric_report r;
  r.kind = kind;
  r.per_subset = std::move(values);
  for (double v : r.per_subset) r.mean += v;
  r.mean /= static_cast<double>(r.per_subset.size());
  for (double v : r.per_subset) r.stddev += (v - r.mean) * (v - r.mean);
  r.stddev = std::sqrt(r.stddev / static_cast<double>(r.per_subset.size()));
  return r;
}

}  // namespace ringrc
