#pragma once

// Slow reference implementations the fast paths are checked against.
// Everything here favors obviousness over speed.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracles {

/// Central-difference derivative of f with respect to *x.
inline double fd_derivative(const std::function<double()>& f, double* x,
                            double h = 1e-5) {
  const double saved = *x;
  *x = saved + h;
  const double up = f();
  *x = saved - h;
  const double down = f();
  *x = saved;
  return (up - down) / (2.0 * h);
}

/// abs error when both are tiny, relative error otherwise.
inline double grad_mismatch(double analytic, double numeric) {
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  if (scale < 1e-8) return std::abs(analytic - numeric);
  return std::abs(analytic - numeric) / scale;
}

/// One graph-propagation layer, node at a time:
///   out[i] = sigmoid(F[i].W1 + sum_{s in nbrs[i]} F[s].W2)
/// F is row-major [n, d], W1/W2 are [d, d].
inline std::vector<double> naive_gnn_layer(
    const std::vector<double>& F, std::size_t n, std::size_t d,
    const std::vector<double>& W1, const std::vector<double>& W2,
    const std::vector<std::vector<int>>& nbrs) {
  std::vector<double> out(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += F[i * d + k] * W1[k * d + j];
      for (int s : nbrs[i]) {
        const std::size_t su = static_cast<std::size_t>(s);
        for (std::size_t k = 0; k < d; ++k) acc += F[su * d + k] * W2[k * d + j];
      }
      out[i * d + j] = 1.0 / (1.0 + std::exp(-acc));
    }
  }
  return out;
}

/// Pair-counting AUC: every (positive, negative) pair scores 1 when the
/// positive ranks higher, 0.5 on a tie.
inline double auc_pairs(const std::vector<double>& scores,
                        const std::vector<int>& labels) {
  double won = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) {
        won += 1.0;
      } else if (scores[i] == scores[j]) {
        won += 0.5;
      }
    }
  }
  return won / static_cast<double>(pairs);
}

}  // namespace oracles
