#ifndef FWERKIT_TESTS_WY_ORACLE_HPP
#define FWERKIT_TESTS_WY_ORACLE_HPP

// Brute-force reference for the free step-down min-p adjustment. Enumerates
// every group labeling via next_permutation, counts tail shares with plain
// double loops, and walks the step-down definition rank by rank. It shares
// nothing with the engine except the statistic's arithmetic conventions
// (unit-order accumulation, empty group => 0), which must match for the
// bit-exact comparison to be meaningful.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fwerkit/data_matrix.hpp"

namespace wy_oracle {

struct Result {
  std::vector<double> raw;
  std::vector<double> adjusted;
};

inline double statistic(const std::vector<double>& column,
                        const std::vector<std::uint8_t>& labels,
                        fwerkit::Statistic stat) {
  double sum_t = 0.0, sum_c = 0.0;
  std::size_t n_t = 0, n_c = 0;
  for (std::size_t u = 0; u < column.size(); ++u) {
    const double x = column[u];
    if (std::isnan(x)) continue;
    if (labels[u] != 0) { sum_t += x; ++n_t; } else { sum_c += x; ++n_c; }
  }
  if (n_t == 0 || n_c == 0) return 0.0;
  const double mean_t = sum_t / static_cast<double>(n_t);
  const double mean_c = sum_c / static_cast<double>(n_c);
  const double diff = mean_t - mean_c;
  if (stat == fwerkit::Statistic::mean_difference) return diff;

  double ss_t = 0.0, ss_c = 0.0;
  for (std::size_t u = 0; u < column.size(); ++u) {
    const double x = column[u];
    if (std::isnan(x)) continue;
    if (labels[u] != 0) ss_t += (x - mean_t) * (x - mean_t);
    else ss_c += (x - mean_c) * (x - mean_c);
  }
  const double var_t = n_t > 1 ? ss_t / static_cast<double>(n_t - 1) : 0.0;
  const double var_c = n_c > 1 ? ss_c / static_cast<double>(n_c - 1) : 0.0;
  const double se2 = var_t / static_cast<double>(n_t) + var_c / static_cast<double>(n_c);
  if (se2 <= 0.0) return diff == 0.0 ? 0.0 : (diff > 0.0 ? 1e300 : -1e300);
  return diff / std::sqrt(se2);
}

inline Result adjust(const fwerkit::DataMatrix& data, fwerkit::Statistic stat) {
  // every distinct labeling with the observed group sizes, in lexicographic
  // order (a deliberately different enumeration than the engine's)
  std::vector<std::uint8_t> labels = data.group;
  std::sort(labels.begin(), labels.end());
  std::vector<std::vector<std::uint8_t>> assignments;
  do {
    assignments.push_back(labels);
  } while (std::next_permutation(labels.begin(), labels.end()));

  const std::size_t n_assign = assignments.size();
  const std::size_t m = data.n_outcomes();

  std::vector<std::vector<double>> abs_t(m, std::vector<double>(n_assign));
  std::vector<double> abs_obs(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t a = 0; a < n_assign; ++a)
      abs_t[j][a] = std::fabs(statistic(data.columns[j], assignments[a], stat));
    abs_obs[j] = std::fabs(statistic(data.columns[j], data.group, stat));
  }

  Result result;
  result.raw.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t count = 0;
    for (std::size_t a = 0; a < n_assign; ++a) count += abs_t[j][a] >= abs_obs[j];
    result.raw[j] = static_cast<double>(count) / static_cast<double>(n_assign);
  }

  // per-assignment p-values, outcome by outcome
  std::vector<std::vector<double>> p(m, std::vector<double>(n_assign));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t a = 0; a < n_assign; ++a) {
      std::size_t count = 0;
      for (std::size_t a2 = 0; a2 < n_assign; ++a2) count += abs_t[j][a2] >= abs_t[j][a];
      p[j][a] = static_cast<double>(count) / static_cast<double>(n_assign);
    }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return result.raw[a] < result.raw[b];
  });

  std::vector<double> adjusted_by_rank(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t count = 0;
    for (std::size_t a = 0; a < n_assign; ++a) {
      double minp = 2.0;
      for (std::size_t r = i; r < m; ++r) minp = std::min(minp, p[order[r]][a]);
      count += minp <= result.raw[order[i]];
    }
    adjusted_by_rank[i] = static_cast<double>(count) / static_cast<double>(n_assign);
  }
  for (std::size_t i = 1; i < m; ++i)
    adjusted_by_rank[i] = std::max(adjusted_by_rank[i], adjusted_by_rank[i - 1]);

  result.adjusted.resize(m);
  for (std::size_t i = 0; i < m; ++i) result.adjusted[order[i]] = adjusted_by_rank[i];
  return result;
}

}  // namespace wy_oracle

#endif
