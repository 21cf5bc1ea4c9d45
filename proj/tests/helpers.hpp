#pragma once

// Shared fixtures and independently written reference implementations the
// tests check library results against.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "kmed/core.hpp"
#include "kmed/io.hpp"
#include "kmed/rng.hpp"

namespace testhelp {

inline kmed::Dataset dataset_1d(const std::vector<double>& values) {
  kmed::Dataset ds;
  ds.n = static_cast<int>(values.size());
  ds.p = 1;
  ds.values = values;
  return ds;
}

// Two well-separated triples; K = 2 optimum is the middle of each triple
// (indices 1 and 4) with total error 4.
inline kmed::Dataset six_point_dataset() {
  return dataset_1d({0.0, 1.0, 2.0, 10.0, 11.0, 12.0});
}

inline kmed::DissimilarityMatrix six_point_matrix() {
  return kmed::build_dissimilarity(six_point_dataset());
}

inline kmed::Dataset random_dataset(kmed::RngStream& rng, int n, int p) {
  kmed::Dataset ds;
  ds.n = n;
  ds.p = p;
  ds.values.reserve(static_cast<std::size_t>(n) * p);
  for (int i = 0; i < n * p; ++i) ds.values.push_back(rng.next_double());
  return ds;
}

// Reference distance, written against the definition rather than the library.
inline double ref_distance(const kmed::Dataset& ds, int i, int j,
                           kmed::MetricKind metric) {
  double acc = 0.0;
  for (int a = 0; a < ds.p; ++a) {
    const double diff = ds.at(i, a) - ds.at(j, a);
    acc += metric == kmed::MetricKind::euclidean ? diff * diff
                                                 : std::abs(diff);
  }
  return metric == kmed::MetricKind::euclidean ? std::sqrt(acc) : acc;
}

// Reference objective: nearest-medoid distances summed ascending by point.
inline double ref_sum_of_errors(const kmed::DissimilarityMatrix& m,
                                const std::vector<int>& medoids) {
  double total = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    double nearest = m.at(i, medoids.front());
    for (int c : medoids) nearest = std::min(nearest, m.at(i, c));
    total += nearest;
  }
  return total;
}

inline std::vector<int> ref_assign(const kmed::DissimilarityMatrix& m,
                                   const std::vector<int>& medoids) {
  std::vector<int> owner(m.size());
  for (int i = 0; i < m.size(); ++i) {
    int best = 0;
    for (int j = 1; j < static_cast<int>(medoids.size()); ++j) {
      if (m.at(i, medoids[j]) < m.at(i, medoids[best])) best = j;
    }
    owner[i] = best;
  }
  return owner;
}

inline int ref_one_medoid(const kmed::DissimilarityMatrix& m) {
  int best = 0;
  double best_sum = 0.0;
  for (int j = 0; j < m.size(); ++j) best_sum += m.at(0, j);
  for (int i = 1; i < m.size(); ++i) {
    double sum = 0.0;
    for (int j = 0; j < m.size(); ++j) sum += m.at(i, j);
    if (sum < best_sum) {
      best_sum = sum;
      best = i;
    }
  }
  return best;
}

inline double chi_square_stat(const std::vector<long>& observed,
                              const std::vector<double>& probabilities,
                              long total) {
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = probabilities[i] * static_cast<double>(total);
    if (expected <= 0.0) continue;
    const double diff = static_cast<double>(observed[i]) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

// Upper 0.999 quantiles: a fit is accepted at significance 0.001 when the
// statistic stays below the quantile for its degrees of freedom.
inline constexpr double kChiSq999Df4 = 18.4668;
inline constexpr double kChiSq999Df5 = 20.5150;

inline double adjusted_rand_index(const std::vector<int>& a,
                                  const std::vector<int>& b) {
  const auto n = a.size();
  std::map<std::pair<int, int>, double> cells;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    cells[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  const auto comb2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, v] : cells) sum_cells += comb2(v);
  for (const auto& [key, v] : rows) sum_rows += comb2(v);
  for (const auto& [key, v] : cols) sum_cols += comb2(v);
  const double total = comb2(static_cast<double>(n));
  const double expected = sum_rows * sum_cols / total;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;
  return (sum_cells - expected) / (max_index - expected);
}

// Two isotropic Gaussians with a big:small count ratio; label 0 is the big
// cluster.
inline kmed::Dataset imbalanced_pair(int big, int small, double separation,
                                     std::uint64_t seed) {
  kmed::io::GeneratorSpec spec;
  spec.seed = seed;
  spec.clusters.push_back({{0.0, 0.0}, 1.0, big});
  spec.clusters.push_back({{separation, 0.0}, 1.0, small});
  return kmed::io::generate(spec);
}

}  // namespace testhelp
