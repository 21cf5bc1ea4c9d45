#include "kmed/core.hpp"

#include <cmath>
#include <cstdlib>

namespace kmed {

const char* to_string(MetricKind metric) {
  switch (metric) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::manhattan: return "manhattan";
  }
  return "?";
}

void validate_dataset(const Dataset& ds) {
  if (ds.n < 1) throw DataError("dataset: need at least one point");
  if (ds.p < 1) throw DataError("dataset: need at least one attribute");
  if (ds.values.size() !=
      static_cast<std::size_t>(ds.n) * static_cast<std::size_t>(ds.p)) {
    throw DataError("dataset: value buffer does not match n * p");
  }
  if (!ds.labels.empty() && ds.labels.size() != static_cast<std::size_t>(ds.n)) {
    throw DataError("dataset: label count does not match point count");
  }
  for (double v : ds.values) {
    if (!std::isfinite(v)) throw DataError("dataset: non-finite attribute value");
  }
}

DissimilarityMatrix::DissimilarityMatrix(int n, std::vector<double> entries,
                                         MetricKind metric)
    : n_(n), metric_(metric), d_(std::move(entries)) {
  if (n_ < 1) throw DataError("matrix: need at least one point");
  if (n_ > kMaxMatrixPoints) {
    throw CapacityError("matrix: " + std::to_string(n_) + " points exceed the " +
                        std::to_string(kMaxMatrixPoints) + "-point dense cap");
  }
  if (d_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_)) {
    throw DataError("matrix: entry buffer does not match n * n");
  }
  for (int i = 0; i < n_; ++i) {
    if (at(i, i) != 0.0) throw DataError("matrix: nonzero diagonal entry");
    for (int j = i + 1; j < n_; ++j) {
      const double v = at(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw DataError("matrix: negative or non-finite entry");
      }
      if (v != at(j, i)) throw DataError("matrix: asymmetric entries");
    }
  }
}

namespace {

double point_distance(const Dataset& ds, int i, int j, MetricKind metric) {
  const double* a = ds.values.data() + static_cast<std::size_t>(i) * ds.p;
  const double* b = ds.values.data() + static_cast<std::size_t>(j) * ds.p;
  double acc = 0.0;
  if (metric == MetricKind::euclidean) {
    for (int t = 0; t < ds.p; ++t) {
      const double diff = a[t] - b[t];
      acc += diff * diff;
    }
    return std::sqrt(acc);
  }
  for (int t = 0; t < ds.p; ++t) acc += std::abs(a[t] - b[t]);
  return acc;
}

}  // namespace

DissimilarityMatrix build_dissimilarity(const Dataset& ds, MetricKind metric) {
  validate_dataset(ds);
  if (ds.n > kMaxMatrixPoints) {
    throw CapacityError("matrix: " + std::to_string(ds.n) +
                        " points exceed the " +
                        std::to_string(kMaxMatrixPoints) + "-point dense cap");
  }
  const auto n = static_cast<std::size_t>(ds.n);
  std::vector<double> d(n * n, 0.0);
  for (int i = 0; i < ds.n; ++i) {
    for (int j = i + 1; j < ds.n; ++j) {
      const double v = point_distance(ds, i, j, metric);
      d[static_cast<std::size_t>(i) * n + j] = v;
      d[static_cast<std::size_t>(j) * n + i] = v;
    }
  }
  return DissimilarityMatrix(ds.n, std::move(d), metric);
}

DissimilarityMatrix extract_submatrix(const DissimilarityMatrix& m,
                                      std::span<const int> keep) {
  if (keep.empty()) throw Error("extract_submatrix: empty index list");
  for (std::size_t q = 0; q < keep.size(); ++q) {
    if (keep[q] < 0 || keep[q] >= m.size()) {
      throw Error("extract_submatrix: index out of range");
    }
    if (q > 0 && keep[q] <= keep[q - 1]) {
      throw Error("extract_submatrix: indices must be ascending and distinct");
    }
  }
  const auto s = keep.size();
  std::vector<double> d(s * s);
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = 0; b < s; ++b) {
      d[a * s + b] = m.at(keep[a], keep[b]);
    }
  }
  return DissimilarityMatrix(static_cast<int>(s), std::move(d), m.metric());
}

double sum_of_errors(const DissimilarityMatrix& m, const MedoidSet& medoids) {
  if (medoids.indices.empty()) throw Error("sum_of_errors: empty medoid set");
  double se = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    const auto row = m.row(i);
    double best = row[medoids.indices[0]];
    for (int j = 1; j < medoids.k(); ++j) {
      const double d = row[medoids.indices[j]];
      if (d < best) best = d;
    }
    se += best;
  }
  return se;
}

Assignment assign(const DissimilarityMatrix& m, const MedoidSet& medoids) {
  if (medoids.indices.empty()) throw Error("assign: empty medoid set");
  Assignment out;
  out.owner.resize(m.size());
  for (int i = 0; i < m.size(); ++i) {
    const auto row = m.row(i);
    int best_j = 0;
    double best = row[medoids.indices[0]];
    for (int j = 1; j < medoids.k(); ++j) {
      const double d = row[medoids.indices[j]];
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    out.owner[i] = best_j;
  }
  return out;
}

}  // namespace kmed
