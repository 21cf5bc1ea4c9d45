#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kmed {

// Hard cap on the point count for the dense n x n matrix; larger inputs are
// rejected with CapacityError instead of silently exhausting memory.
inline constexpr int kMaxMatrixPoints = 15000;

enum class MetricKind { euclidean, manhattan };

const char* to_string(MetricKind metric);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad option combinations, unknown names, out-of-range parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (parse failures, empty subsets,
// candidate sets too small to seed K medoids, non-finite attributes).
class DataError : public Error {
 public:
  using Error::Error;
};

// Inputs that exceed an implementation limit (matrix size, oracle budget).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// n points with p numeric attributes, row-major, plus optional integer labels.
struct Dataset {
  int n = 0;
  int p = 0;
  std::vector<double> values;  // n * p
  std::vector<int> labels;     // empty when absent, else size n

  bool has_labels() const { return !labels.empty(); }

  double at(int i, int a) const {
    return values[static_cast<std::size_t>(i) * p + a];
  }

  std::span<const double> point(int i) const {
    return {values.data() + static_cast<std::size_t>(i) * p,
            static_cast<std::size_t>(p)};
  }
};

// Throws DataError unless n >= 1, p >= 1, sizes agree and values are finite.
void validate_dataset(const Dataset& ds);

// Dense symmetric n x n distance matrix with zero diagonal. Entries are
// validated on construction; reads are safe to share across threads.
class DissimilarityMatrix {
 public:
  DissimilarityMatrix() = default;

  // Takes ownership of row-major entries; throws DataError on asymmetry,
  // nonzero diagonal, negative or non-finite entries, CapacityError on size.
  DissimilarityMatrix(int n, std::vector<double> entries,
                      MetricKind metric = MetricKind::euclidean);

  int size() const { return n_; }
  MetricKind metric() const { return metric_; }

  double at(int i, int j) const {
    return d_[static_cast<std::size_t>(i) * n_ + j];
  }

  std::span<const double> row(int i) const {
    return {d_.data() + static_cast<std::size_t>(i) * n_,
            static_cast<std::size_t>(n_)};
  }

 private:
  int n_ = 0;
  MetricKind metric_ = MetricKind::euclidean;
  std::vector<double> d_;
};

DissimilarityMatrix build_dissimilarity(const Dataset& ds,
                                        MetricKind metric = MetricKind::euclidean);

// Copies the rows and columns named by `keep` (ascending, distinct) into a
// fresh matrix; sub-index q maps back to full index keep[q].
DissimilarityMatrix extract_submatrix(const DissimilarityMatrix& m,
                                      std::span<const int> keep);

// K distinct point indices; list order defines cluster ordinals.
struct MedoidSet {
  std::vector<int> indices;

  int k() const { return static_cast<int>(indices.size()); }
};

// owner[i] is the cluster ordinal of point i's nearest medoid.
struct Assignment {
  std::vector<int> owner;
};

struct ClusteringResult {
  MedoidSet medoids;
  Assignment assignment;
  double se = 0.0;
  int iterations = 0;
};

// Sum over points, ascending index, of the distance to the nearest medoid.
// The summation order is part of the contract: equal medoid sets produce
// bit-identical sums. Throws Error on an empty medoid set.
double sum_of_errors(const DissimilarityMatrix& m, const MedoidSet& medoids);

// Nearest-medoid assignment; distance ties go to the lowest cluster ordinal.
Assignment assign(const DissimilarityMatrix& m, const MedoidSet& medoids);

}  // namespace kmed
