#pragma once

#include <cstdint>
#include <vector>

#include "kmed/core.hpp"

namespace kmed {

// Largest subset count exhaustive_kmedoids will enumerate.
inline constexpr std::uint64_t kOracleSubsetBudget = 10'000'000;

struct OracleResult {
  double best_se = 0.0;
  // Every K-subset attaining best_se exactly, in lexicographic order,
  // each with ascending indices.
  std::vector<MedoidSet> best_medoids;
  std::uint64_t enumerated = 0;
};

// Exact minimizer of sum_of_errors over all C(n, K) medoid subsets. Throws
// CapacityError when C(n, K) exceeds kOracleSubsetBudget, ConfigError when
// k is outside [1, n].
OracleResult exhaustive_kmedoids(const DissimilarityMatrix& m, int k);

}  // namespace kmed
