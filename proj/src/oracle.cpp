#include "kmed/oracle.hpp"

#include <limits>
#include <numeric>
#include <string>

namespace kmed {

namespace {

// C(n, k) capped at just past the enumeration budget to avoid overflow.
std::uint64_t subset_count(int n, int k, std::uint64_t cap) {
  std::uint64_t count = 1;
  for (int i = 1; i <= k; ++i) {
    count = count * static_cast<std::uint64_t>(n - k + i) /
            static_cast<std::uint64_t>(i);
    if (count > cap) return cap + 1;
  }
  return count;
}

}  // namespace

OracleResult exhaustive_kmedoids(const DissimilarityMatrix& m, int k) {
  const int n = m.size();
  if (k < 1 || k > n) {
    throw ConfigError("oracle: k must be in [1, " + std::to_string(n) +
                      "], got " + std::to_string(k));
  }
  if (subset_count(n, k, kOracleSubsetBudget) > kOracleSubsetBudget) {
    throw CapacityError("oracle: C(" + std::to_string(n) + ", " +
                        std::to_string(k) + ") exceeds the " +
                        std::to_string(kOracleSubsetBudget) +
                        "-subset budget");
  }

  OracleResult out;
  out.best_se = std::numeric_limits<double>::infinity();

  MedoidSet subset;
  subset.indices.resize(k);
  std::iota(subset.indices.begin(), subset.indices.end(), 0);

  while (true) {
    ++out.enumerated;
    const double se = sum_of_errors(m, subset);
    if (se < out.best_se) {
      out.best_se = se;
      out.best_medoids.clear();
      out.best_medoids.push_back(subset);
    } else if (se == out.best_se) {
      out.best_medoids.push_back(subset);
    }

    // Next subset in lexicographic order.
    int pos = k - 1;
    while (pos >= 0 && subset.indices[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++subset.indices[pos];
    for (int q = pos + 1; q < k; ++q) {
      subset.indices[q] = subset.indices[q - 1] + 1;
    }
  }
  return out;
}

}  // namespace kmed
