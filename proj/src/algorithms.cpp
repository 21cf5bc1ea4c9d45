#include "kmed/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace kmed {

namespace {

void check_k(const DissimilarityMatrix& m, int k, const char* who) {
  if (k < 1 || k > m.size()) {
    throw ConfigError(std::string(who) + ": k must be in [1, " +
                      std::to_string(m.size()) + "], got " + std::to_string(k));
  }
}

void check_initial(const DissimilarityMatrix& m, const MedoidSet& medoids) {
  if (medoids.indices.empty()) throw Error("fkm: empty initial medoid set");
  std::vector<char> seen(m.size(), 0);
  for (int c : medoids.indices) {
    if (c < 0 || c >= m.size()) throw Error("fkm: medoid index out of range");
    if (seen[c]) throw Error("fkm: duplicate medoid index");
    seen[c] = 1;
  }
}

// One medoid-update round: each nonempty cluster moves its medoid to the
// member minimizing the within-cluster distance sum, lowest index on ties;
// empty clusters keep theirs. Already-taken indices are skipped so the set
// stays distinct even when duplicate points make clusters collide.
void update_medoids(const DissimilarityMatrix& m, const Assignment& owners,
                    MedoidSet& medoids) {
  const int n = m.size();
  const int k = medoids.k();
  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < n; ++i) members[owners.owner[i]].push_back(i);

  std::vector<char> taken(n, 0);
  for (int j = 0; j < k; ++j) {
    if (members[j].empty()) taken[medoids.indices[j]] = 1;
  }

  for (int j = 0; j < k; ++j) {
    if (members[j].empty()) continue;
    int best = -1;
    double best_sum = std::numeric_limits<double>::infinity();
    for (int c : members[j]) {
      if (taken[c]) continue;
      const auto row = m.row(c);
      double sum = 0.0;
      for (int y : members[j]) sum += row[y];
      if (sum < best_sum) {
        best_sum = sum;
        best = c;
      }
    }
    if (best < 0) {
      if (!taken[medoids.indices[j]]) {
        best = medoids.indices[j];
      } else {
        for (int i = 0; i < n; ++i) {
          if (!taken[i]) {
            best = i;
            break;
          }
        }
      }
    }
    taken[best] = 1;
    medoids.indices[j] = best;
  }
}

// Uniform draw over the ascending list of indices not currently medoids.
int uniform_non_medoid(const DissimilarityMatrix& m, const MedoidSet& current,
                       RngStream& rng) {
  std::vector<char> used(m.size(), 0);
  for (int c : current.indices) used[c] = 1;
  std::vector<int> pool;
  pool.reserve(m.size() - current.k());
  for (int i = 0; i < m.size(); ++i) {
    if (!used[i]) pool.push_back(i);
  }
  if (pool.empty()) throw Error("seed draw: no non-medoid index left");
  return pool[rng.next_index(static_cast<int>(pool.size()))];
}

int draw_next_center(const DissimilarityMatrix& m, const MedoidSet& current,
                     RngStream& rng) {
  if (auto pick = dsquared_sample(m, current, rng)) return *pick;
  return uniform_non_medoid(m, current, rng);
}

double distance_to_point(const Dataset& ds, int i, const double* q,
                         MetricKind metric) {
  const double* a = ds.values.data() + static_cast<std::size_t>(i) * ds.p;
  double acc = 0.0;
  if (metric == MetricKind::euclidean) {
    for (int t = 0; t < ds.p; ++t) {
      const double diff = a[t] - q[t];
      acc += diff * diff;
    }
    return std::sqrt(acc);
  }
  for (int t = 0; t < ds.p; ++t) acc += std::abs(a[t] - q[t]);
  return acc;
}

}  // namespace

ClusteringResult fkm(const DissimilarityMatrix& m, const MedoidSet& initial,
                     std::vector<double>* se_trace) {
  check_initial(m, initial);

  ClusteringResult out;
  out.medoids = initial;
  out.assignment = assign(m, out.medoids);
  double prev_se = sum_of_errors(m, out.medoids);
  if (se_trace) se_trace->push_back(prev_se);

  while (true) {
    ++out.iterations;
    update_medoids(m, out.assignment, out.medoids);
    out.assignment = assign(m, out.medoids);
    out.se = sum_of_errors(m, out.medoids);
    if (se_trace) se_trace->push_back(out.se);
    if (out.se == prev_se) break;
    prev_se = out.se;
    if (out.iterations >= kFkmIterationCap) break;
  }
  return out;
}

int one_medoid(const DissimilarityMatrix& m) {
  int best = 0;
  double best_sum = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m.size(); ++i) {
    const auto row = m.row(i);
    double sum = 0.0;
    for (int j = 0; j < m.size(); ++j) sum += row[j];
    if (sum < best_sum) {
      best_sum = sum;
      best = i;
    }
  }
  return best;
}

std::optional<int> dsquared_sample(const DissimilarityMatrix& m,
                                   const MedoidSet& current, RngStream& rng) {
  if (current.indices.empty()) throw Error("dsquared_sample: no current medoids");
  const int n = m.size();
  std::vector<double> weight(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto row = m.row(i);
    double best = row[current.indices[0]];
    for (int j = 1; j < current.k(); ++j) {
      const double d = row[current.indices[j]];
      if (d < best) best = d;
    }
    weight[i] = best * best;
    total += weight[i];
  }
  if (total <= 0.0) return std::nullopt;

  const double u = rng.next_double() * total;
  double acc = 0.0;
  int last = -1;
  for (int i = 0; i < n; ++i) {
    if (weight[i] <= 0.0) continue;
    acc += weight[i];
    last = i;
    if (u < acc) return i;
  }
  // Rounding can leave u marginally at or above the accumulated total.
  return last;
}

MedoidSet kpp_seed(const DissimilarityMatrix& m, int k, RngStream& rng) {
  check_k(m, k, "kpp_seed");
  MedoidSet medoids;
  medoids.indices.reserve(k);
  medoids.indices.push_back(rng.next_index(m.size()));
  while (medoids.k() < k) {
    medoids.indices.push_back(draw_next_center(m, medoids, rng));
  }
  return medoids;
}

ClusteringResult kpp(const DissimilarityMatrix& m, int k, RngStream& rng) {
  return fkm(m, kpp_seed(m, k, rng));
}

MedoidSet uniform_medoids(const DissimilarityMatrix& m, int k, RngStream& rng) {
  check_k(m, k, "uniform_medoids");
  std::vector<int> pool(m.size());
  std::iota(pool.begin(), pool.end(), 0);
  MedoidSet medoids;
  medoids.indices.reserve(k);
  for (int i = 0; i < k; ++i) {
    const int j = i + rng.next_index(m.size() - i);
    std::swap(pool[i], pool[j]);
    medoids.indices.push_back(pool[i]);
  }
  return medoids;
}

ClusteringResult fkm_uniform(const DissimilarityMatrix& m, int k,
                             RngStream& rng) {
  return fkm(m, uniform_medoids(m, k, rng));
}

std::vector<int> inckm_candidates(const Dataset& ds,
                                  const DissimilarityMatrix& m, double lambda) {
  validate_dataset(ds);
  if (ds.n != m.size()) {
    throw Error("inckm_candidates: dataset and matrix disagree on n");
  }
  if (!(lambda > 0.0)) {
    throw ConfigError("inckm_candidates: lambda must be positive");
  }
  const int n = ds.n;
  if (n == 1) return {0};

  std::vector<double> mean(ds.p, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < ds.p; ++a) mean[a] += ds.at(i, a);
  }
  for (double& v : mean) v /= n;

  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = distance_to_point(ds, i, mean.data(), m.metric());
    acc += d * d;
  }
  const double sigma = std::sqrt(acc / (n - 1));

  std::vector<int> candidates;
  const double threshold = lambda * sigma;
  for (int i = 0; i < n; ++i) {
    const auto row = m.row(i);
    double sq = 0.0;
    for (int j = 0; j < n; ++j) sq += row[j] * row[j];
    const double sigma_i = std::sqrt(sq / (n - 1));
    if (sigma_i <= threshold) candidates.push_back(i);
  }
  return candidates;
}

namespace {

int first_candidate_medoid(const DissimilarityMatrix& m,
                           const std::vector<int>& candidates) {
  int best = candidates.front();
  double best_sum = std::numeric_limits<double>::infinity();
  for (int c : candidates) {
    const auto row = m.row(c);
    double sum = 0.0;
    for (int j = 0; j < m.size(); ++j) sum += row[j];
    if (sum < best_sum) {
      best_sum = sum;
      best = c;
    }
  }
  return best;
}

// Candidate maximizing the distance to its nearest chosen medoid, skipping
// already-chosen indices; lowest index wins ties.
int farthest_candidate(const DissimilarityMatrix& m,
                       const std::vector<int>& candidates,
                       const MedoidSet& chosen) {
  std::vector<char> used(m.size(), 0);
  for (int c : chosen.indices) used[c] = 1;
  int best = -1;
  double best_d = -1.0;
  for (int c : candidates) {
    if (used[c]) continue;
    const auto row = m.row(c);
    double nearest = row[chosen.indices[0]];
    for (int j = 1; j < chosen.k(); ++j) {
      const double d = row[chosen.indices[j]];
      if (d < nearest) nearest = d;
    }
    if (nearest > best_d) {
      best_d = nearest;
      best = c;
    }
  }
  if (best < 0) throw DataError("inckm: candidate set exhausted");
  return best;
}

void check_candidate_count(const std::vector<int>& candidates, int k,
                           double lambda) {
  if (static_cast<int>(candidates.size()) < k) {
    throw DataError("inckm: candidate set too small (" +
                    std::to_string(candidates.size()) + " < k = " +
                    std::to_string(k) + ") at lambda = " +
                    std::to_string(lambda));
  }
}

}  // namespace

MedoidSet inckm_seed(const Dataset& ds, const DissimilarityMatrix& m, int k,
                     const InckmParams& params) {
  check_k(m, k, "inckm_seed");
  const auto candidates = inckm_candidates(ds, m, params.lambda);
  check_candidate_count(candidates, k, params.lambda);

  MedoidSet medoids;
  medoids.indices.reserve(k);
  medoids.indices.push_back(first_candidate_medoid(m, candidates));
  while (medoids.k() < k) {
    medoids.indices.push_back(farthest_candidate(m, candidates, medoids));
  }
  return medoids;
}

ClusteringResult inckm(const Dataset& ds, const DissimilarityMatrix& m, int k,
                       const InckmParams& params) {
  check_k(m, k, "inckm");
  const auto candidates = inckm_candidates(ds, m, params.lambda);
  check_candidate_count(candidates, k, params.lambda);

  MedoidSet medoids;
  medoids.indices.reserve(k);
  medoids.indices.push_back(first_candidate_medoid(m, candidates));

  if (k == 1) return fkm(m, medoids);

  int total_iterations = 0;
  ClusteringResult result;

  for (int stage = 2; stage <= k; ++stage) {
    medoids.indices.push_back(farthest_candidate(m, candidates, medoids));
    if (params.refine_each_stage || stage == k) {
      result = fkm(m, medoids);
      medoids = result.medoids;
      total_iterations += result.iterations;
    }
  }
  result.iterations = total_iterations;
  return result;
}

ClusteringResult inckpp(const DissimilarityMatrix& m, int k, RngStream& rng) {
  check_k(m, k, "inckpp");
  MedoidSet medoids;
  medoids.indices.reserve(k);
  medoids.indices.push_back(one_medoid(m));

  if (k == 1) {
    ClusteringResult out;
    out.medoids = medoids;
    out.assignment = assign(m, medoids);
    out.se = sum_of_errors(m, medoids);
    out.iterations = 0;
    return out;
  }

  int total_iterations = 0;
  ClusteringResult result;
  for (int stage = 2; stage <= k; ++stage) {
    medoids.indices.push_back(draw_next_center(m, medoids, rng));
    result = fkm(m, medoids);
    medoids = result.medoids;
    total_iterations += result.iterations;
  }
  result.iterations = total_iterations;
  return result;
}

std::vector<int> sample_indices(int n, int min_size, double percent,
                                RngStream& rng) {
  if (n < 1) throw ConfigError("sample_indices: n must be positive");
  if (!(percent > 0.0) || percent > 100.0) {
    throw ConfigError("sample_indices: percent must be in (0, 100]");
  }
  if (min_size < 1 || min_size > n) {
    throw ConfigError("sample_indices: min_size must be in [1, n]");
  }
  const auto target = static_cast<int>(std::llround(n * percent / 100.0));
  const int size = std::clamp(target, min_size, n);

  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  if (size >= n) return pool;  // identity; deliberately consumes no draws

  for (int i = 0; i < size; ++i) {
    const int j = i + rng.next_index(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(size);
  std::sort(pool.begin(), pool.end());
  return pool;
}

namespace {

template <typename PreSearch>
ClusteringResult two_phase(const DissimilarityMatrix& m, int k, double percent,
                           RngStream& rng, PreSearch pre_search) {
  check_k(m, k, "sampled pre-search");
  const auto keep = sample_indices(m.size(), k, percent, rng);
  const auto sub = extract_submatrix(m, keep);
  const ClusteringResult pre = pre_search(sub, rng);

  MedoidSet mapped;
  mapped.indices.reserve(k);
  for (int q : pre.medoids.indices) mapped.indices.push_back(keep[q]);

  ClusteringResult out = fkm(m, mapped);
  out.iterations += pre.iterations;
  return out;
}

}  // namespace

ClusteringResult inckpp_sample(const DissimilarityMatrix& m, int k,
                               double percent, RngStream& rng) {
  return two_phase(m, k, percent, rng,
                   [k](const DissimilarityMatrix& sub, RngStream& r) {
                     return inckpp(sub, k, r);
                   });
}

ClusteringResult kpp_sample(const DissimilarityMatrix& m, int k,
                            double percent, RngStream& rng) {
  return two_phase(m, k, percent, rng,
                   [k](const DissimilarityMatrix& sub, RngStream& r) {
                     return kpp(sub, k, r);
                   });
}

ClusteringResult fkm_sample(const DissimilarityMatrix& m, int k,
                            double percent, RngStream& rng) {
  return two_phase(m, k, percent, rng,
                   [k](const DissimilarityMatrix& sub, RngStream& r) {
                     return fkm_uniform(sub, k, r);
                   });
}

}  // namespace kmed
