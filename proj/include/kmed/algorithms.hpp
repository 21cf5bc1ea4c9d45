#pragma once

#include <optional>
#include <vector>

#include "kmed/core.hpp"
#include "kmed/rng.hpp"

namespace kmed {

// Safety cap on medoid-update rounds; convergence is expected well before it.
inline constexpr int kFkmIterationCap = 500;

// Alternating medoid update and nearest-medoid reassignment from the given
// initial medoids, stopping when the sum of errors is exactly equal to the
// previous round's. iterations counts medoid-update rounds. An empty cluster
// keeps its medoid. If se_trace is non-null it receives the SE value observed
// after each reassignment, final (repeated) value included.
ClusteringResult fkm(const DissimilarityMatrix& m, const MedoidSet& initial,
                     std::vector<double>* se_trace = nullptr);

// Index minimizing the total distance to all points; ties to the lowest index.
int one_medoid(const DissimilarityMatrix& m);

// Draws one non-medoid index with probability proportional to the squared
// distance to its nearest current medoid. Returns nullopt when every point's
// distance is zero (degenerate distribution); callers fall back to a uniform
// draw over non-medoid indices.
std::optional<int> dsquared_sample(const DissimilarityMatrix& m,
                                   const MedoidSet& current, RngStream& rng);

// k-means++ seeding: first index uniform, the rest by dsquared_sample.
MedoidSet kpp_seed(const DissimilarityMatrix& m, int k, RngStream& rng);

// kpp_seed followed by fkm.
ClusteringResult kpp(const DissimilarityMatrix& m, int k, RngStream& rng);

// K distinct indices drawn uniformly; the initializer of the plain fkm
// baseline.
MedoidSet uniform_medoids(const DissimilarityMatrix& m, int k, RngStream& rng);

// fkm from uniform_medoids.
ClusteringResult fkm_uniform(const DissimilarityMatrix& m, int k,
                             RngStream& rng);

struct InckmParams {
  double lambda = 2.0;  // candidate-set width multiplier, > 0
  // When true each incremental stage refines with fkm before the next seed is
  // chosen; when false the K seeds are picked first and fkm runs once.
  bool refine_each_stage = true;
};

// Indices whose per-point deviation sigma_i = sqrt(sum_j d(i,j)^2 / (n-1))
// is at most lambda times the dataset deviation sigma measured against the
// attribute mean, ascending. The mean-point distances use m's metric.
std::vector<int> inckm_candidates(const Dataset& ds,
                                  const DissimilarityMatrix& m, double lambda);

// Deterministic incremental seeding over the candidate set: the first seed
// minimizes the total distance to all points among candidates, each further
// seed maximizes the distance to its nearest chosen seed. Throws DataError
// when the candidate set holds fewer than k indices.
MedoidSet inckm_seed(const Dataset& ds, const DissimilarityMatrix& m, int k,
                     const InckmParams& params);

// Incremental k-medoids: grows the medoid set one seed at a time over the
// candidate set, refining with fkm per stage (or once at the end, per
// params.refine_each_stage). iterations totals fkm update rounds across all
// stages. Deterministic.
ClusteringResult inckm(const Dataset& ds, const DissimilarityMatrix& m, int k,
                       const InckmParams& params);

// Incremental k-means++-seeded k-medoids: starts from the total-distance
// minimizer, then alternates one squared-distance-weighted draw with a full
// fkm refinement until K medoids exist. iterations totals fkm update rounds
// across all stages; K = 1 runs no fkm stage.
ClusteringResult inckpp(const DissimilarityMatrix& m, int k, RngStream& rng);

// Uniform sample without replacement of size max(min_size, round(n *
// percent / 100)), ascending. Consumes no draws when the sample is the whole
// index range, so a shared stream continues exactly as if unsampled.
std::vector<int> sample_indices(int n, int min_size, double percent,
                                RngStream& rng);

// Two-phase variants: run the pre-search on a uniform percent-sample's
// sub-matrix, map the medoids back to full indices, then refine them with fkm
// on the full matrix. iterations totals both phases.
ClusteringResult inckpp_sample(const DissimilarityMatrix& m, int k,
                               double percent, RngStream& rng);
ClusteringResult kpp_sample(const DissimilarityMatrix& m, int k,
                            double percent, RngStream& rng);
ClusteringResult fkm_sample(const DissimilarityMatrix& m, int k,
                            double percent, RngStream& rng);

}  // namespace kmed
