#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kmed/algorithms.hpp"
#include "kmed/core.hpp"

namespace kmed::bench {

enum class Algo {
  fkm,
  kpp,
  inckm,
  inckpp,
  fkm_sample,
  kpp_sample,
  inckpp_sample,
};

const char* to_string(Algo algo);
std::optional<Algo> parse_algo(std::string_view name);
bool is_sampled(Algo algo);

// The candidate-width sweep 1.5, 1.6, ..., 2.5.
std::vector<double> default_lambda_sweep();

// One benchmark run keyed by its seed; deterministic algorithms ignore it.
using Runner = std::function<ClusteringResult(std::uint64_t seed)>;

// Binds an algorithm over a prepared dataset/matrix pair. lambda applies to
// inckm (must be > 0 there), percent to the sampled variants.
Runner make_runner(Algo algo, const Dataset& ds, const DissimilarityMatrix& m,
                   int k, double lambda, double percent);

// Aggregate criteria of one budgeted batch: best and mean SE, mean update
// rounds, and how many runs completed.
struct Criteria {
  double min_se = 0.0;
  double aver_se = 0.0;
  double iter_mean = 0.0;
  double repeats = 0.0;
  double budget_seconds = 0.0;
  double wall_seconds = 0.0;
};

// Total wall seconds for runs with seeds root_seed + 0 .. root_seed + n - 1;
// zero runs take zero seconds.
double measure_budget(const Runner& run, std::uint64_t root_seed, int runs);

// Launches runs with seeds root_seed, root_seed + 1, ... while the elapsed
// time is below budget_seconds; the first run always launches and a run once
// launched is never cut short. fixed_repeats > 0 replaces the time gate with
// an exact run count, making the criteria deterministic.
Criteria run_budgeted(const Runner& run, std::uint64_t root_seed,
                      double budget_seconds, int fixed_repeats = 0);

// Which algorithm's cost sets the shared time budget: one deterministic
// inckm run at its best sweep lambda, or budget_runs runs of inckpp_sample.
enum class BudgetRef { inckm, inckpp_sample };

struct RowSpec {
  Algo algo = Algo::fkm;
  double lambda = 0.0;    // inckm rows; 0 sweeps default_lambda_sweep()
  double percent = 10.0;  // sampled rows
};

struct BenchConfig {
  std::string dataset_id = "data";
  int k = 2;
  std::uint64_t root_seed = 0;
  int replications = 1;
  BudgetRef budget_ref = BudgetRef::inckpp_sample;
  int budget_runs = 3;            // N for BudgetRef::inckpp_sample
  double budget_percent = 10.0;   // p of the reference inckpp_sample
  int fixed_repeats = 0;          // > 0 switches to the deterministic mode
  int jobs = 1;                   // worker threads across rows
};

struct ReportRow {
  std::string dataset;
  std::string algorithm;
  std::string params;
  int k = 0;
  std::optional<double> percent;
  std::optional<int> budget_runs;
  std::optional<double> lambda;
  Criteria criteria;
};

struct Report {
  std::string note;  // emitted as a leading '#' comment line
  std::vector<ReportRow> rows;
};

// Runs every row under the reference budget, replicated over root seeds
// root_seed + rep * 1e6, and averages the four criteria across replications
// (so min_se is a mean of per-replication minima, as the note records).
Report compare(const Dataset& ds, const DissimilarityMatrix& m,
               const BenchConfig& config, std::span<const RowSpec> rows);

// CSV with a '#' note line and one header row; floats carry 6 significant
// digits. The two wall-time columns are the only non-deterministic fields
// under fixed repeats; wall_columns = false omits them.
std::string to_csv(const Report& report, bool wall_columns = true);

}  // namespace kmed::bench
