#include "kmed/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

namespace kmed::bench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

const char* to_string(Algo algo) {
  switch (algo) {
    case Algo::fkm: return "fkm";
    case Algo::kpp: return "kpp";
    case Algo::inckm: return "inckm";
    case Algo::inckpp: return "inckpp";
    case Algo::fkm_sample: return "fkm_sample";
    case Algo::kpp_sample: return "kpp_sample";
    case Algo::inckpp_sample: return "inckpp_sample";
  }
  return "?";
}

std::optional<Algo> parse_algo(std::string_view name) {
  for (Algo a : {Algo::fkm, Algo::kpp, Algo::inckm, Algo::inckpp,
                 Algo::fkm_sample, Algo::kpp_sample, Algo::inckpp_sample}) {
    if (name == to_string(a)) return a;
  }
  return std::nullopt;
}

bool is_sampled(Algo algo) {
  return algo == Algo::fkm_sample || algo == Algo::kpp_sample ||
         algo == Algo::inckpp_sample;
}

std::vector<double> default_lambda_sweep() {
  std::vector<double> sweep;
  for (int i = 0; i <= 10; ++i) sweep.push_back(1.5 + 0.1 * i);
  return sweep;
}

Runner make_runner(Algo algo, const Dataset& ds, const DissimilarityMatrix& m,
                   int k, double lambda, double percent) {
  const Dataset* dp = &ds;
  const DissimilarityMatrix* mp = &m;
  switch (algo) {
    case Algo::fkm:
      return [mp, k](std::uint64_t seed) {
        RngStream rng(seed);
        return fkm_uniform(*mp, k, rng);
      };
    case Algo::kpp:
      return [mp, k](std::uint64_t seed) {
        RngStream rng(seed);
        return kpp(*mp, k, rng);
      };
    case Algo::inckm:
      if (!(lambda > 0.0)) {
        throw ConfigError("bench: inckm runner needs a positive lambda");
      }
      return [dp, mp, k, lambda](std::uint64_t) {
        return inckm(*dp, *mp, k, InckmParams{lambda, true});
      };
    case Algo::inckpp:
      return [mp, k](std::uint64_t seed) {
        RngStream rng(seed);
        return inckpp(*mp, k, rng);
      };
    case Algo::fkm_sample:
      return [mp, k, percent](std::uint64_t seed) {
        RngStream rng(seed);
        return fkm_sample(*mp, k, percent, rng);
      };
    case Algo::kpp_sample:
      return [mp, k, percent](std::uint64_t seed) {
        RngStream rng(seed);
        return kpp_sample(*mp, k, percent, rng);
      };
    case Algo::inckpp_sample:
      return [mp, k, percent](std::uint64_t seed) {
        RngStream rng(seed);
        return inckpp_sample(*mp, k, percent, rng);
      };
  }
  throw ConfigError("bench: unknown algorithm");
}

double measure_budget(const Runner& run, std::uint64_t root_seed, int runs) {
  if (runs <= 0) return 0.0;
  const auto start = Clock::now();
  for (int i = 0; i < runs; ++i) {
    run(root_seed + static_cast<std::uint64_t>(i));
  }
  return seconds_since(start);
}

Criteria run_budgeted(const Runner& run, std::uint64_t root_seed,
                      double budget_seconds, int fixed_repeats) {
  const auto start = Clock::now();
  double min_se = std::numeric_limits<double>::infinity();
  double se_sum = 0.0;
  double iter_sum = 0.0;
  std::uint64_t done = 0;

  while (true) {
    const auto result = run(root_seed + done);
    ++done;
    min_se = std::min(min_se, result.se);
    se_sum += result.se;
    iter_sum += result.iterations;
    if (fixed_repeats > 0) {
      if (done >= static_cast<std::uint64_t>(fixed_repeats)) break;
    } else if (seconds_since(start) >= budget_seconds) {
      break;
    }
  }

  Criteria c;
  c.min_se = min_se;
  c.aver_se = se_sum / static_cast<double>(done);
  c.iter_mean = iter_sum / static_cast<double>(done);
  c.repeats = static_cast<double>(done);
  c.budget_seconds = fixed_repeats > 0 ? 0.0 : budget_seconds;
  c.wall_seconds = seconds_since(start);
  return c;
}

namespace {

struct SweepPick {
  double lambda = 0.0;
  double se = std::numeric_limits<double>::infinity();
};

// Best-SE lambda over the default sweep; infeasible widths (candidate set
// smaller than k) are skipped, and only an entirely infeasible sweep throws.
SweepPick sweep_inckm_lambda(const Dataset& ds, const DissimilarityMatrix& m,
                             int k) {
  SweepPick pick;
  bool any = false;
  std::string last_error;
  for (double lambda : default_lambda_sweep()) {
    try {
      const auto result = inckm(ds, m, k, InckmParams{lambda, true});
      if (!any || result.se < pick.se) {
        pick.lambda = lambda;
        pick.se = result.se;
      }
      any = true;
    } catch (const DataError& e) {
      last_error = e.what();
    }
  }
  if (!any) {
    throw DataError("bench: no feasible lambda in the sweep (" + last_error +
                    ")");
  }
  return pick;
}

void accumulate(Criteria& into, const Criteria& c) {
  into.min_se += c.min_se;
  into.aver_se += c.aver_se;
  into.iter_mean += c.iter_mean;
  into.repeats += c.repeats;
  into.budget_seconds += c.budget_seconds;
  into.wall_seconds += c.wall_seconds;
}

}  // namespace

Report compare(const Dataset& ds, const DissimilarityMatrix& m,
               const BenchConfig& config, std::span<const RowSpec> rows) {
  if (rows.empty()) throw ConfigError("bench: no rows to compare");
  if (config.replications < 1) {
    throw ConfigError("bench: replications must be >= 1");
  }
  if (config.jobs < 1) throw ConfigError("bench: jobs must be >= 1");
  if (config.budget_ref == BudgetRef::inckpp_sample && config.budget_runs < 1) {
    throw ConfigError("bench: budget runs (N) must be >= 1");
  }

  // Resolve the sweep once; inckm is deterministic so replications share it.
  double sweep_lambda = 0.0;
  const bool wants_sweep =
      config.budget_ref == BudgetRef::inckm ||
      std::any_of(rows.begin(), rows.end(), [](const RowSpec& r) {
        return r.algo == Algo::inckm && !(r.lambda > 0.0);
      });
  if (wants_sweep) sweep_lambda = sweep_inckm_lambda(ds, m, config.k).lambda;

  const auto row_lambda = [&](const RowSpec& r) {
    return r.lambda > 0.0 ? r.lambda : sweep_lambda;
  };

  std::vector<Runner> runners;
  runners.reserve(rows.size());
  for (const auto& row : rows) {
    runners.push_back(make_runner(row.algo, ds, m, config.k, row_lambda(row),
                                  row.percent));
  }

  std::vector<Criteria> totals(rows.size());
  for (int rep = 0; rep < config.replications; ++rep) {
    const std::uint64_t root =
        config.root_seed + static_cast<std::uint64_t>(rep) * 1'000'000ULL;

    double budget = 0.0;
    if (config.fixed_repeats == 0) {
      if (config.budget_ref == BudgetRef::inckm) {
        const Runner reference =
            make_runner(Algo::inckm, ds, m, config.k, sweep_lambda, 0.0);
        budget = measure_budget(reference, root, 1);
      } else {
        const Runner reference =
            make_runner(Algo::inckpp_sample, ds, m, config.k, 0.0,
                        config.budget_percent);
        budget = measure_budget(reference, root, config.budget_runs);
      }
    }

    if (config.jobs == 1) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        accumulate(totals[i], run_budgeted(runners[i], root, budget,
                                           config.fixed_repeats));
      }
    } else {
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= rows.size()) return;
          accumulate(totals[i], run_budgeted(runners[i], root, budget,
                                             config.fixed_repeats));
        }
      };
      const auto thread_count = std::min<std::size_t>(
          static_cast<std::size_t>(config.jobs), rows.size());
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
  }

  Report report;
  report.note =
      "criteria are means over " + std::to_string(config.replications) +
      " replications; min_se is a mean of per-replication minima";
  const double r = config.replications;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ReportRow row;
    row.dataset = config.dataset_id;
    row.algorithm = to_string(rows[i].algo);
    row.k = config.k;
    std::string params;
    if (rows[i].algo == Algo::inckm) {
      row.lambda = row_lambda(rows[i]);
      params = "lambda=" + format_g6(*row.lambda);
    }
    if (is_sampled(rows[i].algo)) {
      row.percent = rows[i].percent;
      params = "p=" + format_g6(*row.percent);
    }
    if (config.budget_ref == BudgetRef::inckpp_sample) {
      row.budget_runs = config.budget_runs;
      params += params.empty() ? "N=" : ";N=";
      params += std::to_string(config.budget_runs);
    }
    row.params = params;
    row.criteria = {totals[i].min_se / r,         totals[i].aver_se / r,
                    totals[i].iter_mean / r,      totals[i].repeats / r,
                    totals[i].budget_seconds / r, totals[i].wall_seconds / r};
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string to_csv(const Report& report, bool wall_columns) {
  std::ostringstream out;
  out << "# " << report.note << "\n";
  out << "dataset,algorithm,params,K,p,N,lambda,min_se,aver_se,iter_mean,repeats";
  if (wall_columns) out << ",budget_s,wall_s";
  out << "\n";
  for (const auto& row : report.rows) {
    out << row.dataset << ',' << row.algorithm << ',' << row.params << ','
        << row.k << ',';
    if (row.percent) out << format_g6(*row.percent);
    out << ',';
    if (row.budget_runs) out << *row.budget_runs;
    out << ',';
    if (row.lambda) out << format_g6(*row.lambda);
    out << ',' << format_g6(row.criteria.min_se) << ','
        << format_g6(row.criteria.aver_se) << ','
        << format_g6(row.criteria.iter_mean) << ','
        << format_g6(row.criteria.repeats);
    if (wall_columns) {
      out << ',' << format_g6(row.criteria.budget_seconds) << ','
          << format_g6(row.criteria.wall_seconds);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace kmed::bench
