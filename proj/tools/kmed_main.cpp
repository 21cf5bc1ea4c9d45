#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kmed/algorithms.hpp"
#include "kmed/bench.hpp"
#include "kmed/core.hpp"
#include "kmed/io.hpp"
#include "kmed/oracle.hpp"
#include "kmed/rng.hpp"

namespace {

using namespace kmed;

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct DataOptions {
  std::string data;
  std::string manifest;
  std::string id;
  std::string labels = "none";
  std::string metric = "euclidean";
  bool no_normalize = false;
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
  cmd->add_option("--data", o.data, "dataset file (one point per line)");
  cmd->add_option("--manifest", o.manifest, "manifest file (id path n p classes)");
  cmd->add_option("--id", o.id, "dataset id within the manifest");
  cmd->add_option("--labels", o.labels, "label column in --data files")
      ->check(CLI::IsMember({"none", "first", "last"}));
  cmd->add_option("--metric", o.metric, "dissimilarity metric")
      ->check(CLI::IsMember({"euclidean", "manhattan"}));
  cmd->add_flag("--no-normalize", o.no_normalize,
                "skip per-attribute min-max normalization");
}

io::LabelColumn parse_labels(const std::string& name) {
  if (name == "first") return io::LabelColumn::first;
  if (name == "last") return io::LabelColumn::last;
  return io::LabelColumn::none;
}

MetricKind parse_metric(const std::string& name) {
  return name == "manhattan" ? MetricKind::manhattan : MetricKind::euclidean;
}

Dataset load_data(const DataOptions& o) {
  const bool from_file = !o.data.empty();
  const bool from_manifest = !o.manifest.empty();
  if (from_file == from_manifest) {
    throw ConfigError("give exactly one of --data or --manifest");
  }
  Dataset ds;
  if (from_file) {
    ds = io::load_dataset(o.data, parse_labels(o.labels));
  } else {
    if (o.id.empty()) throw ConfigError("--manifest requires --id");
    ds = io::load_by_id(io::load_manifest(o.manifest), o.id);
  }
  if (!o.no_normalize) ds = io::normalize_min_max(ds);
  return ds;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write output file " + path);
  out << text;
  if (!out.flush()) throw DataError("failed writing " + path);
}

int run_cluster(const DataOptions& data_options, const std::string& algo_name,
                int k, std::optional<std::uint64_t> seed,
                std::optional<double> lambda, std::optional<double> percent,
                bool single_refine, const std::string& out_path) {
  const auto algo = bench::parse_algo(algo_name);
  if (!algo) throw ConfigError("unknown algorithm '" + algo_name + "'");
  if (lambda && *algo != bench::Algo::inckm) {
    throw ConfigError("--lambda applies only to inckm");
  }
  if (percent && !bench::is_sampled(*algo)) {
    throw ConfigError("--p applies only to the sampled variants");
  }
  if (single_refine && *algo != bench::Algo::inckm) {
    throw ConfigError("--single-refine applies only to inckm");
  }
  const bool stochastic = *algo != bench::Algo::inckm;
  if (stochastic && !seed) {
    throw ConfigError("--seed is required for randomized algorithms");
  }

  const Dataset ds = load_data(data_options);
  const auto m = build_dissimilarity(ds, parse_metric(data_options.metric));

  ClusteringResult result;
  RngStream rng(seed.value_or(0));
  const double p = percent.value_or(10.0);
  switch (*algo) {
    case bench::Algo::fkm: result = fkm_uniform(m, k, rng); break;
    case bench::Algo::kpp: result = kpp(m, k, rng); break;
    case bench::Algo::inckm:
      result = inckm(ds, m, k, InckmParams{lambda.value_or(2.0), !single_refine});
      break;
    case bench::Algo::inckpp: result = inckpp(m, k, rng); break;
    case bench::Algo::fkm_sample: result = fkm_sample(m, k, p, rng); break;
    case bench::Algo::kpp_sample: result = kpp_sample(m, k, p, rng); break;
    case bench::Algo::inckpp_sample: result = inckpp_sample(m, k, p, rng); break;
  }

  std::ostringstream text;
  text << "se," << format_g17(result.se) << "\n";
  text << "iterations," << result.iterations << "\n";
  text << "medoids";
  for (int c : result.medoids.indices) text << ',' << c;
  text << "\npoint,owner\n";
  for (std::size_t i = 0; i < result.assignment.owner.size(); ++i) {
    text << i << ',' << result.assignment.owner[i] << "\n";
  }
  write_text(out_path, text.str());
  std::cerr << "se=" << format_g17(result.se)
            << " iterations=" << result.iterations << "\n";
  return 0;
}

int run_bench(const DataOptions& data_options, const std::string& algos_csv,
              int k, std::uint64_t seed, const std::string& budget_ref,
              int budget_runs, double percent, std::optional<double> lambda,
              int replications, int fixed_repeats, int jobs,
              const std::string& out_path) {
  std::vector<bench::RowSpec> rows;
  std::istringstream names(algos_csv);
  std::string name;
  while (std::getline(names, name, ',')) {
    const auto algo = bench::parse_algo(name);
    if (!algo) throw ConfigError("unknown algorithm '" + name + "'");
    bench::RowSpec row;
    row.algo = *algo;
    row.percent = percent;
    if (*algo == bench::Algo::inckm && lambda) row.lambda = *lambda;
    rows.push_back(row);
  }
  if (rows.empty()) throw ConfigError("--algos names no algorithms");

  const Dataset ds = load_data(data_options);
  const auto m = build_dissimilarity(ds, parse_metric(data_options.metric));

  bench::BenchConfig config;
  config.dataset_id = !data_options.id.empty()
                          ? data_options.id
                          : std::filesystem::path(data_options.data)
                                .stem()
                                .string();
  config.k = k;
  config.root_seed = seed;
  config.replications = replications;
  config.budget_ref = budget_ref == "inckm" ? bench::BudgetRef::inckm
                                            : bench::BudgetRef::inckpp_sample;
  config.budget_runs = budget_runs;
  config.budget_percent = percent;
  config.fixed_repeats = fixed_repeats;
  config.jobs = jobs;

  const auto report = bench::compare(ds, m, config, rows);
  write_text(out_path, bench::to_csv(report));
  std::cerr << report.rows.size() << " rows compared\n";
  return 0;
}

int run_oracle(const DataOptions& data_options, int k,
               const std::string& out_path) {
  const Dataset ds = load_data(data_options);
  const auto m = build_dissimilarity(ds, parse_metric(data_options.metric));
  const auto oracle = exhaustive_kmedoids(m, k);

  std::ostringstream text;
  text << "best_se," << format_g17(oracle.best_se) << "\n";
  text << "enumerated," << oracle.enumerated << "\n";
  for (const auto& medoids : oracle.best_medoids) {
    text << "optimum";
    for (int c : medoids.indices) text << ',' << c;
    text << "\n";
  }
  write_text(out_path, text.str());
  return 0;
}

int run_gen(const std::string& clusters, std::uint64_t seed,
            const std::string& out_path) {
  const auto ds = io::generate(io::parse_generator_spec(clusters, seed));
  io::write_dataset(ds, out_path);
  std::cerr << ds.n << " points, " << ds.p << " attributes\n";
  return 0;
}

int run_seed_cmd(const DataOptions& data_options, const std::string& algo_name,
                 int k, std::optional<std::uint64_t> seed,
                 std::optional<double> lambda, const std::string& out_path) {
  const Dataset ds = load_data(data_options);
  const auto m = build_dissimilarity(ds, parse_metric(data_options.metric));

  MedoidSet medoids;
  if (algo_name == "kpp") {
    if (!seed) throw ConfigError("--seed is required for kpp seeding");
    RngStream rng(*seed);
    medoids = kpp_seed(m, k, rng);
  } else if (algo_name == "inckm") {
    medoids = inckm_seed(ds, m, k, InckmParams{lambda.value_or(2.0), true});
  } else if (algo_name == "one_medoid") {
    medoids.indices.push_back(one_medoid(m));
  } else {
    throw ConfigError("unknown seeding algorithm '" + algo_name + "'");
  }

  std::ostringstream text;
  text << "ordinal,index\n";
  for (int j = 0; j < medoids.k(); ++j) {
    text << j << ',' << medoids.indices[j] << "\n";
  }
  write_text(out_path, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-medoids clustering and benchmark toolkit"};
  app.require_subcommand(1);

  DataOptions data_options;
  std::string algo_name;
  int k = 2;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::optional<double> percent;
  bool single_refine = false;
  std::string out_path;

  auto* cluster = app.add_subcommand("cluster", "run one clustering algorithm");
  add_data_options(cluster, data_options);
  cluster->add_option("--algo", algo_name, "algorithm")->required();
  cluster->add_option("--k", k, "number of medoids")->required();
  cluster->add_option("--seed", seed, "random seed");
  cluster->add_option("--lambda", lambda, "inckm candidate width");
  cluster->add_option("--p", percent, "sample percentage");
  cluster->add_flag("--single-refine", single_refine,
                    "inckm: refine once at the end instead of per stage");
  cluster->add_option("--out", out_path, "result file (default stdout)");

  std::string algos_csv;
  std::string budget_ref = "inckpp_sample";
  int budget_runs = 3;
  double bench_percent = 10.0;
  int replications = 1;
  int fixed_repeats = 0;
  int jobs = 1;

  auto* bench_cmd = app.add_subcommand("bench", "budget-matched comparison");
  add_data_options(bench_cmd, data_options);
  bench_cmd->add_option("--algos", algos_csv, "comma-separated algorithms")
      ->required();
  bench_cmd->add_option("--k", k, "number of medoids")->required();
  bench_cmd->add_option("--seed", seed, "root random seed")->required();
  bench_cmd->add_option("--budget-ref", budget_ref, "budget reference")
      ->check(CLI::IsMember({"inckm", "inckpp_sample"}));
  bench_cmd->add_option("--N", budget_runs, "reference inckpp_sample runs");
  bench_cmd->add_option("--p", bench_percent, "sample percentage");
  bench_cmd->add_option("--lambda", lambda, "fixed inckm lambda (skips sweep)");
  bench_cmd->add_option("--replications", replications, "root-seed replications");
  bench_cmd->add_option("--fixed-repeats", fixed_repeats,
                        "run each row exactly this often (deterministic mode)");
  bench_cmd->add_option("--jobs", jobs, "worker threads across rows");
  bench_cmd->add_option("--out", out_path, "report file (default stdout)");

  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive optimum");
  add_data_options(oracle_cmd, data_options);
  oracle_cmd->add_option("--k", k, "number of medoids")->required();
  oracle_cmd->add_option("--out", out_path, "result file (default stdout)");

  std::string clusters;
  auto* gen = app.add_subcommand("gen", "generate Gaussian clusters");
  gen->add_option("--clusters", clusters,
                  "semicolon-separated center:stddev:count groups")
      ->required();
  gen->add_option("--seed", seed, "generator seed")->required();
  gen->add_option("--out", out_path, "dataset file")->required();

  auto* seed_cmd = app.add_subcommand("seed", "seeding only, no refinement");
  add_data_options(seed_cmd, data_options);
  seed_cmd->add_option("--algo", algo_name, "kpp, inckm or one_medoid")
      ->required();
  seed_cmd->add_option("--k", k, "number of medoids")->required();
  seed_cmd->add_option("--seed", seed, "random seed");
  seed_cmd->add_option("--lambda", lambda, "inckm candidate width");
  seed_cmd->add_option("--out", out_path, "seed list file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(cluster)) {
      return run_cluster(data_options, algo_name, k, seed, lambda, percent,
                         single_refine, out_path);
    }
    if (app.got_subcommand(bench_cmd)) {
      if (!seed) throw ConfigError("--seed is required");
      return run_bench(data_options, algos_csv, k, *seed, budget_ref,
                       budget_runs, bench_percent, lambda, replications,
                       fixed_repeats, jobs, out_path);
    }
    if (app.got_subcommand(oracle_cmd)) {
      return run_oracle(data_options, k, out_path);
    }
    if (app.got_subcommand(gen)) {
      if (!seed) throw ConfigError("--seed is required");
      return run_gen(clusters, *seed, out_path);
    }
    if (app.got_subcommand(seed_cmd)) {
      return run_seed_cmd(data_options, algo_name, k, seed, lambda, out_path);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 4;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
