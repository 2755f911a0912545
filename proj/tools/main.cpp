#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subclust/experiment.hpp"

namespace {

using namespace subclust;

// every pipeline flag, so `run` and `sweep` accept the same set; flags win
// over the config file
struct Overrides {
  std::string config_path;
  std::string name;
  std::string method;
  std::string gbto;
  std::string transform;
  std::string affinity;
  double zero_floor = 0.0;
  int k = 0;
  int kmeans_restarts = 0;
  std::vector<std::uint64_t> seeds;
  int trials = 0;
  std::vector<int> synthetic;  // n_subspaces,sub_dim,ambient_dim,points
  double noise_sigma = 0.0;
  std::string data_path;
  std::string labels_path;
  std::string format;
  int pca_dim = 0;
  int omp_k_max = 0;
  double omp_tol = 0.0;
  double lambda = 0.0;
  std::string output;
  bool timing = false;

  CLI::Option* o_zero_floor = nullptr;
  CLI::Option* o_k = nullptr;
  CLI::Option* o_restarts = nullptr;
  CLI::Option* o_seeds = nullptr;
  CLI::Option* o_trials = nullptr;
  CLI::Option* o_synthetic = nullptr;
  CLI::Option* o_noise = nullptr;
  CLI::Option* o_data = nullptr;
  CLI::Option* o_labels = nullptr;
  CLI::Option* o_format = nullptr;
  CLI::Option* o_pca = nullptr;
  CLI::Option* o_omp_k = nullptr;
  CLI::Option* o_omp_tol = nullptr;
  CLI::Option* o_lambda = nullptr;
  CLI::Option* o_output = nullptr;
  CLI::Option* o_timing = nullptr;
  CLI::Option* o_name = nullptr;
  CLI::Option* o_method = nullptr;
  CLI::Option* o_gbto = nullptr;
  CLI::Option* o_transform = nullptr;
  CLI::Option* o_affinity = nullptr;
};

void add_pipeline_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path,
                  "JSON config file; every flag below overrides it");
  ov.o_name = cmd->add_option("--name", ov.name, "run identifier prefix");
  ov.o_method = cmd->add_option("--method", ov.method, "representation solver")
                    ->check(CLI::IsMember({"omp", "lsr"}));
  ov.o_gbto = cmd->add_option("--gbto", ov.gbto, "graph optimization mode")
                  ->check(CLI::IsMember({"hard", "soft", "off"}));
  ov.o_transform =
      cmd->add_option("--transform", ov.transform, "weight-distance transform")
          ->check(CLI::IsMember({"reciprocal", "log"}));
  ov.o_affinity =
      cmd->add_option("--affinity", ov.affinity, "|C|+|C^T| or its half")
          ->check(CLI::IsMember({"sum", "half"}));
  ov.o_zero_floor = cmd->add_option(
      "--zero-floor", ov.zero_floor,
      "weights at or below this count as zero edges (default 1e-15)");
  ov.o_k = cmd->add_option("--k", ov.k,
                           "cluster count; 0 takes it from the labels");
  ov.o_restarts =
      cmd->add_option("--kmeans-restarts", ov.kmeans_restarts, "k-means restarts");
  ov.o_seeds = cmd->add_option("--seed", ov.seeds, "comma-separated seed list")
                   ->delimiter(',');
  ov.o_trials = cmd->add_option(
      "--trials", ov.trials,
      "when no seed list is given, use seeds 0..trials-1 (default 10)");
  ov.o_synthetic =
      cmd->add_option("--synthetic", ov.synthetic,
                      "n_subspaces,sub_dim,ambient_dim,points_per_subspace")
          ->delimiter(',');
  ov.o_noise =
      cmd->add_option("--noise-sigma", ov.noise_sigma, "synthetic noise std");
  ov.o_data = cmd->add_option("--data", ov.data_path,
                              "data file (CSV rows=features, or IDX)");
  ov.o_labels = cmd->add_option("--labels", ov.labels_path, "label file");
  ov.o_format = cmd->add_option("--format", ov.format, "data file format")
                    ->check(CLI::IsMember({"csv", "idx"}));
  ov.o_pca =
      cmd->add_option("--pca-dim", ov.pca_dim, "project to this dimension first");
  ov.o_omp_k = cmd->add_option("--omp-k-max", ov.omp_k_max, "OMP sparsity budget");
  ov.o_omp_tol =
      cmd->add_option("--omp-tol", ov.omp_tol, "OMP residual stopping tolerance");
  ov.o_lambda = cmd->add_option("--lambda", ov.lambda, "LSR ridge penalty");
  ov.o_output = cmd->add_option("--output", ov.output, "metrics CSV path");
  ov.o_timing = cmd->add_flag("--timing", ov.timing,
                              "record wall-clock columns (breaks byte-identical "
                              "reruns)");
}

ExperimentConfig build_config(const Overrides& ov) {
  ExperimentConfig cfg;
  if (!ov.config_path.empty()) cfg = load_config_file(ov.config_path);

  if (ov.o_name->count()) cfg.name = ov.name;
  if (ov.o_method->count()) {
    cfg.method = ov.method == "omp" ? Method::kOmp : Method::kLsr;
  }
  if (ov.o_gbto->count()) {
    cfg.gbto_setting = ov.gbto == "off"    ? GbtoSetting::kOff
                       : ov.gbto == "hard" ? GbtoSetting::kHard
                                           : GbtoSetting::kSoft;
  }
  if (ov.o_transform->count()) {
    cfg.transform = ov.transform == "log" ? TransformKind::kLog
                                          : TransformKind::kReciprocal;
  }
  if (ov.o_affinity->count()) {
    cfg.affinity =
        ov.affinity == "half" ? AffinityMode::kHalf : AffinityMode::kSum;
  }
  if (ov.o_zero_floor->count()) cfg.zero_floor = ov.zero_floor;
  if (ov.o_k->count()) cfg.k = ov.k;
  if (ov.o_restarts->count()) cfg.kmeans_restarts = ov.kmeans_restarts;
  if (ov.o_seeds->count()) cfg.seeds = ov.seeds;
  if (ov.o_omp_k->count()) cfg.omp_k_max = ov.omp_k_max;
  if (ov.o_omp_tol->count()) cfg.omp_residual_tol = ov.omp_tol;
  if (ov.o_lambda->count()) cfg.lsr_lambda = ov.lambda;
  if (ov.o_output->count()) cfg.output_path = ov.output;
  if (ov.o_timing->count()) cfg.record_timing = ov.timing;

  if (ov.o_synthetic->count()) {
    if (ov.synthetic.size() != 4) {
      throw CLI::ValidationError(
          "--synthetic needs n_subspaces,sub_dim,ambient_dim,points_per_subspace");
    }
    SyntheticSpec spec;
    if (cfg.synthetic) spec = *cfg.synthetic;
    spec.n_subspaces = ov.synthetic[0];
    spec.sub_dim = ov.synthetic[1];
    spec.ambient_dim = ov.synthetic[2];
    spec.points_per_subspace = ov.synthetic[3];
    cfg.synthetic = spec;
    cfg.file.reset();
  }
  if (ov.o_noise->count()) {
    if (!cfg.synthetic) {
      throw CLI::ValidationError("--noise-sigma needs a synthetic dataset");
    }
    cfg.synthetic->noise_sigma = ov.noise_sigma;
  }
  if (ov.o_data->count()) {
    FileSpec fs;
    if (cfg.file) fs = *cfg.file;
    fs.data_path = ov.data_path;
    cfg.file = fs;
    cfg.synthetic.reset();
  }
  if (ov.o_labels->count() || ov.o_format->count() || ov.o_pca->count()) {
    if (!cfg.file) {
      throw CLI::ValidationError(
          "--labels/--format/--pca-dim need a file dataset (--data)");
    }
    if (ov.o_labels->count()) cfg.file->labels_path = ov.labels_path;
    if (ov.o_format->count()) {
      cfg.file->format = ov.format == "idx" ? FileFormat::kIdx : FileFormat::kCsv;
    }
    if (ov.o_pca->count()) cfg.file->pca_dim = ov.pca_dim;
  }

  if (cfg.seeds.empty()) {
    const int trials = ov.o_trials->count() ? ov.trials : 10;
    if (trials < 1) throw CLI::ValidationError("--trials must be >= 1");
    for (int i = 0; i < trials; ++i) cfg.seeds.push_back(std::uint64_t(i));
  }
  if (!cfg.synthetic && !cfg.file) {
    throw CLI::ValidationError(
        "no dataset: give --synthetic or --data (or a config file)");
  }
  return cfg;
}

int cmd_run(const Overrides& ov) {
  const ExperimentConfig cfg = build_config(ov);
  const std::vector<MetricsRow> rows = run_experiment(cfg);
  if (cfg.output_path.empty()) {
    std::cout << metrics_to_csv(rows);
  } else {
    std::cout << "wrote " << cfg.output_path << " (" << rows.size()
              << " rows)\n";
    const MetricsRow& s = rows.back();
    std::cout << "summary: accuracy=" << s.accuracy << " nmi=" << s.nmi
              << " connectivity=" << s.connectivity << " [" << s.status
              << "]\n";
  }
  return 0;
}

int cmd_sweep(const Overrides& ov, const std::string& axis,
              const std::vector<double>& values, const std::string& plot_path) {
  ExperimentConfig cfg = build_config(ov);
  const std::string csv_path = cfg.output_path;
  cfg.output_path.clear();  // sweep writes the combined table itself

  const SweepResult result = sweep(cfg, axis, values);
  if (csv_path.empty()) {
    std::cout << metrics_to_csv(result.rows) << '\n' << result.plot_data;
  } else {
    write_metrics_csv(result.rows, csv_path);
    const std::string pp = plot_path.empty() ? csv_path + ".plot" : plot_path;
    write_text_file(result.plot_data, pp);
    std::cout << "wrote " << csv_path << " and " << pp << '\n';
  }
  return 0;
}

int cmd_bench(const std::vector<Index>& sizes, int block, double inf_fraction,
              std::uint64_t seed, const std::string& output) {
  const std::vector<ApspBenchRow> rows =
      bench_apsp(sizes, block, inf_fraction, seed);
  const std::string csv = apsp_bench_csv(rows);
  if (output.empty()) {
    std::cout << csv;
  } else {
    write_text_file(csv, output);
    std::cout << "wrote " << output << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "subclust: self-expressive subspace clustering with graph-based "
      "transformation and optimization"};
  app.require_subcommand(1);

  Overrides run_ov;
  CLI::App* run = app.add_subcommand("run", "run one experiment over seeds");
  add_pipeline_flags(run, run_ov);

  Overrides sweep_ov;
  std::string axis;
  std::vector<double> values;
  std::string plot_path;
  CLI::App* sw = app.add_subcommand("sweep", "run experiments along one axis");
  add_pipeline_flags(sw, sweep_ov);
  sw->add_option("--axis", axis,
                 "points_per_subspace | n_subspaces | k_max | lambda")
      ->required();
  sw->add_option("--values", values, "comma-separated axis values")
      ->delimiter(',')
      ->required();
  sw->add_option("--plot-output", plot_path,
                 "plot table path (default: <output>.plot)");

  std::vector<Index> sizes{128, 512, 1024};
  int block = 64;
  double inf_fraction = 0.2;
  std::uint64_t bench_seed = 1;
  std::string bench_out;
  CLI::App* bench = app.add_subcommand(
      "bench-apsp", "time the reference vs blocked shortest-path kernels");
  bench->add_option("--sizes", sizes, "matrix sizes")->delimiter(',');
  bench->add_option("--block", block, "tile edge for the blocked kernel");
  bench->add_option("--inf-fraction", inf_fraction,
                    "fraction of missing (infinite) edges");
  bench->add_option("--seed", bench_seed, "graph seed");
  bench->add_option("--output", bench_out, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_ov);
    if (sw->parsed()) return cmd_sweep(sweep_ov, axis, values, plot_path);
    if (bench->parsed()) {
      return cmd_bench(sizes, block, inf_fraction, bench_seed, bench_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
