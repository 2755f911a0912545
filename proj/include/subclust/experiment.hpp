#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "subclust/data.hpp"
#include "subclust/gbto.hpp"
#include "subclust/selfexpress.hpp"
#include "subclust/types.hpp"

namespace subclust {

enum class Method { kOmp, kLsr };
enum class GbtoSetting { kOff, kHard, kSoft };

struct FileSpec {
  std::string data_path;
  std::string labels_path;  // empty = no ground truth available
  FileFormat format = FileFormat::kCsv;
  int pca_dim = 0;  // 0 = keep ambient dimension
};

struct ExperimentConfig {
  std::string name = "run";

  // exactly one dataset source
  std::optional<SyntheticSpec> synthetic;
  std::optional<FileSpec> file;

  Method method = Method::kLsr;
  int omp_k_max = 8;
  double omp_residual_tol = 1e-6;
  double lsr_lambda = 0.01;
  AffinityMode affinity = AffinityMode::kSum;

  GbtoSetting gbto_setting = GbtoSetting::kHard;
  TransformKind transform = TransformKind::kReciprocal;
  double zero_floor = kDefaultZeroFloor;

  int k = 0;  // 0 = take the cluster count from the ground-truth labels
  int kmeans_restarts = 10;
  std::vector<std::uint64_t> seeds;
  std::string output_path;

  // wall-clock columns are written as 0 unless enabled, so that two identical
  // runs produce byte-identical CSV by default
  bool record_timing = false;
};

struct MetricsRow {
  std::string run_id;
  std::string method;
  std::string mode;
  std::string transform;
  Index n = 0;
  int k = 0;
  double accuracy = 0.0;
  double nmi = 0.0;
  double connectivity = 0.0;
  double ncut_before = 0.0;
  double ncut_after = 0.0;
  double sparsity_before = 0.0;
  double sparsity_after = 0.0;
  double wall_ms = 0.0;
  // extension columns; NaN prints as an empty field
  double accuracy_std = kNan;
  double nmi_std = kNan;
  std::string status = "ok";
  double connectivity_before = kNan;
  double wall_represent_ms = 0.0;
  double wall_gbto_ms = 0.0;
  double wall_spectral_ms = 0.0;

  static constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
};

// One row per seed (errors isolated into the row's status), then a summary
// row holding means, with accuracy/nmi spread in the *_std columns.
std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg);

std::string metrics_csv_header();
std::string metrics_to_csv(const std::vector<MetricsRow>& rows);
void write_metrics_csv(const std::vector<MetricsRow>& rows,
                       const std::string& path);

struct SweepResult {
  std::vector<MetricsRow> rows;  // all blocks concatenated, long form
  std::string plot_data;         // whitespace table: x mean_accuracy std_accuracy
};

// axis is one of: points_per_subspace, n_subspaces, k_max, lambda
SweepResult sweep(const ExperimentConfig& base, const std::string& axis,
                  const std::vector<double>& values);
void write_text_file(const std::string& text, const std::string& path);

ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

struct ApspBenchRow {
  Index n = 0;
  double reference_ms = 0.0;
  double blocked_ms = 0.0;
  double max_abs_diff = 0.0;  // blocked vs reference, infinities matching
};

std::vector<ApspBenchRow> bench_apsp(const std::vector<Index>& sizes,
                                     int block_size = 64,
                                     double inf_fraction = 0.2,
                                     std::uint64_t seed = 1);
std::string apsp_bench_csv(const std::vector<ApspBenchRow>& rows);

const char* to_string(Method m);
const char* to_string(GbtoSetting g);
const char* to_string(TransformKind t);

}  // namespace subclust
