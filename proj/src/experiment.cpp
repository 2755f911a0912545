#include "subclust/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "subclust/eval.hpp"
#include "subclust/rng.hpp"
#include "subclust/spectral.hpp"

namespace subclust {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string format_num(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// the k-means stream must not replay the data-generation stream
std::uint64_t cluster_seed(std::uint64_t seed) {
  return mix_seed(seed + 0x517cc1b727220a95ULL);
}

struct Dataset {
  DataMatrix data;
  std::optional<LabelVector> truth;
};

Dataset load_dataset(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.synthetic.has_value() == cfg.file.has_value()) {
    throw std::invalid_argument(
        "config: exactly one of synthetic/file dataset required");
  }
  if (cfg.synthetic) {
    SyntheticSpec spec = *cfg.synthetic;
    spec.seed = seed;
    SyntheticData gen = generate_synthetic(spec);
    return {std::move(gen.data), std::move(gen.labels)};
  }
  const FileSpec& fs = *cfg.file;
  DataMatrix data = load_matrix(fs.data_path, fs.format);
  if (fs.pca_dim > 0) data = pca_project(data, fs.pca_dim);
  std::optional<LabelVector> truth;
  if (!fs.labels_path.empty()) {
    truth = load_labels(fs.labels_path, fs.format);
    if (truth->size() != data.points()) {
      throw std::runtime_error("dataset: label count does not match point count");
    }
  }
  return {std::move(data), std::move(truth)};
}

MetricsRow run_one_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  MetricsRow row;
  row.run_id = cfg.name + "/s" + std::to_string(seed);
  row.method = to_string(cfg.method);
  row.mode = to_string(cfg.gbto_setting);
  row.transform = to_string(cfg.transform);

  const Dataset ds = load_dataset(cfg, seed);
  const NormalizeResult norm = normalize_columns(ds.data);
  const DataMatrix& x = norm.data;
  row.n = x.points();

  int k = cfg.k;
  if (k <= 0) {
    if (!ds.truth) {
      throw std::invalid_argument("config: k required when no labels are given");
    }
    k = ds.truth->k;
  }
  row.k = k;

  auto t0 = Clock::now();
  const CoefficientMatrix c = cfg.method == Method::kOmp
                                  ? omp_coefficients(x, cfg.omp_k_max,
                                                     cfg.omp_residual_tol)
                                  : lsr_coefficients(x, cfg.lsr_lambda);
  const AffinityResult aff = build_affinity(c, cfg.affinity);
  const double t_repr = ms_since(t0);
  const AffinityMatrix& w = aff.matrix;

  t0 = Clock::now();
  AffinityMatrix w_after = w;
  if (cfg.gbto_setting != GbtoSetting::kOff && !aff.all_zero) {
    const GbtoMode mode = cfg.gbto_setting == GbtoSetting::kHard
                              ? GbtoMode::kHard
                              : GbtoMode::kSoft;
    w_after = gbto(w, mode, cfg.transform, cfg.zero_floor);
  }
  const double t_gbto = ms_since(t0);

  t0 = Clock::now();
  const KmeansResult clust =
      spectral_clustering(w_after, k, cluster_seed(seed), cfg.kmeans_restarts);
  const double t_spec = ms_since(t0);

  row.sparsity_before = sparsity(w.values, cfg.zero_floor);
  row.sparsity_after = sparsity(w_after.values, cfg.zero_floor);
  if (ds.truth) {
    row.accuracy = clustering_accuracy(clust.labels, *ds.truth);
    row.nmi = nmi(clust.labels, *ds.truth);
    row.connectivity = connectivity(w_after, *ds.truth);
    row.connectivity_before = connectivity(w, *ds.truth);
    row.ncut_before = ncut_value(w, *ds.truth);
    row.ncut_after = ncut_value(w_after, *ds.truth);
  } else {
    // without ground truth the partition-quality metrics fall back to the
    // predicted labels and the truth-derived ones stay empty
    row.accuracy = MetricsRow::kNan;
    row.nmi = MetricsRow::kNan;
    row.connectivity = MetricsRow::kNan;
    row.ncut_before = ncut_value(w, clust.labels);
    row.ncut_after = ncut_value(w_after, clust.labels);
  }
  if (cfg.record_timing) {
    row.wall_represent_ms = t_repr;
    row.wall_gbto_ms = t_gbto;
    row.wall_spectral_ms = t_spec;
    row.wall_ms = t_repr + t_gbto + t_spec;
  }
  if (aff.all_zero || clust.degenerate) row.status = "degenerate";
  return row;
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? MetricsRow::kNan : s / double(xs.size());
}

double stddev_of(const std::vector<double>& xs) {
  if (xs.empty()) return MetricsRow::kNan;
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / double(xs.size()));
}

}  // namespace

const char* to_string(Method m) {
  return m == Method::kOmp ? "omp" : "lsr";
}

const char* to_string(GbtoSetting g) {
  switch (g) {
    case GbtoSetting::kOff: return "off";
    case GbtoSetting::kHard: return "hard";
    default: return "soft";
  }
}

const char* to_string(TransformKind t) {
  return t == TransformKind::kReciprocal ? "reciprocal" : "log";
}

std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) {
    throw std::invalid_argument("config: seeds must be non-empty");
  }

  std::vector<MetricsRow> rows;
  rows.reserve(cfg.seeds.size() + 1);
  for (std::uint64_t seed : cfg.seeds) {
    try {
      rows.push_back(run_one_seed(cfg, seed));
    } catch (const std::exception& e) {
      MetricsRow row;
      row.run_id = cfg.name + "/s" + std::to_string(seed);
      row.method = to_string(cfg.method);
      row.mode = to_string(cfg.gbto_setting);
      row.transform = to_string(cfg.transform);
      row.accuracy = row.nmi = row.connectivity = MetricsRow::kNan;
      row.ncut_before = row.ncut_after = MetricsRow::kNan;
      row.sparsity_before = row.sparsity_after = MetricsRow::kNan;
      std::string what = e.what();
      for (char& ch : what) {
        if (ch == ',' || ch == '\n') ch = ';';  // keep the CSV intact
      }
      row.status = "error: " + what;
      rows.push_back(std::move(row));
    }
  }

  // summary over the rows that produced metrics
  MetricsRow sum;
  sum.run_id = cfg.name + "/summary";
  sum.method = to_string(cfg.method);
  sum.mode = to_string(cfg.gbto_setting);
  sum.transform = to_string(cfg.transform);
  std::vector<double> acc, nmi_v, conn, conn_b, ncut_b, ncut_a, spar_b, spar_a, wall;
  int ok = 0;
  for (const MetricsRow& r : rows) {
    if (r.status.rfind("error:", 0) == 0) continue;
    ++ok;
    sum.n = r.n;
    sum.k = r.k;
    auto keep = [](std::vector<double>& v, double x) {
      if (!std::isnan(x)) v.push_back(x);
    };
    keep(acc, r.accuracy);
    keep(nmi_v, r.nmi);
    keep(conn, r.connectivity);
    keep(conn_b, r.connectivity_before);
    keep(ncut_b, r.ncut_before);
    keep(ncut_a, r.ncut_after);
    keep(spar_b, r.sparsity_before);
    keep(spar_a, r.sparsity_after);
    wall.push_back(r.wall_ms);
  }
  sum.accuracy = mean_of(acc);
  sum.accuracy_std = stddev_of(acc);
  sum.nmi = mean_of(nmi_v);
  sum.nmi_std = stddev_of(nmi_v);
  sum.connectivity = mean_of(conn);
  sum.connectivity_before = mean_of(conn_b);
  sum.ncut_before = mean_of(ncut_b);
  sum.ncut_after = mean_of(ncut_a);
  sum.sparsity_before = mean_of(spar_b);
  sum.sparsity_after = mean_of(spar_a);
  sum.wall_ms = mean_of(wall);
  sum.status = "summary:" + std::to_string(ok) + "/" +
               std::to_string(cfg.seeds.size()) + " ok";
  rows.push_back(std::move(sum));

  if (!cfg.output_path.empty()) write_metrics_csv(rows, cfg.output_path);
  return rows;
}

std::string metrics_csv_header() {
  return "run_id,method,mode,transform,N,k,accuracy,nmi,connectivity,"
         "ncut_before,ncut_after,sparsity_before,sparsity_after,wall_ms,"
         "accuracy_std,nmi_std,status,connectivity_before,"
         "wall_represent_ms,wall_gbto_ms,wall_spectral_ms";
}

std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream out;
  out << metrics_csv_header() << '\n';
  for (const MetricsRow& r : rows) {
    out << r.run_id << ',' << r.method << ',' << r.mode << ',' << r.transform
        << ',' << r.n << ',' << r.k << ',' << format_num(r.accuracy) << ','
        << format_num(r.nmi) << ',' << format_num(r.connectivity) << ','
        << format_num(r.ncut_before) << ',' << format_num(r.ncut_after) << ','
        << format_num(r.sparsity_before) << ',' << format_num(r.sparsity_after)
        << ',' << format_num(r.wall_ms) << ',' << format_num(r.accuracy_std)
        << ',' << format_num(r.nmi_std) << ',' << r.status << ','
        << format_num(r.connectivity_before) << ','
        << format_num(r.wall_represent_ms) << ',' << format_num(r.wall_gbto_ms)
        << ',' << format_num(r.wall_spectral_ms) << '\n';
  }
  return out.str();
}

void write_metrics_csv(const std::vector<MetricsRow>& rows,
                       const std::string& path) {
  write_text_file(metrics_to_csv(rows), path);
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

SweepResult sweep(const ExperimentConfig& base, const std::string& axis,
                  const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("sweep: values must be non-empty");

  SweepResult result;
  std::ostringstream plot;
  plot << "# " << axis << " mean_accuracy std_accuracy\n";

  for (double v : values) {
    ExperimentConfig cfg = base;
    cfg.output_path.clear();
    if (axis == "points_per_subspace" || axis == "n_subspaces") {
      if (!cfg.synthetic) {
        throw std::invalid_argument("sweep: axis '" + axis +
                                    "' needs a synthetic dataset");
      }
      const int iv = int(v);
      if (double(iv) != v || iv < 1) {
        throw std::invalid_argument("sweep: axis '" + axis +
                                    "' takes positive integers");
      }
      if (axis == "points_per_subspace") {
        cfg.synthetic->points_per_subspace = iv;
      } else {
        cfg.synthetic->n_subspaces = iv;
      }
    } else if (axis == "k_max") {
      const int iv = int(v);
      if (double(iv) != v || iv < 1) {
        throw std::invalid_argument("sweep: k_max takes positive integers");
      }
      cfg.omp_k_max = iv;
    } else if (axis == "lambda") {
      cfg.lsr_lambda = v;
    } else {
      throw std::invalid_argument("sweep: unknown axis '" + axis + "'");
    }
    cfg.name = base.name + "/" + axis + "=" + format_num(v);

    const std::vector<MetricsRow> rows = run_experiment(cfg);
    const MetricsRow& summary = rows.back();
    plot << format_num(v) << ' ' << format_num(summary.accuracy) << ' '
         << format_num(summary.accuracy_std) << '\n';
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }

  result.plot_data = plot.str();
  return result;
}

namespace {

using nlohmann::json;

[[noreturn]] void bad_config(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& a : allowed) {
      if (it.key() == a) {
        ok = true;
        break;
      }
    }
    if (!ok) bad_config("unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    bad_config(std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) bad_config("top level must be an object");
  check_keys(root,
             {"name", "dataset", "method", "omp", "lsr", "affinity", "gbto",
              "transform", "zero_floor", "k", "kmeans_restarts", "seeds",
              "trials", "output", "timing"},
             "top level");

  ExperimentConfig cfg;
  if (root.contains("name")) cfg.name = root["name"].get<std::string>();

  if (!root.contains("dataset")) bad_config("missing 'dataset'");
  const json& ds = root["dataset"];
  check_keys(ds, {"synthetic", "file"}, "dataset");
  if (ds.contains("synthetic") == ds.contains("file")) {
    bad_config("dataset needs exactly one of 'synthetic' or 'file'");
  }
  if (ds.contains("synthetic")) {
    const json& s = ds["synthetic"];
    check_keys(s,
               {"n_subspaces", "sub_dim", "ambient_dim", "points_per_subspace",
                "noise_sigma"},
               "dataset.synthetic");
    SyntheticSpec spec;
    spec.n_subspaces = s.value("n_subspaces", 1);
    spec.sub_dim = s.value("sub_dim", 1);
    spec.ambient_dim = s.value("ambient_dim", 1);
    spec.points_per_subspace = s.value("points_per_subspace", 1);
    spec.noise_sigma = s.value("noise_sigma", 0.0);
    cfg.synthetic = spec;
  } else {
    const json& f = ds["file"];
    check_keys(f, {"data", "labels", "format", "pca_dim"}, "dataset.file");
    FileSpec fs;
    if (!f.contains("data")) bad_config("dataset.file needs 'data'");
    fs.data_path = f["data"].get<std::string>();
    fs.labels_path = f.value("labels", std::string());
    const std::string fmt = f.value("format", std::string("csv"));
    if (fmt == "csv") {
      fs.format = FileFormat::kCsv;
    } else if (fmt == "idx") {
      fs.format = FileFormat::kIdx;
    } else {
      bad_config("dataset.file.format must be 'csv' or 'idx'");
    }
    fs.pca_dim = f.value("pca_dim", 0);
    cfg.file = fs;
  }

  if (root.contains("method")) {
    const std::string m = root["method"].get<std::string>();
    if (m == "omp") {
      cfg.method = Method::kOmp;
    } else if (m == "lsr") {
      cfg.method = Method::kLsr;
    } else {
      bad_config("method must be 'omp' or 'lsr'");
    }
  }
  if (root.contains("omp")) {
    const json& o = root["omp"];
    check_keys(o, {"k_max", "residual_tol"}, "omp");
    cfg.omp_k_max = o.value("k_max", cfg.omp_k_max);
    cfg.omp_residual_tol = o.value("residual_tol", cfg.omp_residual_tol);
  }
  if (root.contains("lsr")) {
    const json& l = root["lsr"];
    check_keys(l, {"lambda"}, "lsr");
    cfg.lsr_lambda = l.value("lambda", cfg.lsr_lambda);
  }
  if (root.contains("affinity")) {
    const std::string a = root["affinity"].get<std::string>();
    if (a == "sum") {
      cfg.affinity = AffinityMode::kSum;
    } else if (a == "half") {
      cfg.affinity = AffinityMode::kHalf;
    } else {
      bad_config("affinity must be 'sum' or 'half'");
    }
  }
  if (root.contains("gbto")) {
    const std::string g = root["gbto"].get<std::string>();
    if (g == "off") {
      cfg.gbto_setting = GbtoSetting::kOff;
    } else if (g == "hard") {
      cfg.gbto_setting = GbtoSetting::kHard;
    } else if (g == "soft") {
      cfg.gbto_setting = GbtoSetting::kSoft;
    } else {
      bad_config("gbto must be 'off', 'hard' or 'soft'");
    }
  }
  if (root.contains("transform")) {
    const std::string t = root["transform"].get<std::string>();
    if (t == "reciprocal") {
      cfg.transform = TransformKind::kReciprocal;
    } else if (t == "log") {
      cfg.transform = TransformKind::kLog;
    } else {
      bad_config("transform must be 'reciprocal' or 'log'");
    }
  }
  cfg.zero_floor = root.value("zero_floor", cfg.zero_floor);
  cfg.k = root.value("k", cfg.k);
  cfg.kmeans_restarts = root.value("kmeans_restarts", cfg.kmeans_restarts);
  if (root.contains("seeds")) {
    for (const auto& s : root["seeds"]) {
      cfg.seeds.push_back(s.get<std::uint64_t>());
    }
  } else {
    const int trials = root.value("trials", 10);
    if (trials < 1) bad_config("trials must be >= 1");
    for (int i = 0; i < trials; ++i) cfg.seeds.push_back(std::uint64_t(i));
  }
  cfg.output_path = root.value("output", cfg.output_path);
  cfg.record_timing = root.value("timing", cfg.record_timing);
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

std::vector<ApspBenchRow> bench_apsp(const std::vector<Index>& sizes,
                                     int block_size, double inf_fraction,
                                     std::uint64_t seed) {
  if (inf_fraction < 0.0 || inf_fraction >= 1.0) {
    throw std::invalid_argument("bench_apsp: inf_fraction must be in [0,1)");
  }
  if (sizes.empty()) {
    throw std::invalid_argument("bench_apsp: need at least one size");
  }
  std::vector<ApspBenchRow> rows;
  for (Index n : sizes) {
    if (n < 2) throw std::invalid_argument("bench_apsp: sizes must be >= 2");
    Rng rng(mix_seed(seed + std::uint64_t(n)));
    Matrix d(n, n);
    for (Index j = 0; j < n; ++j) {
      d(j, j) = 0.0;
      for (Index i = j + 1; i < n; ++i) {
        const double v = rng.uniform() < inf_fraction
                             ? kInfinity
                             : 0.05 + rng.uniform();
        d(i, j) = v;
        d(j, i) = v;
      }
    }

    ApspBenchRow row;
    row.n = n;
    Matrix ref = d;
    auto t0 = Clock::now();
    apsp_reference(ref);
    row.reference_ms = ms_since(t0);

    Matrix blk = d;
    t0 = Clock::now();
    apsp_blocked(blk, block_size);
    row.blocked_ms = ms_since(t0);

    double diff = 0.0;
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        const double a = ref(i, j), b = blk(i, j);
        if (std::isinf(a) && std::isinf(b)) continue;
        diff = std::max(diff, std::abs(a - b));
      }
    }
    row.max_abs_diff = diff;
    rows.push_back(row);
  }
  return rows;
}

std::string apsp_bench_csv(const std::vector<ApspBenchRow>& rows) {
  std::ostringstream out;
  out << "n,reference_ms,blocked_ms,speedup,max_abs_diff\n";
  for (const ApspBenchRow& r : rows) {
    out << r.n << ',' << format_num(r.reference_ms) << ','
        << format_num(r.blocked_ms) << ','
        << format_num(r.blocked_ms > 0.0 ? r.reference_ms / r.blocked_ms : 0.0)
        << ',' << format_num(r.max_abs_diff) << '\n';
  }
  return out.str();
}

}  // namespace subclust
