#include "subclust/data.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "subclust/rng.hpp"

namespace subclust {

namespace {

Matrix random_normal_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      m(i, j) = rng.normal();
    }
  }
  return m;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& token, std::size_t line, std::size_t col) {
  const std::string t = trim(token);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || t.empty()) {
    throw std::runtime_error("csv: non-numeric entry '" + token + "' at line " +
                             std::to_string(line) + ", field " + std::to_string(col));
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

Matrix read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto tokens = split(line, ',');
    std::vector<double> row;
    row.reserve(tokens.size());
    for (std::size_t c = 0; c < tokens.size(); ++c) {
      row.push_back(parse_double(tokens[c], lineno, c + 1));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("csv: ragged row at line " + std::to_string(lineno) +
                               " (expected " + std::to_string(rows.front().size()) +
                               " fields, got " + std::to_string(row.size()) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("csv: file is empty: " + path);

  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

struct IdxFile {
  int dtype = 0;
  std::vector<std::uint32_t> dims;
  std::vector<unsigned char> payload;
};

IdxFile read_idx(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 4 || bytes[0] != 0 || bytes[1] != 0) {
    throw std::runtime_error("idx: bad magic number in " + path);
  }
  IdxFile f;
  f.dtype = bytes[2];
  const int ndims = bytes[3];
  if (f.dtype != 0x08) {
    throw std::runtime_error("idx: only unsigned-byte payloads are supported");
  }
  if (ndims < 1 || ndims > 3) {
    throw std::runtime_error("idx: unsupported dimensionality " + std::to_string(ndims));
  }
  std::size_t offset = 4;
  std::size_t total = 1;
  for (int d = 0; d < ndims; ++d) {
    if (offset + 4 > bytes.size()) throw std::runtime_error("idx: truncated header");
    const std::uint32_t v = (std::uint32_t(bytes[offset]) << 24) |
                            (std::uint32_t(bytes[offset + 1]) << 16) |
                            (std::uint32_t(bytes[offset + 2]) << 8) |
                            std::uint32_t(bytes[offset + 3]);
    f.dims.push_back(v);
    total *= v;
    offset += 4;
  }
  if (bytes.size() - offset != total) {
    throw std::runtime_error("idx: payload size mismatch (header says " +
                             std::to_string(total) + " bytes, file has " +
                             std::to_string(bytes.size() - offset) + ")");
  }
  f.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset), bytes.end());
  return f;
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_subspaces < 1 || spec.sub_dim < 1 || spec.ambient_dim < 1 ||
      spec.points_per_subspace < 1) {
    throw std::invalid_argument("generate_synthetic: counts and dimensions must be positive");
  }
  if (spec.sub_dim > spec.ambient_dim) {
    throw std::invalid_argument("generate_synthetic: sub_dim must not exceed ambient_dim");
  }
  if (spec.noise_sigma < 0.0) {
    throw std::invalid_argument("generate_synthetic: noise_sigma must be >= 0");
  }
  const Index total = Index(spec.n_subspaces) * Index(spec.points_per_subspace);
  if (total < 2) {
    throw std::invalid_argument("generate_synthetic: need at least 2 points in total");
  }

  Rng rng(spec.seed);
  Matrix points(spec.ambient_dim, total);
  Eigen::VectorXi labels(total);

  Index col = 0;
  for (int s = 0; s < spec.n_subspaces; ++s) {
    const Matrix gaussian = random_normal_matrix(rng, spec.ambient_dim, spec.sub_dim);
    Eigen::HouseholderQR<Matrix> qr(gaussian);
    const Matrix basis =
        qr.householderQ() * Matrix::Identity(spec.ambient_dim, spec.sub_dim);

    for (int p = 0; p < spec.points_per_subspace; ++p) {
      Vector coeff = random_normal_matrix(rng, spec.sub_dim, 1);
      const double cn = coeff.norm();
      if (cn > 0.0) coeff /= cn;
      Vector x = basis * coeff;
      if (spec.noise_sigma > 0.0) {
        x += spec.noise_sigma * Vector(random_normal_matrix(rng, spec.ambient_dim, 1));
      }
      points.col(col) = x;
      labels[col] = s;
      ++col;
    }
  }

  for (Index j = 0; j < total; ++j) {
    const double n = points.col(j).norm();
    if (n > 0.0) points.col(j) /= n;
  }

  return {DataMatrix(std::move(points)), LabelVector(std::move(labels), spec.n_subspaces)};
}

DataMatrix load_matrix(const std::string& path, FileFormat format) {
  if (format == FileFormat::kCsv) {
    return DataMatrix(read_csv_matrix(path));
  }

  const IdxFile f = read_idx(path);
  if (f.dims.size() == 1) {
    throw std::runtime_error("idx: 1-d file holds labels, use load_labels");
  }
  const Index count = static_cast<Index>(f.dims[0]);
  Index feat = 0;
  Matrix m;
  if (f.dims.size() == 3) {
    const Index rows = static_cast<Index>(f.dims[1]);
    const Index cols = static_cast<Index>(f.dims[2]);
    feat = rows * cols;
    m.resize(feat, count);
    for (Index img = 0; img < count; ++img) {
      const std::size_t base = static_cast<std::size_t>(img * feat);
      for (Index r = 0; r < rows; ++r) {
        for (Index c = 0; c < cols; ++c) {
          // images are stored row-major; flatten column-wise per image
          m(c * rows + r, img) =
              static_cast<double>(f.payload[base + std::size_t(r * cols + c)]) / 255.0;
        }
      }
    }
  } else {
    feat = static_cast<Index>(f.dims[1]);
    m.resize(feat, count);
    for (Index img = 0; img < count; ++img) {
      for (Index r = 0; r < feat; ++r) {
        m(r, img) =
            static_cast<double>(f.payload[std::size_t(img * feat + r)]) / 255.0;
      }
    }
  }
  return DataMatrix(std::move(m));
}

LabelVector load_labels(const std::string& path, FileFormat format) {
  std::vector<int> raw;
  if (format == FileFormat::kIdx) {
    const IdxFile f = read_idx(path);
    if (f.dims.size() != 1) {
      throw std::runtime_error("idx: label file must be 1-dimensional");
    }
    raw.reserve(f.payload.size());
    for (unsigned char b : f.payload) raw.push_back(int(b));
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      for (const auto& tok : split(line, ',')) {
        if (trim(tok).empty()) continue;
        const double v = parse_double(tok, lineno, 1);
        const int label = static_cast<int>(v);
        if (label < 0 || double(label) != v) {
          throw std::runtime_error("labels: entries must be nonnegative integers");
        }
        raw.push_back(label);
      }
    }
  }
  if (raw.empty()) throw std::runtime_error("labels: file is empty: " + path);
  Eigen::VectorXi labels(static_cast<Index>(raw.size()));
  int max_label = 0;
  for (Index i = 0; i < labels.size(); ++i) {
    labels[i] = raw[static_cast<std::size_t>(i)];
    max_label = std::max(max_label, labels[i]);
  }
  return LabelVector(std::move(labels), max_label + 1);
}

DataMatrix pca_project(const DataMatrix& x, int target_dim) {
  const Index d = x.dim();
  const Index n = x.points();
  if (target_dim < 1 || Index(target_dim) > std::min(d, n)) {
    throw std::invalid_argument("pca_project: target_dim out of range");
  }

  const Vector mean = x.values.rowwise().mean();
  Matrix centered = x.values.colwise() - mean;

  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinU);
  Matrix directions = svd.matrixU().leftCols(target_dim);

  // fix the sign ambiguity: largest-magnitude entry of each direction positive
  for (Index c = 0; c < directions.cols(); ++c) {
    Index best = 0;
    double best_abs = -1.0;
    for (Index r = 0; r < directions.rows(); ++r) {
      const double a = std::abs(directions(r, c));
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (directions(best, c) < 0.0) directions.col(c) = -directions.col(c);
  }

  return DataMatrix(directions.transpose() * centered);
}

NormalizeResult normalize_columns(const DataMatrix& x) {
  Matrix m = x.values;
  std::vector<Index> zero_cols;
  for (Index j = 0; j < m.cols(); ++j) {
    const double n = m.col(j).norm();
    if (n > 1e-154) {
      m.col(j) /= n;
    } else {
      zero_cols.push_back(j);
    }
  }
  return {DataMatrix(std::move(m)), std::move(zero_cols)};
}

}  // namespace subclust
