#include "hashcoll/pca.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "common/fileutil.hpp"
#include "hashcoll/hashes.hpp"

namespace hashcoll {

std::vector<double> PcaHashModel::project(std::span<const double> e) const {
  if (e.size() != input_dim) throw PcaError("embedding dimension does not match PCA model");
  std::vector<double> p(out_bits, 0.0);
  for (std::size_t k = 0; k < out_bits; ++k) {
    const double* row = components.data() + k * input_dim;
    double acc = 0.0;
    for (std::size_t i = 0; i < input_dim; ++i) acc += row[i] * (e[i] - mean[i]);
    p[k] = acc;
  }
  return p;
}

PcaHashModel pca_fit(const std::vector<std::vector<double>>& embeddings, std::size_t out_bits) {
  const std::size_t n = embeddings.size();
  if (out_bits == 0) throw PcaError("out_bits must be positive");
  if (n <= out_bits) throw PcaError("need more samples than output bits");
  const std::size_t d = embeddings.front().size();
  if (d < out_bits) throw PcaError("embedding dimension smaller than output bits");

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < n; ++r) {
    if (embeddings[r].size() != d) throw PcaError("ragged embedding matrix");
    for (std::size_t c = 0; c < d; ++c) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = embeddings[r][c];
  }
  const Eigen::RowVectorXd mu = x.colwise().mean();
  x.rowwise() -= mu;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw PcaError("eigendecomposition failed");
  const Eigen::VectorXd& evals = eig.eigenvalues();  // ascending
  const Eigen::MatrixXd& evecs = eig.eigenvectors();
  const double top = evals(evals.size() - 1);
  if (!(top > 0.0)) throw PcaError("degenerate data: zero variance");

  PcaHashModel m;
  m.input_dim = d;
  m.out_bits = out_bits;
  m.mean.assign(mu.data(), mu.data() + d);
  m.components.resize(out_bits * d);
  for (std::size_t k = 0; k < out_bits; ++k) {
    const auto col = static_cast<Eigen::Index>(d - 1 - k);
    if (evals(col) <= 1e-12 * top) throw PcaError("degenerate data: fewer non-zero variance directions than bits");
    Eigen::VectorXd v = evecs.col(col);
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
      if (std::abs(v(i)) > std::abs(v(arg))) arg = i;
    }
    if (v(arg) < 0) v = -v;
    std::copy(v.data(), v.data() + d, m.components.begin() + static_cast<std::ptrdiff_t>(k * d));
  }

  std::vector<std::vector<double>> proj(out_bits, std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const auto p = m.project(embeddings[r]);
    for (std::size_t k = 0; k < out_bits; ++k) proj[k][r] = p[k];
  }
  m.medians.resize(out_bits);
  for (std::size_t k = 0; k < out_bits; ++k) m.medians[k] = lower_median(std::move(proj[k]));
  return m;
}

BitHash pca_hash(const PcaHashModel& model, std::span<const double> e) {
  const auto p = model.project(e);
  BitHash h(model.out_bits);
  for (std::size_t k = 0; k < model.out_bits; ++k) h.set(k, p[k] >= model.medians[k]);
  return h;
}

namespace {

static_assert(std::endian::native == std::endian::little, "model files are written in host byte order");

template <typename T>
void put(std::vector<unsigned char>& out, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

template <typename T>
T take(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw PcaError("truncated PCA model file");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

constexpr std::uint16_t kPcaVersion = 1;

}  // namespace

void save_pca_model(const std::filesystem::path& path, const PcaHashModel& m) {
  std::vector<unsigned char> out = {'P', 'C', 'A', 'H'};
  put<std::uint16_t>(out, kPcaVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.input_dim));
  put<std::uint16_t>(out, static_cast<std::uint16_t>(m.out_bits));
  for (double v : m.mean) put(out, v);
  for (double v : m.components) put(out, v);
  for (double v : m.medians) put(out, v);
  write_file_atomic(path, out);
}

PcaHashModel load_pca_model(const std::filesystem::path& path) {
  const std::string in = read_text_file(path);
  if (in.size() < 4 || in.compare(0, 4, "PCAH") != 0) throw PcaError("not a PCA model file");
  std::size_t pos = 4;
  if (take<std::uint16_t>(in, pos) != kPcaVersion) throw PcaError("unsupported PCA model version");
  PcaHashModel m;
  m.input_dim = take<std::uint32_t>(in, pos);
  m.out_bits = take<std::uint16_t>(in, pos);
  if (m.input_dim == 0 || m.out_bits == 0) throw PcaError("PCA model has zero dimension");
  const std::size_t expect = pos + 8 * (m.input_dim + m.out_bits * m.input_dim + m.out_bits);
  if (in.size() != expect) throw PcaError("PCA model file size mismatch");
  m.mean.resize(m.input_dim);
  m.components.resize(m.out_bits * m.input_dim);
  m.medians.resize(m.out_bits);
  for (double& v : m.mean) v = take<double>(in, pos);
  for (double& v : m.components) v = take<double>(in, pos);
  for (double& v : m.medians) v = take<double>(in, pos);
  return m;
}

std::vector<std::vector<double>> read_embeddings_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PcaError("cannot open embeddings file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw PcaError("bad number on line " + std::to_string(lineno) + ": '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw PcaError("line " + std::to_string(lineno) + " has a different dimension");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw PcaError("embeddings file is empty");
  return rows;
}

}  // namespace hashcoll
