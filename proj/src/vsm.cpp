#include "lexent/vsm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

#include "lexent/common.hpp"

namespace lexent {

SparseVector::SparseVector(std::initializer_list<std::pair<const std::string, double>> init) {
  for (const auto& [f, w] : init) set(f, w);
}

void SparseVector::set(const std::string& feature, double weight) {
  if (!(weight >= 0.0)) throw Error("SparseVector: negative or NaN weight for '" + feature + "'");
  if (weight == 0.0) {
    entries_.erase(feature);
  } else {
    entries_[feature] = weight;
  }
}

void SparseVector::add(const std::string& feature, double weight) {
  set(feature, get(feature) + weight);
}

double SparseVector::get(const std::string& feature) const {
  auto it = entries_.find(feature);
  return it == entries_.end() ? 0.0 : it->second;
}

double SparseVector::total() const {
  double t = 0.0;
  for (const auto& [f, w] : entries_) t += w;
  return t;
}

std::size_t SparseMatrix::row_index(std::string_view label) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) {
    throw Error("matrix has no row '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - labels.begin());
}

bool SparseMatrix::has_row(std::string_view label) const {
  return std::binary_search(labels.begin(), labels.end(), label);
}

std::string side_feature(Side side, std::string_view token) {
  return std::string(side == Side::Left ? "L:" : "R:") + std::string(token);
}

std::string_view strip_side(std::string_view feature) {
  if (feature.size() >= 2 && (feature[0] == 'L' || feature[0] == 'R') && feature[1] == ':') {
    return feature.substr(2);
  }
  return feature;
}

CountMatrix build_count_matrix(const std::map<std::string, SparseVector>& prototypes,
                               bool side_tagged) {
  if (prototypes.empty()) throw Error("build_count_matrix: no rows");
  CountMatrix m;
  std::set<std::string> columns;
  for (const auto& [label, vec] : prototypes) {
    SparseVector row;
    for (const auto& [f, w] : vec) {
      if (side_tagged) {
        if (strip_side(f).size() == f.size()) {
          throw Error("build_count_matrix: feature '" + f + "' of row '" + label +
                      "' is not side-tagged");
        }
        row.add(f, w);
      } else {
        row.add(std::string(strip_side(f)), w);
      }
    }
    for (const auto& [f, w] : row) columns.insert(f);
    m.labels.push_back(label);
    m.rows.push_back(std::move(row));
  }
  m.columns.assign(columns.begin(), columns.end());
  return m;
}

namespace {

struct Marginals {
  std::vector<double> row_sums;
  std::unordered_map<std::string, double> column_sums;
  double total = 0.0;
};

Marginals marginals(const CountMatrix& m) {
  Marginals out;
  out.row_sums.reserve(m.rows.size());
  for (const auto& row : m.rows) {
    double s = 0.0;
    for (const auto& [f, c] : row) {
      s += c;
      out.column_sums[f] += c;
    }
    out.row_sums.push_back(s);
    out.total += s;
  }
  if (!(out.total > 0.0)) throw Error("ppmi_transform: empty distribution");
  return out;
}

SparseVector ppmi_row(const SparseVector& row, double row_sum, const Marginals& mg) {
  SparseVector out;
  for (const auto& [f, c] : row) {
    const double pmi = std::log2(c * mg.total / (row_sum * mg.column_sums.at(f)));
    if (pmi > 0.0) out.set(f, pmi);
  }
  return out;
}

SparseMatrix with_same_shape(const CountMatrix& m) {
  SparseMatrix out;
  out.labels = m.labels;
  out.columns = m.columns;
  out.rows.resize(m.rows.size());
  return out;
}

}  // namespace

SparseMatrix ppmi_transform(const CountMatrix& m) {
  const Marginals mg = marginals(m);
  SparseMatrix out = with_same_shape(m);
  const long n = static_cast<long>(m.rows.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < n; ++i) {
    out.rows[i] = ppmi_row(m.rows[i], mg.row_sums[i], mg);
  }
  return out;
}

SparseMatrix ppmi_transform_serial(const CountMatrix& m) {
  const Marginals mg = marginals(m);
  SparseMatrix out = with_same_shape(m);
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    out.rows[i] = ppmi_row(m.rows[i], mg.row_sums[i], mg);
  }
  return out;
}

std::size_t RankedFeatureList::rank(const std::string& feature) const {
  auto it = rank_of_.find(feature);
  return it == rank_of_.end() ? 0 : it->second;
}

SparseVector RankedFeatureList::to_vector() const {
  SparseVector v;
  for (const auto& [f, w] : items_) v.set(f, w);
  return v;
}

RankedFeatureList rank_features(const SparseVector& v, std::size_t cap) {
  if (cap == 0) throw Error("rank_features: cap must be positive");
  RankedFeatureList out;
  out.items_.assign(v.begin(), v.end());
  // The map iterates in feature order, so a stable sort on weight alone
  // leaves ties feature-ascending.
  std::stable_sort(out.items_.begin(), out.items_.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (out.items_.size() > cap) out.items_.resize(cap);
  out.rank_of_.reserve(out.items_.size());
  for (std::size_t i = 0; i < out.items_.size(); ++i) out.rank_of_[out.items_[i].first] = i + 1;
  return out;
}

const std::vector<double>& LatentMatrix::row(std::string_view label) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) {
    throw Error("latent matrix has no row '" + std::string(label) + "'");
  }
  return rows[static_cast<std::size_t>(it - labels.begin())];
}

std::vector<double> LatentMatrix::project(const SparseVector& v) const {
  const std::size_t k = dimension();
  std::vector<double> out(k, 0.0);
  for (const auto& [f, w] : v) {
    auto it = std::lower_bound(columns.begin(), columns.end(), f);
    if (it == columns.end() || *it != f) continue;
    const double* b = basis.data() + static_cast<std::size_t>(it - columns.begin()) * k;
    for (std::size_t j = 0; j < k; ++j) out[j] += w * b[j];
  }
  return out;
}

LatentMatrix truncated_svd(const SparseMatrix& m, std::size_t k, std::uint64_t /*seed*/) {
  if (k == 0) throw Error("truncated_svd: k must be positive");
  if (m.rows.empty() || m.columns.empty()) throw Error("truncated_svd: empty matrix");

  const auto n_rows = static_cast<Eigen::Index>(m.rows.size());
  const auto n_cols = static_cast<Eigen::Index>(m.columns.size());
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n_rows, n_cols);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    for (const auto& [f, w] : m.rows[i]) {
      auto it = std::lower_bound(m.columns.begin(), m.columns.end(), f);
      dense(i, it - m.columns.begin()) = w;
    }
  }

  const auto full = static_cast<std::size_t>(std::min(n_rows, n_cols));
  if (k > full) {
    warn("truncated_svd: requested " + std::to_string(k) + " latent dimensions but the matrix is " +
         std::to_string(n_rows) + "x" + std::to_string(n_cols) + "; clamped to " +
         std::to_string(full));
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::MatrixXd u = svd.matrixU();
  Eigen::MatrixXd v = svd.matrixV();

  const double tol = sv.size() ? sv(0) * static_cast<double>(std::max(n_rows, n_cols)) *
                                     std::numeric_limits<double>::epsilon()
                               : 0.0;
  std::size_t rank = 0;
  while (rank < static_cast<std::size_t>(sv.size()) && sv(rank) > tol) ++rank;
  const std::size_t dim = std::min(k, rank);

  LatentMatrix out;
  out.labels = m.labels;
  out.columns = m.columns;
  out.singular_values.assign(sv.data(), sv.data() + dim);
  for (std::size_t j = 0; j < dim; ++j) {
    Eigen::Index arg = 0;
    v.col(j).cwiseAbs().maxCoeff(&arg);
    if (v(arg, j) < 0.0) {
      v.col(j) = -v.col(j);
      u.col(j) = -u.col(j);
    }
  }
  out.rows.assign(m.rows.size(), std::vector<double>(dim));
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    for (std::size_t j = 0; j < dim; ++j) out.rows[i][j] = u(i, j) * sv(j);
  }
  out.basis.resize(static_cast<std::size_t>(n_cols) * dim);
  for (Eigen::Index c = 0; c < n_cols; ++c) {
    for (std::size_t j = 0; j < dim; ++j) out.basis[c * dim + j] = v(c, j);
  }
  return out;
}

void write_sparse_matrix(std::ostream& out, const SparseMatrix& m) {
  out << "#labels: " << join(m.labels, ",") << '\n';
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    for (const auto& [f, w] : m.rows[i]) {
      out << m.labels[i] << '\t' << f << '\t' << format_double(w) << '\n';
    }
  }
}

SparseMatrix read_sparse_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, SparseVector> rows;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("#labels:", 0) == 0) {
      for (auto& l : split(trim(std::string_view(line).substr(8)), ',')) {
        if (!l.empty()) rows[l];
      }
      have_header = true;
      continue;
    }
    if (line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw Error("sparse matrix line " + std::to_string(line_no) + ": expected 3 fields");
    }
    if (!have_header) throw Error("sparse matrix: missing #labels header");
    auto it = rows.find(fields[0]);
    if (it == rows.end()) {
      throw Error("sparse matrix line " + std::to_string(line_no) + ": unknown row '" +
                  fields[0] + "'");
    }
    it->second.add(fields[1], parse_double(fields[2], "sparse matrix value"));
  }
  SparseMatrix m;
  std::set<std::string> columns;
  for (auto& [label, row] : rows) {
    for (const auto& [f, w] : row) columns.insert(f);
    m.labels.push_back(label);
    m.rows.push_back(std::move(row));
  }
  m.columns.assign(columns.begin(), columns.end());
  return m;
}

void write_latent_matrix(std::ostream& out, const LatentMatrix& m) {
  std::vector<std::string> sv;
  for (double s : m.singular_values) sv.push_back(format_double(s));
  out << "#singular_values: " << join(sv, ",") << '\n';
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    std::vector<std::string> vals;
    for (double x : m.rows[i]) vals.push_back(format_double(x));
    out << m.labels[i] << '\t' << join(vals, ",") << '\n';
  }
}

LatentMatrix read_latent_matrix(std::istream& in) {
  LatentMatrix m;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("#singular_values:", 0) == 0) {
      for (const auto& s : split(trim(std::string_view(line).substr(17)), ',')) {
        if (!s.empty()) m.singular_values.push_back(parse_double(s, "singular value"));
      }
      continue;
    }
    auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw Error("latent matrix line " + std::to_string(line_no) + ": expected 2 fields");
    }
    std::vector<double> row;
    for (const auto& s : split(fields[1], ',')) row.push_back(parse_double(s, "latent value"));
    if (row.size() != m.singular_values.size()) {
      throw Error("latent matrix line " + std::to_string(line_no) + ": dimension mismatch");
    }
    m.labels.push_back(fields[0]);
    m.rows.push_back(std::move(row));
  }
  if (!std::is_sorted(m.labels.begin(), m.labels.end())) {
    throw Error("latent matrix: rows must be label-sorted");
  }
  return m;
}

}  // namespace lexent
