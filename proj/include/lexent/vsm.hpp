#pragma once

// Sparse vector-space machinery: count matrices, PPMI weighting, ranked
// feature lists and truncated SVD.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lexent {

// Feature-id -> non-negative weight. Zero weights are never stored.
class SparseVector {
 public:
  using Map = std::map<std::string, double>;

  SparseVector() = default;
  SparseVector(std::initializer_list<std::pair<const std::string, double>> init);

  void set(const std::string& feature, double weight);
  void add(const std::string& feature, double weight);
  double get(const std::string& feature) const;
  bool contains(const std::string& feature) const { return entries_.count(feature) > 0; }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double total() const;

  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }

  bool operator==(const SparseVector&) const = default;

 private:
  Map entries_;
};

// Rows are kept label-sorted; `columns` is the sorted union of feature-ids.
struct SparseMatrix {
  std::vector<std::string> labels;
  std::vector<SparseVector> rows;
  std::vector<std::string> columns;

  std::size_t row_index(std::string_view label) const;  // throws if absent
  const SparseVector& row(std::string_view label) const { return rows[row_index(label)]; }
  bool has_row(std::string_view label) const;
};

using CountMatrix = SparseMatrix;

// Side-tagged feature ids: "L:tok" / "R:tok". Tokens never contain ':'.
enum class Side { Left, Right };
std::string side_feature(Side side, std::string_view token);
// Returns the bare token of a side-tagged id, or the id itself if untagged.
std::string_view strip_side(std::string_view feature);

// With side_tagged the input keys are kept as-is and must all be side-tagged;
// without it any tags are stripped and the two sides' counts summed.
CountMatrix build_count_matrix(const std::map<std::string, SparseVector>& prototypes,
                               bool side_tagged = false);

// weight(w,c) = max(0, log2(p(w,c) / (p(w) p(c)))), marginals from the whole
// matrix. Rows are processed in parallel.
SparseMatrix ppmi_transform(const CountMatrix& m);
// Single-threaded reference of ppmi_transform.
SparseMatrix ppmi_transform_serial(const CountMatrix& m);

// Nonzero features in (weight desc, feature asc) order, truncated to a cap.
// rank() is 1-based; 0 means absent.
class RankedFeatureList {
 public:
  RankedFeatureList() = default;

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::size_t rank(const std::string& feature) const;
  bool contains(const std::string& feature) const { return rank(feature) != 0; }
  const std::pair<std::string, double>& at_rank(std::size_t r) const { return items_.at(r - 1); }
  const std::vector<std::pair<std::string, double>>& items() const { return items_; }
  SparseVector to_vector() const;

 private:
  friend RankedFeatureList rank_features(const SparseVector&, std::size_t);
  std::vector<std::pair<std::string, double>> items_;
  std::unordered_map<std::string, std::size_t> rank_of_;
};

RankedFeatureList rank_features(const SparseVector& v, std::size_t cap);

// Rank-k factorisation of a weighted matrix. Each row label maps to its row
// of U_k * S_k; `basis` (columns x k, row-major) folds new rows into the same
// space.
struct LatentMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::vector<double> singular_values;
  std::vector<std::string> columns;
  std::vector<double> basis;

  std::size_t dimension() const { return singular_values.size(); }
  const std::vector<double>& row(std::string_view label) const;
  // x * V_k for a sparse row over the same feature space. Features outside
  // `columns` contribute nothing.
  std::vector<double> project(const SparseVector& v) const;
};

inline constexpr std::size_t kDefaultLatentDim = 100;

// Dense SVD of the matrix. Dimension is min(k, numerical rank); asking for
// more than min(rows, cols) emits a warning. Singular vector signs are fixed
// so the largest-magnitude entry of each right vector is positive. The seed is
// accepted for interface stability; the direct solver does not use it.
LatentMatrix truncated_svd(const SparseMatrix& m, std::size_t k, std::uint64_t seed = 0);

// Sparse matrix file: "#labels: l1,l2,..." then row \t feature \t value.
void write_sparse_matrix(std::ostream& out, const SparseMatrix& m);
SparseMatrix read_sparse_matrix(std::istream& in);

// Latent matrix file: "#singular_values: s1,...,sk" then label \t v1,...,vk.
// The fold-in basis is not persisted.
void write_latent_matrix(std::ostream& out, const LatentMatrix& m);
LatentMatrix read_latent_matrix(std::istream& in);

}  // namespace lexent
