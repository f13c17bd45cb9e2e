#pragma once

// Binary kernel SVM (SMO with second-order working-set selection) and Platt
// sigmoid calibration. The objective is 1/2 |w|^2 + C * mean(hinge), i.e.
// each dual variable is bounded by C / n, so duplicating the training set
// leaves the decision function unchanged.

#include <cstdint>
#include <vector>

namespace lexent {

using Dense = std::vector<double>;

// Unit-length copy; the zero vector is returned unchanged.
Dense normalized(const Dense& x);

// (x . y + 1)^degree.
double poly_kernel(const Dense& x, const Dense& y, int degree);

// Row-major n x n kernel matrix, rows filled in parallel.
std::vector<double> gram_matrix(const std::vector<Dense>& xs, int degree);
std::vector<double> gram_matrix_serial(const std::vector<Dense>& xs, int degree);

struct SvmOptions {
  double c = 1.0;
  double tolerance = 1e-6;
  std::size_t max_iterations = 1'000'000;
};

struct SvmModel {
  int degree = 2;
  std::vector<Dense> support;  // as given to train_svm
  std::vector<double> coef;    // alpha_i * y_i
  double rho = 0.0;

  double decision(const Dense& x) const;
};

// Labels are +1 / -1 and both must be present.
SvmModel train_svm(const std::vector<Dense>& xs, const std::vector<int>& labels, int degree,
                   const SvmOptions& options = {});

struct PlattSigmoid {
  double a = 0.0;
  double b = 0.0;
  // P(y = +1 | f) = 1 / (1 + exp(a f + b)).
  double probability(double decision) const;
};

// Newton fit with Platt's smoothed targets (the Lin-Lin-Weng formulation).
PlattSigmoid fit_platt(const std::vector<double>& decisions, const std::vector<int>& labels);

// Decision values of each example from a model that did not see it:
// `folds`-way split drawn from `seed`.
std::vector<double> out_of_fold_decisions(const std::vector<Dense>& xs, const std::vector<int>& labels,
                                          int degree, const SvmOptions& options, std::size_t folds,
                                          std::uint64_t seed);

}  // namespace lexent
