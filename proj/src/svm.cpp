#include "lexent/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lexent/common.hpp"

namespace lexent {

Dense normalized(const Dense& x) {
  double norm = 0.0;
  for (double v : x) norm += v * v;
  if (norm == 0.0) return x;
  norm = std::sqrt(norm);
  Dense out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] / norm;
  return out;
}

double poly_kernel(const Dense& x, const Dense& y, int degree) {
  double dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
  const double base = dot + 1.0;
  double out = 1.0;
  for (int d = 0; d < degree; ++d) out *= base;
  return out;
}

std::vector<double> gram_matrix(const std::vector<Dense>& xs, int degree) {
  const std::size_t n = xs.size();
  std::vector<double> k(n * n);
  const long rows = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i * n + j] = poly_kernel(xs[i], xs[j], degree);
  }
  return k;
}

std::vector<double> gram_matrix_serial(const std::vector<Dense>& xs, int degree) {
  const std::size_t n = xs.size();
  std::vector<double> k(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i * n + j] = poly_kernel(xs[i], xs[j], degree);
  }
  return k;
}

double SvmModel::decision(const Dense& x) const {
  double f = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) f += coef[i] * poly_kernel(support[i], x, degree);
  return f - rho;
}

SvmModel train_svm(const std::vector<Dense>& xs, const std::vector<int>& labels, int degree,
                   const SvmOptions& options) {
  const std::size_t n = xs.size();
  if (n != labels.size()) throw Error("train_svm: label count mismatch");
  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y == 1) has_pos = true;
    else if (y == -1) has_neg = true;
    else throw Error("train_svm: labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw Error("degenerate training set");
  if (!(options.c > 0.0)) throw Error("train_svm: regularization must be positive");

  const std::vector<double> kmat = gram_matrix(xs, degree);
  auto q = [&](std::size_t i, std::size_t j) { return labels[i] * labels[j] * kmat[i * n + j]; };
  const double upper = options.c / static_cast<double>(n);
  constexpr double tau = 1e-12;

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  auto is_up = [&](std::size_t t) {
    return (labels[t] == 1 && alpha[t] < upper) || (labels[t] == -1 && alpha[t] > 0.0);
  };
  auto is_low = [&](std::size_t t) {
    return (labels[t] == 1 && alpha[t] > 0.0) || (labels[t] == -1 && alpha[t] < upper);
  };

  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (is_up(t) && -labels[t] * grad[t] > gmax) {
        gmax = -labels[t] * grad[t];
        i = t;
      }
    }
    double gmin = std::numeric_limits<double>::infinity();
    double best_gain = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!is_low(t)) continue;
      const double v = -labels[t] * grad[t];
      gmin = std::min(gmin, v);
      if (i == n) continue;
      const double b = gmax - v;
      if (b <= 0.0) continue;
      double a = kmat[i * n + i] + kmat[t * n + t] - 2.0 * kmat[i * n + t];
      if (a <= 0.0) a = tau;
      const double gain = -(b * b) / a;
      if (gain < best_gain) {
        best_gain = gain;
        j = t;
      }
    }
    if (i == n || j == n || gmax - gmin < options.tolerance) break;

    const double old_i = alpha[i];
    const double old_j = alpha[j];
    double quad = kmat[i * n + i] + kmat[j * n + j] - 2.0 * kmat[i * n + j];
    if (quad <= 0.0) quad = tau;
    if (labels[i] != labels[j]) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > upper) {
          alpha[i] = upper;
          alpha[j] = upper - diff;
        }
      } else if (alpha[j] > upper) {
        alpha[j] = upper;
        alpha[i] = upper + diff;
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > upper) {
        if (alpha[i] > upper) {
          alpha[i] = upper;
          alpha[j] = sum - upper;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > upper) {
        if (alpha[j] > upper) {
          alpha[j] = upper;
          alpha[i] = sum - upper;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q(t, i) * di + q(t, j) * dj;
  }

  // rho from free variables, else the midpoint of the feasible interval.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = labels[t] * grad[t];
    const bool at_upper = alpha[t] >= upper;
    const bool at_lower = alpha[t] <= 0.0;
    if (at_upper) {
      if (labels[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (at_lower) {
      if (labels[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }

  SvmModel model;
  model.degree = degree;
  model.rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (ub + lb) / 2.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      model.support.push_back(xs[t]);
      model.coef.push_back(labels[t] * alpha[t]);
    }
  }
  return model;
}

double PlattSigmoid::probability(double f) const {
  const double z = a * f + b;
  // Evaluated on the stable side of the exponential.
  if (z >= 0.0) return std::exp(-z) / (1.0 + std::exp(-z));
  return 1.0 / (1.0 + std::exp(z));
}

PlattSigmoid fit_platt(const std::vector<double>& dec, const std::vector<int>& labels) {
  const std::size_t n = dec.size();
  double prior1 = 0.0, prior0 = 0.0;
  for (int y : labels) (y > 0 ? prior1 : prior0) += 1.0;
  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = labels[i] > 0 ? hi : lo;

  constexpr int max_iter = 100;
  constexpr double min_step = 1e-10;
  constexpr double sigma = 1e-12;
  constexpr double eps = 1e-5;

  double a = 0.0;
  double b = std::log((prior0 + 1.0) / (prior1 + 1.0));
  auto objective = [&](double aa, double bb) {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = dec[i] * aa + bb;
      f += z >= 0 ? t[i] * z + std::log1p(std::exp(-z)) : (t[i] - 1.0) * z + std::log1p(std::exp(z));
    }
    return f;
  };
  double fval = objective(a, b);

  for (int iter = 0; iter < max_iter; ++iter) {
    double h11 = sigma, h22 = sigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = dec[i] * a + b;
      double p, q;
      if (z >= 0) {
        p = std::exp(-z) / (1.0 + std::exp(-z));
        q = 1.0 / (1.0 + std::exp(-z));
      } else {
        p = 1.0 / (1.0 + std::exp(z));
        q = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = p * q;
      h11 += dec[i] * dec[i] * d2;
      h22 += d2;
      h21 += dec[i] * d2;
      const double d1 = t[i] - p;
      g1 += dec[i] * d1;
      g2 += d1;
    }
    if (std::fabs(g1) < eps && std::fabs(g2) < eps) break;

    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    while (step >= min_step) {
      const double na = a + step * da;
      const double nb = b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 0.0001 * step * gd) {
        a = na;
        b = nb;
        fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < min_step) break;
  }
  return PlattSigmoid{a, b};
}

std::vector<double> out_of_fold_decisions(const std::vector<Dense>& xs, const std::vector<int>& labels,
                                          int degree, const SvmOptions& options, std::size_t folds,
                                          std::uint64_t seed) {
  const std::size_t n = xs.size();
  folds = std::max<std::size_t>(1, std::min(folds, n));
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  rng.shuffle(perm);

  std::vector<double> dec(n, 0.0);
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t begin = f * n / folds;
    const std::size_t end = (f + 1) * n / folds;
    std::vector<Dense> train_x;
    std::vector<int> train_y;
    for (std::size_t k = 0; k < n; ++k) {
      if (k >= begin && k < end) continue;
      train_x.push_back(xs[perm[k]]);
      train_y.push_back(labels[perm[k]]);
    }
    const bool pos = std::count(train_y.begin(), train_y.end(), 1) > 0;
    const bool neg = std::count(train_y.begin(), train_y.end(), -1) > 0;
    if (pos && neg) {
      const SvmModel m = train_svm(train_x, train_y, degree, options);
      for (std::size_t k = begin; k < end; ++k) dec[perm[k]] = m.decision(xs[perm[k]]);
    } else {
      const double constant = pos ? 1.0 : (neg ? -1.0 : 0.0);
      for (std::size_t k = begin; k < end; ++k) dec[perm[k]] = constant;
    }
  }
  return dec;
}

}  // namespace lexent
