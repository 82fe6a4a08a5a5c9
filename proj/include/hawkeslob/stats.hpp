#pragma once

#include "hawkeslob/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace hawkeslob {

struct MomentAccumulator {
  std::size_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }
  double mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
  // unbiased sample variance
  double variance() const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double m = sum / n;
    return std::max(0.0, (sum_sq - n * m * m) / (n - 1.0));
  }
  double std_error_of_mean() const {
    return count == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count));
  }
};

// Kolmogorov-Smirnov statistic of a sample against the unit exponential law.
inline double ks_statistic_unit_exponential(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double u = 1.0 - std::exp(-sample[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(u - lo, hi - u));
  }
  return d;
}

// Two-sample Kolmogorov-Smirnov statistic, sup |F_a - F_b|.
inline double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const double x = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] <= x) ++ia;
    while (ib < b.size() && b[ib] <= x) ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }
  return d;
}

// Asymptotic critical coefficient c(alpha) = sqrt(-ln(alpha/2)/2):
// reject at level alpha when D > c(alpha)/sqrt(n) (one sample) or
// D > c(alpha)*sqrt((n+m)/(n*m)) (two samples).
inline double ks_critical_coefficient(double alpha) {
  return std::sqrt(-std::log(alpha / 2.0) / 2.0);
}

inline double ks_critical_one_sample(double alpha, std::size_t n) {
  return ks_critical_coefficient(alpha) / std::sqrt(static_cast<double>(n));
}

inline double ks_critical_two_sample(double alpha, std::size_t n, std::size_t m) {
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return ks_critical_coefficient(alpha) * std::sqrt((nn + mm) / (nn * mm));
}

// Sample covariance of observations stored as rows (unbiased, mean-centered).
inline Matrix sample_covariance(const Matrix& observations) {
  const Index n = observations.rows();
  if (n < 2) return Matrix::Zero(observations.cols(), observations.cols());
  const Eigen::RowVectorXd mean = observations.colwise().mean();
  const Matrix centered = observations.rowwise() - mean;
  return centered.transpose() * centered / static_cast<double>(n - 1);
}

inline double frobenius_relative_error(const Matrix& approx, const Matrix& reference) {
  const double ref = reference.norm();
  if (ref == 0.0) return approx.norm() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return (approx - reference).norm() / ref;
}

}  // namespace hawkeslob
