#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "zaslab/errors.hpp"

namespace zaslab {

/// Natural cubic spline (zero second derivative at both ends) through
/// strictly increasing abscissae. No extrapolation.
class NaturalCubicSpline {
 public:
  struct Sample {
    double value;
    double first;
    double second;
  };

  NaturalCubicSpline() = default;

  NaturalCubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) {
      throw DomainError("NaturalCubicSpline: need at least 3 samples of matching size");
    }
    for (std::size_t i = 1; i < n; ++i) {
      if (!(x_[i] > x_[i - 1])) throw DomainError("NaturalCubicSpline: abscissae must strictly increase");
    }
    // Tridiagonal solve (Thomas) for interior second derivatives.
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      diag[i] = 2.0 * (h0 + h1);
      upper[i] = h1;
      rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
      if (i > 1) {
        const double w = h0 / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
      }
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
      if (i == 1) break;
    }
  }

  [[nodiscard]] double front() const { return x_.front(); }
  [[nodiscard]] double back() const { return x_.back(); }
  [[nodiscard]] std::span<const double> abscissae() const { return x_; }
  [[nodiscard]] std::span<const double> ordinates() const { return y_; }

  [[nodiscard]] Sample operator()(double x) const {
    if (x < x_.front() || x > x_.back()) {
      throw InterpolationError("NaturalCubicSpline: query outside sample range");
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(std::distance(x_.begin(), it));
    i = std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    const double value = a * y_[i] + b * y_[i + 1] +
                         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    const double first = (y_[i + 1] - y_[i]) / h +
                         (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
    const double second = a * m_[i] + b * m_[i + 1];
    return {value, first, second};
  }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;
};

}  // namespace zaslab
