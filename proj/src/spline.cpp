#include "stratres/spline.hpp"

#include <algorithm>
#include <array>
#include <cstddef>

#include "stratres/errors.hpp"

namespace stratres {

ClampedCubicSpline::ClampedCubicSpline(std::span<const double> x,
                                       std::span<const double> y,
                                       double slope_left, double slope_right)
    : x_(x.begin(), x.end()),
      y_(y.begin(), y.end()),
      slope_left_(slope_left),
      slope_right_(slope_right) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw ValidationError("samples", "spline needs matching x/y with at least 2 points");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw ValidationError("samples", "spline abscissae must be strictly increasing");
    }
  }

  // Tridiagonal system for the knot second derivatives M_i:
  //   h_{i-1} M_{i-1} + 2(h_{i-1}+h_i) M_i + h_i M_{i+1} = 6(s_i - s_{i-1})
  // closed by the clamped end rows.
  std::vector<double> a(n), b(n), c(n), d(n);
  auto h = [&](std::size_t i) { return x_[i + 1] - x_[i]; };
  auto s = [&](std::size_t i) { return (y_[i + 1] - y_[i]) / h(i); };

  b[0] = 2.0 * h(0);
  c[0] = h(0);
  d[0] = 6.0 * (s(0) - slope_left_);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    a[i] = h(i - 1);
    b[i] = 2.0 * (h(i - 1) + h(i));
    c[i] = h(i);
    d[i] = 6.0 * (s(i) - s(i - 1));
  }
  a[n - 1] = h(n - 2);
  b[n - 1] = 2.0 * h(n - 2);
  d[n - 1] = 6.0 * (slope_right_ - s(n - 2));

  // Thomas algorithm; the matrix is strictly diagonally dominant.
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  m2_.assign(n, 0.0);
  m2_[n - 1] = d[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    m2_[i] = (d[i] - c[i] * m2_[i + 1]) / b[i];
  }
}

Jet ClampedCubicSpline::operator()(double xq) const {
  const std::size_t n = x_.size();
  std::size_t k = 0;
  if (xq >= x_[n - 1]) {
    k = n - 2;
  } else if (xq > x_[0]) {
    k = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), xq) - x_.begin()) - 1;
  }
  const double hk = x_[k + 1] - x_[k];
  const double A = (x_[k + 1] - xq) / hk;
  const double B = (xq - x_[k]) / hk;
  const double Mk = m2_[k];
  const double Mk1 = m2_[k + 1];

  Jet j;
  j.value = A * y_[k] + B * y_[k + 1] +
            ((A * A * A - A) * Mk + (B * B * B - B) * Mk1) * hk * hk / 6.0;
  j.d1 = (y_[k + 1] - y_[k]) / hk - (3.0 * A * A - 1.0) / 6.0 * hk * Mk +
         (3.0 * B * B - 1.0) / 6.0 * hk * Mk1;
  j.d2 = A * Mk + B * Mk1;
  return j;
}

double four_point_end_slope(std::span<const double> x, std::span<const double> y,
                            bool left_end) {
  const std::size_t n = x.size();
  if (n < 4 || y.size() != n) {
    throw ValidationError("samples", "end slope estimate needs at least 4 samples");
  }
  std::array<double, 4> xs{}, ys{};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t idx = left_end ? i : n - 4 + i;
    xs[i] = x[idx];
    ys[i] = y[idx];
  }
  const double x0 = left_end ? xs[0] : xs[3];
  // Derivative of the Lagrange interpolant at x0.
  double slope = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    double denom = 1.0;
    for (std::size_t k = 0; k < 4; ++k) {
      if (k != j) denom *= xs[j] - xs[k];
    }
    double dnum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      if (k == j) continue;
      double prod = 1.0;
      for (std::size_t l = 0; l < 4; ++l) {
        if (l != j && l != k) prod *= x0 - xs[l];
      }
      dnum += prod;
    }
    slope += ys[j] * dnum / denom;
  }
  return slope;
}

}  // namespace stratres
