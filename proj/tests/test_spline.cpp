#include <doctest.h>

#include <cmath>
#include <vector>

#include "stratres/errors.hpp"
#include "stratres/spline.hpp"

using namespace stratres;

TEST_CASE("clamped spline reproduces a cubic exactly") {
  auto f = [](double x) { return 1.0 + 2.0 * x - x * x + 0.5 * x * x * x; };
  auto df = [](double x) { return 2.0 - 2.0 * x + 1.5 * x * x; };
  auto d2f = [](double x) { return -2.0 + 3.0 * x; };
  const std::vector<double> x{0.0, 0.3, 0.45, 1.0, 1.7, 2.0};
  std::vector<double> y;
  for (double v : x) y.push_back(f(v));
  const ClampedCubicSpline s(x, y, df(0.0), df(2.0));
  for (double t = 0.0; t <= 2.0; t += 0.0625) {
    const Jet j = s(t);
    CHECK(j.value == doctest::Approx(f(t)).epsilon(1e-13));
    CHECK(j.d1 == doctest::Approx(df(t)).epsilon(1e-12));
    CHECK(j.d2 == doctest::Approx(d2f(t)).epsilon(1e-11));
  }
}

TEST_CASE("spline interpolates samples and honours end slopes") {
  const std::vector<double> x{0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<double> y{2.0, 2.25, 2.5, 2.75, 3.0};
  const ClampedCubicSpline s(x, y, 1.0, 1.0);
  CHECK(s(0.5).value == 2.5);
  CHECK(s(0.0).d1 == doctest::Approx(1.0));
  CHECK(s(1.0).d1 == doctest::Approx(1.0));

  const ClampedCubicSpline bent(x, y, 3.0, -1.0);
  CHECK(bent(0.0).d1 == doctest::Approx(3.0));
  CHECK(bent(1.0).d1 == doctest::Approx(-1.0));
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(bent(x[k]).value == doctest::Approx(y[k]));
}

TEST_CASE("spline is C2 across knots") {
  const std::vector<double> x{0.0, 0.2, 0.5, 0.6, 1.0};
  const std::vector<double> y{1.0, 0.5, 0.9, 1.4, 1.1};
  const ClampedCubicSpline s(x, y, 0.0, 2.0);
  for (std::size_t k = 1; k + 1 < x.size(); ++k) {
    const double e = 1e-7;
    CHECK(s(x[k] - e).d2 == doctest::Approx(s(x[k] + e).d2).epsilon(1e-5));
    // d1 moves by about 2e·d2 across the gap.
    CHECK(std::abs(s(x[k] - e).d1 - s(x[k] + e).d1) < 4.0 * e * (1.0 + std::abs(s(x[k]).d2)));
  }
}

TEST_CASE("four-point end slope is exact for cubics") {
  auto f = [](double x) { return x * x * x - x; };
  const std::vector<double> x{0.0, 0.1, 0.3, 0.4, 0.8, 1.0};
  std::vector<double> y;
  for (double v : x) y.push_back(f(v));
  CHECK(four_point_end_slope(x, y, true) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(four_point_end_slope(x, y, false) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("spline input validation") {
  const std::vector<double> x{0.0, 0.5, 0.4, 1.0};
  const std::vector<double> y{1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(ClampedCubicSpline(x, y, 0.0, 0.0), ValidationError);
  const std::vector<double> short_x{0.0};
  const std::vector<double> short_y{1.0};
  CHECK_THROWS_AS(ClampedCubicSpline(short_x, short_y, 0.0, 0.0), ValidationError);
}
