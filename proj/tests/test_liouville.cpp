#include <doctest.h>

#include <random>
#include <sstream>

#include "stratres/errors.hpp"
#include "stratres/liouville.hpp"
#include "stratres/wronskian.hpp"
#include "support.hpp"

using namespace stratres;
using namespace testing;

namespace {

MediumModel with_layer(LayerProfile layer) {
  return MediumModel(HalfSpace::from_speed_and_m(1.0, 1.0), std::move(layer),
                     HalfSpace::from_speed_and_m(1.0, 1.0));
}

}  // namespace

TEST_CASE("travel time closed forms") {
  CHECK(travel_time(with_layer(LayerProfile(1.5e-3, ConstantLayer{1500.0, 1.0}))) ==
        doctest::Approx(1e-6).epsilon(1e-13));
  CHECK(travel_time(load("case2_poly")) == doctest::Approx(std::log(1.5)).epsilon(1e-13));
  // c = 1/(1 + z) through a spline would not be exact; a stack gives an exact sum.
  CHECK(travel_time(load("stack3")) == doctest::Approx(0.3 + 0.2 + 0.2).epsilon(1e-13));
  const double tau_recip = travel_time(with_layer(LayerProfile(1.0, PolynomialLayer{{1.0, 1.0}, {1.0}})));
  CHECK(tau_recip == doctest::Approx(std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("travel time is additive over a split") {
  // Same polynomial on [0, s] and the shifted polynomial on [s, h].
  const std::vector<double> c{1.0, 0.5, 0.3};
  for (double s : {0.1, 0.37, 0.8}) {
    const double whole = travel_time(with_layer(LayerProfile(1.0, PolynomialLayer{c, {1.0}})));
    const double left = travel_time(with_layer(LayerProfile(s, PolynomialLayer{c, {1.0}})));
    const std::vector<double> shifted{c[0] + c[1] * s + c[2] * s * s, c[1] + 2.0 * c[2] * s, c[2]};
    const double right = travel_time(with_layer(LayerProfile(1.0 - s, PolynomialLayer{shifted, {1.0}})));
    CHECK(left + right == doctest::Approx(whole).epsilon(1e-12));
  }
}

TEST_CASE("mean-value bracket: min c <= h / tau <= max c") {
  for (const char* name : {"case1_variable", "case2_poly", "case3_poly", "case2_spline", "stack3"}) {
    const auto model = load(name);
    double lo = INFINITY, hi = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const double c = model.layer().at(model.thickness() * k / 1000.0).c;
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    const double mean = model.thickness() / travel_time(model);
    CAPTURE(name);
    CHECK(mean >= lo * (1 - 1e-12));
    CHECK(mean <= hi * (1 + 1e-12));
  }
}

TEST_CASE("travel-time chart") {
  SUBCASE("affine for constant speed") {
    const TravelTimeChart chart(with_layer(LayerProfile(2.0, ConstantLayer{4.0, 1.0})));
    CHECK(chart.tau() == doctest::Approx(0.5));
    CHECK(chart.y_of_z(1.0) == doctest::Approx(0.25).epsilon(1e-13));
  }
  SUBCASE("logarithmic for c = 2 + z") {
    const auto chart = liouville_map(load("case2_poly"));
    CHECK(chart.y_minus() == 0.0);
    CHECK(chart.y_plus() == doctest::Approx(std::log(1.5)).epsilon(1e-13));
    CHECK(chart.y_of_z(0.5) == doctest::Approx(std::log(2.5 / 2.0)).epsilon(1e-12));
    CHECK(chart.z_of_y(chart.y_of_z(0.37)) == doctest::Approx(0.37).epsilon(1e-10));
  }
  SUBCASE("round trip at random points") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const char* name : {"case1_variable", "case3_poly", "case2_spline", "stack3"}) {
      const TravelTimeChart chart(load(name));
      double worst = 0.0;
      for (int k = 0; k < 1000; ++k) {
        const double z = u(rng);
        worst = std::max(worst, std::abs(chart.z_of_y(chart.y_of_z(z)) - z));
      }
      CAPTURE(name);
      CHECK(worst < 1e-10);
    }
  }
}

TEST_CASE("potential") {
  SUBCASE("vanishes for a constant layer and outside the layer") {
    const auto model = xi9();
    const TravelTimeChart chart(model);
    CHECK(potential(model, chart, 0.5) == 0.0);
    const auto smooth = load("case3_poly");
    const TravelTimeChart sc(smooth);
    CHECK(potential(smooth, sc, -0.1) == 0.0);
    CHECK(potential(smooth, sc, sc.tau() + 1e-9) == 0.0);
    CHECK(potential(smooth, sc, 1e6) == 0.0);
  }
  SUBCASE("c = 1 and constant chi: V = -m''/m") {
    // chi = c/m² constant needs c ∝ m²; with c = 1 take m = 1 + z(1 - z) and
    // accept the chi' term, then compare against the full formula by hand.
    const auto model = with_layer(LayerProfile(1.0, PolynomialLayer{{1.0}, {1.0, 1.0, -1.0}}));
    const TravelTimeChart chart(model);
    for (double z : {0.2, 0.5, 0.9}) {
      const double m = 1.0 + z * (1.0 - z), dm = 1.0 - 2.0 * z, d2m = -2.0;
      // chi'/chi = -2 m'/m when c is constant.
      const double expected = -(1.0 / m) * (-2.0 * dm / m * dm + d2m);
      CHECK(potential(model, chart, chart.y_of_z(z)) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
  SUBCASE("endpoint values reduce to -(c²/m) m'' when m' vanishes") {
    const auto model = load("case3_poly");
    const TravelTimeChart chart(model);
    const auto d = endpoint_data(model);
    CHECK(potential(model, chart, 0.0) ==
          doctest::Approx(-(d.c_minus * d.c_minus / d.m_minus) * d.d2m_minus).epsilon(1e-10));
    CHECK(potential(model, chart, chart.tau()) ==
          doctest::Approx(-(d.c_plus * d.c_plus / d.m_plus) * d.d2m_plus).epsilon(1e-10));
    // One-sided limits from inside.
    CHECK(potential(model, chart, 1e-9) == doctest::Approx(potential(model, chart, 0.0)).epsilon(1e-7));
  }
  SUBCASE("multi-sublayer stacks have no potential") {
    const auto model = load("stack3");
    const TravelTimeChart chart(model);
    CHECK_THROWS_AS(potential(model, chart, 0.1), DomainError);
  }
}

TEST_CASE("transform residual") {
  const int n = 800;
  auto residual = [&](const MediumModel& model, std::complex<double> w) {
    const TravelTimeChart chart(model);
    const WronskianEvaluator ev(model, IntegratorTolerances{1e-12, 1e-14});
    const auto z = uniform_travel_time_grid(chart, n);
    return verify_transform(model, chart, w, ev.jost_plus_samples(w, z));
  };
  CHECK(residual(xi9(), {1.0, 0.0}) < 1e-8);
  CHECK(residual(load("case2_poly"), {5.0, 0.0}) < 1e-6);
  CHECK(residual(load("case3_poly"), {12.0, -3.0}) < 1e-6);
  CHECK(residual(load("case2_spline"), {8.0, -1.0}) < 1e-6);

  const auto model = load("case2_poly");
  const TravelTimeChart chart(model);
  const WronskianEvaluator ev(model);
  const auto z = uniform_travel_time_grid(chart, n);
  CHECK_THROWS_AS(verify_transform(model, chart, 0.0, ev.jost_plus_samples(1.0, z)), DomainError);
  // Samples on a uniform z grid (not uniform in y) are rejected.
  std::vector<double> zu;
  for (int k = 0; k <= n; ++k) zu.push_back(static_cast<double>(k) / n);
  CHECK_THROWS_AS(verify_transform(model, chart, 1.0, ev.jost_plus_samples(1.0, zu)), DomainError);
}

TEST_CASE("chart CSV") {
  const auto model = load("case3_poly");
  const TravelTimeChart chart(model);
  std::ostringstream out;
  write_chart_csv(out, model, chart, 10);
  const std::string s = out.str();
  CHECK(s.rfind("y,z,V\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 12);
}
