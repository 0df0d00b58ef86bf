#include <doctest.h>

#include <string>

#include "stratres/errors.hpp"
#include "stratres/profile_io.hpp"
#include "support.hpp"

using namespace stratres;
using namespace testing;

namespace {

std::string field_of(const std::string& json) {
  try {
    build_profile(json);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("constant layer from (c, m) and (rho, chi)") {
  const auto model = build_profile(R"({
    "left": {"c": 1.0, "m": 1.4142135623730951},
    "right": {"rho": 0.5, "chi": 0.5},
    "layer": {"kind": "constant", "thickness": 1.0, "c": 1.0, "m": 1.0}
  })");
  const auto mat = eval_material(model, 0.5);
  CHECK(mat.rho == doctest::Approx(1.0));
  CHECK(mat.chi == doctest::Approx(1.0));
  CHECK(model.right().m() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("spline samples are reproduced exactly") {
  const auto model = build_profile(R"({
    "left": {"c": 1.0, "m": 1.0},
    "right": {"c": 1.0, "m": 1.0},
    "layer": {"kind": "spline", "thickness": 1.0,
              "samples": [[0, 2, 1], [0.25, 2.25, 1], [0.5, 2.5, 1], [0.75, 2.75, 1], [1, 3, 1]]}
  })");
  CHECK(model.layer().at(0.5).c == 2.5);
  CHECK(model.layer().at(0.25).c == 2.25);
  // Default end slopes from the four nearest samples: exact for linear data.
  CHECK(model.layer().at(0.0).dc == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(model.layer().at(0.6).c == doctest::Approx(2.6).epsilon(1e-12));
}

TEST_CASE("explicit spline end slopes drive the endpoint derivatives") {
  const auto d = endpoint_data(load("case2_spline"));
  CHECK(d.dm_minus == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(d.dm_plus == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("stack thickness is the sum of sublayers") {
  const auto model = load("stack3");
  CHECK(model.thickness() == doctest::Approx(1.0));
}

TEST_CASE("validation errors name the offending field") {
  CHECK(field_of(R"({"left": {"rho": 1, "chi": -1}, "right": {"c": 1, "m": 1},
                     "layer": {"kind": "constant", "thickness": 1, "c": 1, "m": 1}})") == "left.chi");
  CHECK(field_of(R"({"left": {"c": 1, "m": 1}, "right": {"c": 1, "m": 1},
                     "layer": {"kind": "spline", "thickness": 1,
                               "samples": [[0, 1, 1], [0.5, 1, 1], [1, 1, 1]]}})") == "layer.samples");
  CHECK(field_of(R"({"left": {"c": 1, "m": 1}, "right": {"c": 1, "m": 1}, "colour": "red",
                     "layer": {"kind": "constant", "thickness": 1, "c": 1, "m": 1}})") == "profile.colour");
  CHECK(field_of(R"({"left": {"c": 1, "m": 1, "rho": 2}, "right": {"c": 1, "m": 1},
                     "layer": {"kind": "constant", "thickness": 1, "c": 1, "m": 1}})") == "left");
  CHECK(field_of(R"({"left": {"c": 1, "m": 1}, "right": {"c": 1, "m": 1},
                     "layer": {"kind": "wavy", "thickness": 1}})") == "layer.kind");
  CHECK(field_of(R"({"left": {"c": 1, "m": 1}, "right": {"c": 1, "m": 1},
                     "layer": {"kind": "polynomial", "thickness": 1, "c": [1, -3], "m": [1]}})") ==
        "layer.c");
  CHECK(field_of("{not json") == "profile");
  CHECK_THROWS_AS(load_profile(profile_path("bad_negative_chi")), ValidationError);
  CHECK_THROWS_AS(load_profile("/nonexistent/profile.json"), ValidationError);
}
