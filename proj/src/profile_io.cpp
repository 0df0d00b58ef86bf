#include "stratres/profile_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "stratres/errors.hpp"

namespace stratres {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(where + "." + key, "unknown key");
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(where + "." + key, "missing");
  }
  return obj.at(key);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ValidationError(field, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(field, "must be finite");
  return x;
}

double positive(const json& v, const std::string& field) {
  const double x = number(v, field);
  if (!(x > 0.0)) throw ValidationError(field, "must be positive, got " + v.dump());
  return x;
}

std::vector<double> number_list(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) throw ValidationError(field, "must be a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// Returns (c, m) for an object holding either rho/chi or c/m.
std::pair<double, double> material(const json& obj, const std::string& where) {
  const bool has_rc = obj.contains("rho") || obj.contains("chi");
  const bool has_cm = obj.contains("c") || obj.contains("m");
  if (has_rc && has_cm) {
    throw ValidationError(where, "give either rho/chi or c/m, not both");
  }
  if (has_rc) {
    const HalfSpace hs(positive(require(obj, where, "rho"), where + ".rho"),
                       positive(require(obj, where, "chi"), where + ".chi"));
    return {hs.c(), hs.m()};
  }
  if (has_cm) {
    return {positive(require(obj, where, "c"), where + ".c"),
            positive(require(obj, where, "m"), where + ".m")};
  }
  throw ValidationError(where, "needs rho/chi or c/m");
}

HalfSpace half_space(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where, "must be an object");
  reject_unknown(obj, where, {"rho", "chi", "c", "m"});
  const auto [c, m] = material(obj, where);
  return HalfSpace::from_speed_and_m(c, m);
}

std::pair<double, double> slope_pair(const json& obj, const char* key, const std::string& field,
                                     const std::vector<double>& z, const std::vector<double>& y) {
  if (obj.contains(key)) {
    const auto v = number_list(obj.at(key), field);
    if (v.size() != 2) throw ValidationError(field, "must hold exactly two slopes");
    return {v[0], v[1]};
  }
  return {four_point_end_slope(z, y, true), four_point_end_slope(z, y, false)};
}

LayerProfile layer(const json& obj) {
  const std::string where = "layer";
  if (!obj.is_object()) throw ValidationError(where, "must be an object");
  const json& kind_v = require(obj, where, "kind");
  if (!kind_v.is_string()) throw ValidationError("layer.kind", "must be a string");
  const std::string kind = kind_v.get<std::string>();

  if (kind == "constant") {
    reject_unknown(obj, where, {"kind", "thickness", "rho", "chi", "c", "m"});
    const double h = positive(require(obj, where, "thickness"), "layer.thickness");
    const auto [c, m] = material(obj, where);
    return LayerProfile(h, ConstantLayer{c, m});
  }
  if (kind == "polynomial") {
    reject_unknown(obj, where, {"kind", "thickness", "c", "m"});
    const double h = positive(require(obj, where, "thickness"), "layer.thickness");
    return LayerProfile(h, PolynomialLayer{number_list(require(obj, where, "c"), "layer.c"),
                                           number_list(require(obj, where, "m"), "layer.m")});
  }
  if (kind == "spline") {
    reject_unknown(obj, where, {"kind", "thickness", "samples", "c_end_slopes", "m_end_slopes"});
    const double h = positive(require(obj, where, "thickness"), "layer.thickness");
    const json& rows = require(obj, where, "samples");
    if (!rows.is_array()) throw ValidationError("layer.samples", "must be an array of [z, c, m]");
    if (rows.size() < 4) {
      throw ValidationError("layer.samples", "spline mode needs at least 4 samples, got " +
                                                 std::to_string(rows.size()));
    }
    std::vector<double> z, c, m;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string f = "layer.samples[" + std::to_string(i) + "]";
      const auto row = number_list(rows[i], f);
      if (row.size() != 3) throw ValidationError(f, "must be [z, c, m]");
      z.push_back(row[0]);
      c.push_back(positive(rows[i][1], f + ".c"));
      m.push_back(positive(rows[i][2], f + ".m"));
    }
    const auto [cl, cr] = slope_pair(obj, "c_end_slopes", "layer.c_end_slopes", z, c);
    const auto [ml, mr] = slope_pair(obj, "m_end_slopes", "layer.m_end_slopes", z, m);
    return LayerProfile(h, SplineLayer{ClampedCubicSpline(z, c, cl, cr),
                                       ClampedCubicSpline(z, m, ml, mr)});
  }
  if (kind == "stack") {
    reject_unknown(obj, where, {"kind", "thickness", "sublayers"});
    const json& subs = require(obj, where, "sublayers");
    if (!subs.is_array() || subs.empty()) {
      throw ValidationError("layer.sublayers", "must be a non-empty array");
    }
    StackLayer stack;
    double total = 0.0;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      const std::string f = "layer.sublayers[" + std::to_string(i) + "]";
      if (!subs[i].is_object()) throw ValidationError(f, "must be an object");
      reject_unknown(subs[i], f, {"thickness", "rho", "chi", "c", "m"});
      const double t = positive(require(subs[i], f, "thickness"), f + ".thickness");
      const auto [c, m] = material(subs[i], f);
      stack.sublayers.push_back({t, c, m});
      total += t;
    }
    const double h = obj.contains("thickness")
                         ? positive(obj.at("thickness"), "layer.thickness")
                         : total;
    return LayerProfile(h, std::move(stack));
  }
  throw ValidationError("layer.kind", "unknown kind '" + kind + "'");
}

}  // namespace

MediumModel build_profile(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("profile", std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("profile", "top level must be an object");
  reject_unknown(doc, "profile", {"name", "left", "right", "layer"});
  HalfSpace left = half_space(require(doc, "profile", "left"), "left");
  HalfSpace right = half_space(require(doc, "profile", "right"), "right");
  LayerProfile lay = layer(require(doc, "profile", "layer"));
  return MediumModel(left, std::move(lay), right);
}

MediumModel load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("profile", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return build_profile(ss.str());
}

}  // namespace stratres
