#pragma once

#include <filesystem>
#include <string>

#include "stratres/profile.hpp"

namespace stratres {

/// Builds a MediumModel from a JSON profile specification.
///
/// Grammar (all keys are case-sensitive; unknown keys are rejected):
///
///   {
///     "name":  string                                   (optional)
///     "left":  material,
///     "right": material,
///     "layer": {
///       "kind": "constant" | "polynomial" | "spline" | "stack",
///       "thickness": number                             (optional for "stack")
///       constant:   material keys inline
///       polynomial: "c": [a0, a1, ...], "m": [b0, b1, ...]   (ascending powers of z)
///       spline:     "samples": [[z, c, m], ...]  (>= 4 rows, z from 0 to thickness),
///                   "c_end_slopes": [dc(0), dc(h)]  (optional),
///                   "m_end_slopes": [dm(0), dm(h)]  (optional)
///       stack:      "sublayers": [ { "thickness": number, material keys }, ... ]
///     }
///   }
///
/// where a material is exactly one of { "rho", "chi" } or { "c", "m" }.
/// Omitted spline end slopes default to the derivative of the cubic through
/// the four samples nearest that end.
MediumModel build_profile(const std::string& json_text);
MediumModel load_profile(const std::filesystem::path& path);

}  // namespace stratres
