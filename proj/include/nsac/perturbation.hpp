#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace nsac {

enum class BumpShape { none, sech2, bump };

// One localized disturbance: a * shape((x - center)/width). The "bump" shape
// (1 - r^2)^3 is C^2 with compact support; sech^2 decays exponentially.
struct FieldPerturbation {
  BumpShape shape = BumpShape::none;
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;

  double operator()(double x) const {
    if (shape == BumpShape::none || amplitude == 0.0) return 0.0;
    const double r = (x - center) / width;
    if (shape == BumpShape::sech2) {
      const double c = std::cosh(r);
      return amplitude / (c * c);
    }
    const double r2 = r * r;
    if (r2 >= 1.0) return 0.0;
    const double s = 1.0 - r2;
    return amplitude * s * s * s;
  }

  void validate() const {
    if (shape != BumpShape::none && !(width > 0.0))
      throw std::invalid_argument("FieldPerturbation: width must be > 0");
  }
};

inline BumpShape bump_shape_from_string(const std::string& s) {
  if (s == "none") return BumpShape::none;
  if (s == "sech2") return BumpShape::sech2;
  if (s == "bump") return BumpShape::bump;
  throw std::invalid_argument("unknown perturbation shape: " + s);
}

inline const char* to_string(BumpShape s) {
  switch (s) {
    case BumpShape::none: return "none";
    case BumpShape::sech2: return "sech2";
    case BumpShape::bump: return "bump";
  }
  return "none";
}

// Initial disturbances of (v, u, theta, chi) relative to the background wave;
// xi perturbs chi around 1.
struct PerturbationSet {
  FieldPerturbation phi, psi, zeta, xi;

  void validate() const {
    phi.validate();
    psi.validate();
    zeta.validate();
    xi.validate();
  }
};

}  // namespace nsac
