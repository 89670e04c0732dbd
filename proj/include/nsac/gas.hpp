#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace nsac {

enum class WaveFamily : int { one = 1, three = 3 };

// Ideal-gas closure in Lagrangian variables. Two independent variable pairs are
// used throughout: (v, theta) for the solver and (v, s) along isentropes, with
//   p(v,theta)   = R theta / v,
//   theta(v,s)   = (A/R) v^(1-gamma) exp((gamma-1) s / R),
//   s(v,theta)   = R/(gamma-1) ln( (R/A) theta v^(gamma-1) ).
// The exp((gamma-1)s/R) convention is used everywhere.
struct GasModel {
  double R;
  double A;
  double gamma;
  double nu;
  double kappa;
  double eps_interface = 1.0;  // diffuse-interface thickness, fixed to 1

  GasModel(double R_, double A_, double gamma_, double nu_, double kappa_)
      : R(R_), A(A_), gamma(gamma_), nu(nu_), kappa(kappa_) {
    if (!(R > 0.0)) throw std::invalid_argument("GasModel: R must be > 0");
    if (!(A > 0.0)) throw std::invalid_argument("GasModel: A must be > 0");
    if (!(gamma > 1.0)) throw std::invalid_argument("GasModel: gamma must be > 1");
    if (!(nu > 0.0)) throw std::invalid_argument("GasModel: nu must be > 0");
    if (!(kappa > 0.0)) throw std::invalid_argument("GasModel: kappa must be > 0");
  }

  double C_v() const { return R / (gamma - 1.0); }

  double pressure(double v, double theta) const {
    require_positive(v, "pressure: v");
    return R * theta / v;
  }

  // p_v and p_theta at fixed theta / fixed v.
  double p_v(double v, double theta) const { return -R * theta / (v * v); }
  double p_theta(double v) const { return R / v; }

  double internal_energy(double theta) const { return C_v() * theta; }

  double entropy_from_vtheta(double v, double theta) const {
    require_positive(v, "entropy_from_vtheta: v");
    require_positive(theta, "entropy_from_vtheta: theta");
    return R / (gamma - 1.0) * std::log((R / A) * theta * std::pow(v, gamma - 1.0));
  }

  double theta_from_vs(double v, double s) const {
    require_positive(v, "theta_from_vs: v");
    return (A / R) * std::pow(v, 1.0 - gamma) * std::exp((gamma - 1.0) * s / R);
  }

  double p_tilde(double v, double s) const {
    require_positive(v, "p_tilde: v");
    return A * std::pow(v, -gamma) * std::exp((gamma - 1.0) * s / R);
  }

  double p_tilde_v(double v, double s) const { return -gamma * p_tilde(v, s) / v; }

  double p_tilde_s(double v, double s) const { return (gamma - 1.0) / R * p_tilde(v, s); }

  double lambda(WaveFamily family, double v, double s) const {
    const double mag = std::sqrt(-p_tilde_v(v, s));
    return family == WaveFamily::one ? -mag : mag;
  }

  double dlambda_dv(WaveFamily family, double v, double s) const {
    return -0.5 * (gamma + 1.0) / v * lambda(family, v, s);
  }

  double lambda_inverse(WaveFamily family, double w, double s) const {
    if (family == WaveFamily::one ? !(w < 0.0) : !(w > 0.0))
      throw std::domain_error("lambda_inverse: wave speed sign does not match family");
    const double num = A * gamma * std::exp((gamma - 1.0) * s / R);
    return std::pow(num / (w * w), 1.0 / (gamma + 1.0));
  }

 private:
  static void require_positive(double x, const char* what) {
    if (!(x > 0.0)) throw std::domain_error(std::string(what) + " must be > 0");
  }
};

struct ThermoState {
  double v;
  double theta;
};

// Phi(x) = x - 1 - ln x, the convex building block of the relative entropy.
inline double phi_convex(double x) {
  if (!(x > 0.0)) throw std::domain_error("phi_convex: argument must be > 0");
  return x - 1.0 - std::log(x);
}

}  // namespace nsac
