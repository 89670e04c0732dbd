#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "nsac/errors.hpp"
#include "nsac/quad.hpp"

namespace nsac {

// Cumulative integral F(z) = int_0^z (1+y^2)^(-q) dy, memoized on a uniform
// breakpoint table over [0, z_table]; panel remainders are closed with a
// 5-point Gauss rule and the far tail with the inverse-power series.
class SmoothingKernel {
 public:
  explicit SmoothingKernel(double q) : q_(q) {
    h_ = kZTable / kPanels;
    F_.resize(kPanels + 1);
    F_[0] = 0.0;
    double carry = 0.0;  // Kahan compensation
    double acc = 0.0;
    for (int j = 0; j < kPanels; ++j) {
      double val, err;
      gk::panel([this](double y) { return integrand(y); }, j * h_, (j + 1) * h_, val, err);
      const double y = val - carry;
      const double t = acc + y;
      carry = (t - acc) - y;
      acc = t;
      F_[j + 1] = acc;
    }
    F_inf_ = acc + tail_inv_poly(q_, kZTable);
  }

  double q() const { return q_; }
  double total() const { return F_inf_; }

  double integrand(double y) const {
    const double y2 = y * y;
    return std::pow(1.0 + y2, -q_);
  }

  // F(z) for z >= 0.
  double cumulative(double z) const {
    if (z <= 0.0) return 0.0;
    if (z >= kZTable) return F_inf_ - tail_inv_poly(q_, z);
    int j = static_cast<int>(z / h_);
    if (j >= kPanels) j = kPanels - 1;
    return F_[j] + gauss5(j * h_, z);
  }

  // T(z) = int_z^inf, evaluated without cancellation for large z.
  double tail(double z) const {
    if (z >= kZTable) return tail_inv_poly(q_, z);
    return F_inf_ - cumulative(z);
  }

 private:
  double gauss5(double a, double b) const {
    static constexpr double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                    0.5384693101056831, 0.9061798459386640};
    static constexpr double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                    0.4786286704993665, 0.2369268850561891};
    const double c = 0.5 * (a + b), hh = 0.5 * (b - a);
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += w[k] * integrand(c + hh * x[k]);
    return s * hh;
  }

  static constexpr double kZTable = 30.0;
  static constexpr int kPanels = 1024;
  double q_;
  double h_;
  double F_inf_;
  std::vector<double> F_;
};

// Smoothing parameters of the approximate wave: mollification scale eps_w,
// kernel decay exponent q (> 3/2), derived normalization K_q and time shift
// t0 = 1/eps_w^2. Distinct from the diffuse-interface thickness, which is 1.
struct SmoothingParams {
  double eps_w;
  double q_exp;
  double K_q;
  double t0;
  std::shared_ptr<const SmoothingKernel> kernel;

  SmoothingParams(double eps_w_, double q_exp_) : eps_w(eps_w_), q_exp(q_exp_) {
    if (!(eps_w > 0.0)) throw std::invalid_argument("SmoothingParams: eps_w must be > 0");
    if (!(q_exp > 1.5)) throw std::invalid_argument("SmoothingParams: q_exp must be > 3/2");
    kernel = std::make_shared<SmoothingKernel>(q_exp);
    K_q = 1.0 / kernel->total();
    t0 = 1.0 / (eps_w * eps_w);
  }
};

struct BurgersValue {
  double w;    // solution value
  double w_x;  // spatial derivative
  double w_t;  // time derivative (= -w w_x)
};

// Mollified monotone initial data
//   w0(x) = (w+ + w-)/2 + ((w+ - w-)/2) K_q F(eps x),
// written in deviation-from-endpoint form so the strict bounds w- < w0 < w+
// survive in floating point.
inline double burgers_initial(const SmoothingParams& sp, double w_minus, double w_plus, double x) {
  const double half = 0.5 * (w_plus - w_minus) * sp.K_q;
  const double z = sp.eps_w * x;
  if (z == 0.0) return 0.5 * (w_minus + w_plus);
  if (z > 0.0) return w_plus - half * sp.kernel->tail(z);
  return w_minus + half * sp.kernel->tail(-z);
}

inline double burgers_initial_slope(const SmoothingParams& sp, double w_minus, double w_plus,
                                    double x) {
  const double z = sp.eps_w * x;
  return 0.5 * (w_plus - w_minus) * sp.K_q * sp.eps_w * sp.kernel->integrand(z);
}

// Exact smooth solution of w_t + w w_x = 0 from w0, by characteristics:
// y* solves x = y + t w0(y) (unique, since d/dy = 1 + t w0' >= 1), then
//   w = w0(y*),  w_x = w0'(y*) / (1 + t w0'(y*)),  w_t = -w w_x.
// Safeguarded Newton in long double; y_hint warms the start across
// neighbouring evaluation points.
inline BurgersValue burgers_eval(const SmoothingParams& sp, double w_minus, double w_plus, double t,
                                 double x, double* y_hint = nullptr) {
  if (w_plus == w_minus) return {w_minus, 0.0, 0.0};
  if (t == 0.0) {
    const double w = burgers_initial(sp, w_minus, w_plus, x);
    const double wx = burgers_initial_slope(sp, w_minus, w_plus, x);
    return {w, wx, -w * wx};
  }

  double lo = x - t * w_plus;   // g(lo) < 0
  double hi = x - t * w_minus;  // g(hi) > 0
  double y = y_hint ? std::min(std::max(*y_hint, lo), hi)
                    : x - t * 0.5 * (w_minus + w_plus);
  const long double xl = x;
  const long double tl = t;
  const double tol = 0.5e-12 * (1.0 + std::abs(x));
  bool done = false;
  double width2 = hi - lo;  // bracket width two iterations ago
  for (int it = 0; it < 200; ++it) {
    const double wy = burgers_initial(sp, w_minus, w_plus, y);
    const long double g = (static_cast<long double>(y) - xl) + tl * static_cast<long double>(wy);
    if (std::abs(static_cast<double>(g)) <= tol) {
      done = true;
      break;
    }
    if (g > 0.0) hi = y; else lo = y;
    if (hi - lo <= 4.0 * 2.22e-16 * (std::abs(lo) + std::abs(hi) + 1.0)) {
      done = true;  // bracket at FP resolution; residual is at its floor
      break;
    }
    const double gp = 1.0 + t * burgers_initial_slope(sp, w_minus, w_plus, y);
    double next = static_cast<double>(static_cast<long double>(y) - g / gp);
    // Newton can two-cycle between the flat tails of w0; force a bisection
    // whenever two iterations failed to roughly halve the bracket.
    const bool slow = it >= 2 && (it % 2 == 0) && (hi - lo) > 0.45 * width2;
    if (!(next > lo && next < hi) || slow) next = 0.5 * (lo + hi);
    if (it % 2 == 0) width2 = hi - lo;
    if (std::abs(next - y) <= 2.22e-16 * (std::abs(y) + std::abs(next) + 1.0)) {
      y = next;  // update below FP resolution: converged to the grid root
      done = true;
      break;
    }
    y = next;
  }
  if (!done) throw NonConvergence("burgers_eval: characteristic root solve stalled");
  if (y_hint) *y_hint = y;  // converged characteristic foot
  const double w = burgers_initial(sp, w_minus, w_plus, y);

  const double s = burgers_initial_slope(sp, w_minus, w_plus, y);
  const double wx = s / (1.0 + t * s);
  return {w, wx, -w * wx};
}

}  // namespace nsac
