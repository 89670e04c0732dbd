#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace nsac {

// Adaptive Gauss-Kronrod (G7,K15) quadrature. The Gauss result is the error
// estimate partner of the Kronrod one; panels split until the local estimate
// clears a share of the global tolerance.
namespace gk {

inline constexpr double kron_x[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
inline constexpr double kron_w[8] = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.0630920926299786,
    0.0229353220105292,
};
// Gauss-7 weights; the G7 abscissas are the even-index entries of kron_x.
inline constexpr double gauss_w[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

template <typename F>
inline void panel(const F& f, double a, double b, double& kronrod, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kron_w[0] * fc;
  double resg = gauss_w[0] * fc;
  for (int j = 1; j < 8; ++j) {
    const double fsum = f(c - h * kron_x[j]) + f(c + h * kron_x[j]);
    resk += kron_w[j] * fsum;
    if (j % 2 == 0) resg += gauss_w[j / 2] * fsum;
  }
  kronrod = resk * h;
  err = std::abs((resk - resg) * h);
}

}  // namespace gk

namespace detail {

template <typename F>
inline double integrate_rec(const F& f, double a, double b, double val, double err, double tol,
                            int depth) {
  // second clause: the error estimate has hit the FP floor of the panel value
  if (err <= tol || err <= 4e-16 * std::abs(val) || depth >= 18) return val;
  const double m = 0.5 * (a + b);
  double v1, e1, v2, e2;
  gk::panel(f, a, m, v1, e1);
  gk::panel(f, m, b, v2, e2);
  const double child_tol = std::max(0.5 * tol, 1e-16 * std::abs(val));
  return integrate_rec(f, a, m, v1, e1, child_tol, depth + 1) +
         integrate_rec(f, m, b, v2, e2, child_tol, depth + 1);
}

}  // namespace detail

// Integrate f over [a,b] to absolute tolerance tol.
template <typename F>
inline double integrate(const F& f, double a, double b, double tol = 1e-12) {
  if (a == b) return 0.0;
  double val, err;
  gk::panel(f, a, b, val, err);
  return detail::integrate_rec(f, a, b, val, err, tol, 0);
}

// tail_inv_poly(q, Y) = integral over [Y, +inf) of (1+y^2)^(-q) dy, for Y >= ~10.
// Binomial expansion of (1+y^-2)^(-q) in y^-2; converges fast for large Y.
inline double tail_inv_poly(double q, double Y) {
  const double u2 = 1.0 / (Y * Y);
  double coeff = 1.0;  // (-1)^k binom(q+k-1, k)
  double upow = std::pow(Y, 1.0 - 2.0 * q);
  double sum = 0.0;
  for (int k = 0; k < 24; ++k) {
    const double term = coeff * upow / (2.0 * q - 1.0 + 2.0 * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    coeff *= -(q + k) / (k + 1.0);
    upow *= u2;
  }
  return sum;
}

}  // namespace nsac
