#pragma once

#include <stdexcept>
#include <vector>

#include "nsac/gas.hpp"

namespace nsac {

// Uniform cell-centered grid on [x_min, x_max].
struct Grid {
  double x_min, x_max;
  int n_cells;
  double dx;

  Grid(double x_min_, double x_max_, int n_cells_)
      : x_min(x_min_), x_max(x_max_), n_cells(n_cells_) {
    if (!(x_min < x_max)) throw std::invalid_argument("Grid: x_min must be < x_max");
    if (n_cells < 16) throw std::invalid_argument("Grid: need at least 16 cells");
    dx = (x_max - x_min) / n_cells;
  }

  double x(int i) const { return x_min + (i + 0.5) * dx; }

  std::vector<double> cell_centers() const {
    std::vector<double> xs(n_cells);
    for (int i = 0; i < n_cells; ++i) xs[i] = x(i);
    return xs;
  }
};

// Prognostic fields at one time instant; s, p, mu are derived on demand.
struct FieldState {
  double t = 0.0;
  std::vector<double> v, u, theta, chi;

  FieldState() = default;
  explicit FieldState(int n) : v(n, 1.0), u(n, 0.0), theta(n, 1.0), chi(n, 1.0) {}

  int size() const { return static_cast<int>(v.size()); }

  std::vector<double> entropy(const GasModel& gas) const {
    std::vector<double> s(v.size());
    for (size_t i = 0; i < v.size(); ++i) s[i] = gas.entropy_from_vtheta(v[i], theta[i]);
    return s;
  }

  std::vector<double> pressure(const GasModel& gas) const {
    std::vector<double> p(v.size());
    for (size_t i = 0; i < v.size(); ++i) p[i] = gas.R * theta[i] / v[i];
    return p;
  }
};

}  // namespace nsac
