#include "varcert/calculus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "varcert/errors.hpp"

namespace varcert {

Grid::Grid(double a, double b, int n) : a_(a), b_(b), n_(n) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) throw std::invalid_argument("grid: require finite a < b");
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("grid: n must be even and >= 2, got " + std::to_string(n));
}

SampledPath::SampledPath(Grid g, std::vector<double> y_, std::vector<double> yp_)
    : grid(g), y(std::move(y_)), yp(std::move(yp_)) {
  if (y.size() != grid.size() || yp.size() != grid.size())
    throw std::invalid_argument("sampled path: sample count does not match grid");
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!std::isfinite(y[i]) || !std::isfinite(yp[i])) throw std::invalid_argument("sampled path: non-finite sample");
}

double integrate(std::span<const double> values, const Grid& grid) {
  if (values.size() != grid.size())
    throw std::invalid_argument("integrate: expected " + std::to_string(grid.size()) + " values, got " +
                                std::to_string(values.size()));
  const int n = grid.n();
  double sum = values[0] + values[static_cast<std::size_t>(n)];
  for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * values[static_cast<std::size_t>(i)];
  return sum * grid.step() / 3.0;
}

double h1_norm_sq(const SampledPath& path) {
  std::vector<double> v(path.y.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = path.y[i] * path.y[i] + path.yp[i] * path.yp[i];
  return integrate(v, path.grid);
}

double friedrichs_constant(double length) {
  return 16.0 * length * length / (std::numbers::pi * std::numbers::pi);
}

double friedrichs_margin(const SampledPath& path) {
  if (std::abs(path.y.front()) > 1e-12 || std::abs(path.y.back()) > 1e-12)
    throw BoundaryConditionError("friedrichs_margin: path must vanish at both ends");
  std::vector<double> y2(path.y.size()), yp2(path.y.size());
  for (std::size_t i = 0; i < y2.size(); ++i) {
    y2[i] = path.y[i] * path.y[i];
    yp2[i] = path.yp[i] * path.yp[i];
  }
  return friedrichs_constant(path.grid.length()) * integrate(yp2, path.grid) - integrate(y2, path.grid);
}

}  // namespace varcert
