#pragma once

#include <span>
#include <vector>

namespace varcert {

/// Uniform grid x_i = a + i (b - a) / n, i = 0..n, with n even.
class Grid {
 public:
  Grid(double a, double b, int n);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  int n() const noexcept { return n_; }
  double length() const noexcept { return b_ - a_; }
  double step() const noexcept { return (b_ - a_) / n_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) + 1; }
  double x(int i) const noexcept { return i == n_ ? b_ : a_ + i * step(); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double a_;
  double b_;
  int n_;
};

inline constexpr int kDefaultGridN = 512;

/// Node samples of a path y and its derivative y'.
struct SampledPath {
  SampledPath(Grid grid, std::vector<double> y, std::vector<double> yp);

  Grid grid;
  std::vector<double> y;
  std::vector<double> yp;
};

/// Composite Simpson rule; sums in index order.
double integrate(std::span<const double> values, const Grid& grid);

/// Integral of y^2 + y'^2.
double h1_norm_sq(const SampledPath& path);

/// (16 (b-a)^2 / pi^2) * int y'^2 - int y^2 for a path vanishing at both ends.
/// Throws BoundaryConditionError when |y(a)| or |y(b)| exceeds 1e-12.
double friedrichs_margin(const SampledPath& path);

/// The constant 16 (b-a)^2 / pi^2 used in the length criterion.
double friedrichs_constant(double length);

}  // namespace varcert
