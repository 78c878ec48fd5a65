#pragma once

#include <string>
#include <vector>

namespace varcert {

/// Piecewise cubic Hermite interpolant on a uniform grid over [a, b], built
/// from node values and node slopes. Evaluation outside [a, b] extends the
/// end pieces polynomially.
class Table {
 public:
  Table(std::string name, double a, double b, std::vector<double> values, std::vector<double> slopes);

  const std::string& name() const noexcept { return name_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& slopes() const noexcept { return slopes_; }
  std::size_t intervals() const noexcept { return values_.size() - 1; }

  /// order-th derivative of the interpolant at t (order >= 4 gives 0).
  double eval(double t, int order = 0) const;

 private:
  std::string name_;
  double a_;
  double b_;
  double h_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

}  // namespace varcert
