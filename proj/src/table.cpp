#include "varcert/table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace varcert {

Table::Table(std::string name, double a, double b, std::vector<double> values, std::vector<double> slopes)
    : name_(std::move(name)), a_(a), b_(b), values_(std::move(values)), slopes_(std::move(slopes)) {
  if (!(a_ < b_)) throw std::invalid_argument("table: require a < b");
  if (values_.size() < 2 || values_.size() != slopes_.size())
    throw std::invalid_argument("table: need matching value/slope arrays with at least two nodes");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]) || !std::isfinite(slopes_[i]))
      throw std::invalid_argument("table: non-finite entry");
  h_ = (b_ - a_) / static_cast<double>(values_.size() - 1);
}

double Table::eval(double t, int order) const {
  if (order >= 4) return 0.0;
  const auto n = static_cast<long>(intervals());
  long i = static_cast<long>(std::floor((t - a_) / h_));
  i = std::clamp(i, 0L, n - 1);
  const double s = (t - (a_ + static_cast<double>(i) * h_)) / h_;
  const double y0 = values_[i], y1 = values_[i + 1];
  const double m0 = slopes_[i] * h_, m1 = slopes_[i + 1] * h_;

  // Hermite basis in s, written as a cubic c0 + c1 s + c2 s^2 + c3 s^3.
  const double c0 = y0;
  const double c1 = m0;
  const double c2 = -3.0 * y0 - 2.0 * m0 + 3.0 * y1 - m1;
  const double c3 = 2.0 * y0 + m0 - 2.0 * y1 + m1;
  switch (order) {
    case 0:
      return c0 + s * (c1 + s * (c2 + s * c3));
    case 1:
      return (c1 + s * (2.0 * c2 + s * 3.0 * c3)) / h_;
    case 2:
      return (2.0 * c2 + 6.0 * c3 * s) / (h_ * h_);
    default:
      return 6.0 * c3 / (h_ * h_ * h_);
  }
}

}  // namespace varcert
