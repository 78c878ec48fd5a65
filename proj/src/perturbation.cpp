#include "varcert/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rng.hpp"
#include "varcert/errors.hpp"

namespace varcert {

std::string_view to_string(PerturbationKind kind) {
  return kind == PerturbationKind::SineBasis ? "sine" : "spline";
}

namespace {

Perturbation sine_mode(const Grid& grid, int k) {
  const double w = k * std::numbers::pi / grid.length();
  const double scale = 1.0 / (1.0 + w);
  Perturbation p{PerturbationKind::SineBasis, k, std::vector<double>(grid.size()), std::vector<double>(grid.size())};
  for (int i = 0; i <= grid.n(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double t = w * (grid.x(i) - grid.a());
    p.eta[idx] = scale * std::sin(t);
    p.eta_p[idx] = scale * w * std::cos(t);
  }
  // sin(k pi) is not exactly zero in floating point
  p.eta.front() = 0.0;
  p.eta.back() = 0.0;
  return p;
}

// Natural cubic spline through (t_j, v_j), j = 0..m+1, with v_0 = v_{m+1} = 0.
Perturbation random_spline(const Grid& grid, int index, int knots, std::uint64_t seed) {
  detail::Rng rng(detail::derive_seed(seed, 0x5b1e, static_cast<std::uint64_t>(index)));
  const int m = knots;
  const int segments = m + 1;
  const double h = grid.length() / segments;
  std::vector<double> t(static_cast<std::size_t>(segments) + 1), v(t.size(), 0.0), second(t.size(), 0.0);
  for (int j = 0; j <= segments; ++j) t[static_cast<std::size_t>(j)] = grid.a() + j * h;
  t.back() = grid.b();
  for (int j = 1; j <= m; ++j) v[static_cast<std::size_t>(j)] = rng.uniform(-1.0, 1.0);

  // Thomas algorithm for M_{j-1} + 4 M_j + M_{j+1} = 6 (v_{j+1} - 2 v_j + v_{j-1}) / h^2.
  std::vector<double> diag(t.size(), 4.0), rhs(t.size(), 0.0);
  for (int j = 1; j <= m; ++j) {
    const auto k = static_cast<std::size_t>(j);
    rhs[k] = 6.0 * (v[k + 1] - 2.0 * v[k] + v[k - 1]) / (h * h);
  }
  for (int j = 2; j <= m; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const double w = 1.0 / diag[k - 1];
    diag[k] -= w;
    rhs[k] -= w * rhs[k - 1];
  }
  for (int j = m; j >= 1; --j) {
    const auto k = static_cast<std::size_t>(j);
    second[k] = (rhs[k] - second[k + 1]) / diag[k];
  }

  Perturbation p{PerturbationKind::RandomSpline, index, std::vector<double>(grid.size()),
                 std::vector<double>(grid.size())};
  for (int i = 0; i <= grid.n(); ++i) {
    const double x = grid.x(i);
    auto j = static_cast<std::size_t>(std::clamp(static_cast<int>((x - grid.a()) / h), 0, segments - 1));
    const double A = (t[j + 1] - x) / h;
    const double B = 1.0 - A;
    const auto idx = static_cast<std::size_t>(i);
    p.eta[idx] = A * v[j] + B * v[j + 1] + ((A * A * A - A) * second[j] + (B * B * B - B) * second[j + 1]) * h * h / 6.0;
    p.eta_p[idx] = (v[j + 1] - v[j]) / h + ((1.0 - 3.0 * A * A) * second[j] + (3.0 * B * B - 1.0) * second[j + 1]) * h / 6.0;
  }
  p.eta.front() = 0.0;
  p.eta.back() = 0.0;

  double max_eta = 0.0, max_eta_p = 0.0;
  for (std::size_t i = 0; i < p.eta.size(); ++i) {
    max_eta = std::max(max_eta, std::abs(p.eta[i]));
    max_eta_p = std::max(max_eta_p, std::abs(p.eta_p[i]));
  }
  const double scale = 1.0 / (max_eta + max_eta_p);
  for (std::size_t i = 0; i < p.eta.size(); ++i) {
    p.eta[i] *= scale;
    p.eta_p[i] *= scale;
  }
  return p;
}

void check_ladder(const std::vector<double>& ladder) {
  if (ladder.empty()) throw std::invalid_argument("epsilon ladder is empty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] >= 0.0) || !std::isfinite(ladder[i]))
      throw std::invalid_argument("epsilon ladder entries must be finite and non-negative");
    if (i > 0 && !(ladder[i] < ladder[i - 1])) throw std::invalid_argument("epsilon ladder must be strictly decreasing");
  }
}

}  // namespace

std::vector<Perturbation> generate_perturbations(const PerturbationFamily& family, const Grid& grid) {
  if (family.count < 0) throw std::invalid_argument("perturbation count must be non-negative");
  if (family.kind == PerturbationKind::RandomSpline && family.knots < 1)
    throw std::invalid_argument("random splines need at least one interior knot");
  std::vector<Perturbation> out;
  out.reserve(static_cast<std::size_t>(family.count));
  for (int k = 1; k <= family.count; ++k) {
    out.push_back(family.kind == PerturbationKind::SineBasis ? sine_mode(grid, k)
                                                             : random_spline(grid, k, family.knots, family.seed));
  }
  return out;
}

VerificationReport empirical_verify(const Integrand& f, const Extremal& y0, const Certificate& cert,
                                    std::span<const PerturbationFamily> families, const Grid& grid,
                                    double abs_tol_rel) {
  if (!cert.quad_coefficient) throw PreconditionError("certificate carries no quadratic coefficient");
  const double c = *cert.quad_coefficient;

  std::vector<double> base_y(grid.size()), base_yp(grid.size());
  for (int i = 0; i <= grid.n(); ++i) {
    const auto pt = y0.at(grid.x(i));
    base_y[static_cast<std::size_t>(i)] = pt.y;
    base_yp[static_cast<std::size_t>(i)] = pt.yp;
  }
  const double phi0 = action(f, SampledPath(grid, base_y, base_yp));
  const double abs_tol = abs_tol_rel * (1.0 + std::abs(phi0));

  VerificationReport report{c, phi0, abs_tol, {}, true};
  for (const auto& family : families) {
    check_ladder(family.ladder);
    for (auto& eta : generate_perturbations(family, grid)) {
      PerturbationResult res{eta.kind, eta.index, h1_norm_sq(SampledPath(grid, eta.eta, eta.eta_p)), {}, std::nullopt};
      std::vector<double> y(grid.size()), yp(grid.size());
      for (double eps : family.ladder) {
        for (std::size_t i = 0; i < y.size(); ++i) {
          y[i] = base_y[i] + eps * eta.eta[i];
          yp[i] = base_yp[i] + eps * eta.eta_p[i];
        }
        const double delta = action(f, SampledPath(grid, y, yp)) - phi0;
        const double bound = c * eps * eps * res.h1_norm_sq;
        res.checks.push_back({eps, delta, bound, delta >= bound - abs_tol});
      }
      for (auto it = res.checks.rbegin(); it != res.checks.rend() && it->ok; ++it) res.threshold = it->epsilon;
      report.pass = report.pass && res.threshold.has_value();
      report.results.push_back(std::move(res));
    }
  }
  return report;
}

}  // namespace varcert
