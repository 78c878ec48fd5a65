#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "varcert/calculus.hpp"
#include "varcert/certify.hpp"
#include "varcert/variational.hpp"

namespace varcert {

enum class PerturbationKind { SineBasis, RandomSpline };
std::string_view to_string(PerturbationKind kind);

inline const std::vector<double> kDefaultLadder{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};

/// Admissible directions eta with eta(a) = eta(b) = 0 and
/// max|eta| + max|eta'| = 1.
///   SineBasis:    eta_k = sin(k pi (x - a) / L), k = 1..count
///   RandomSpline: natural cubic splines through `knots` interior values drawn
///                 uniformly from [-1, 1], one spline per count.
struct PerturbationFamily {
  PerturbationKind kind = PerturbationKind::SineBasis;
  int count = 8;
  std::uint64_t seed = 0;
  std::vector<double> ladder = kDefaultLadder;  // strictly decreasing, >= 0
  int knots = 6;
};

struct Perturbation {
  PerturbationKind kind;
  int index;
  std::vector<double> eta;
  std::vector<double> eta_p;
};

std::vector<Perturbation> generate_perturbations(const PerturbationFamily& family, const Grid& grid);

struct EpsilonCheck {
  double epsilon;
  double delta;  // Phi(y0 + eps eta) - Phi(y0)
  double bound;  // c ||eps eta||^2_{H^1}
  bool ok;       // delta >= bound - abs_tol
};

struct PerturbationResult {
  PerturbationKind kind;
  int index;
  double h1_norm_sq;
  std::vector<EpsilonCheck> checks;
  /// Largest ladder rung from which the check holds for every smaller rung.
  std::optional<double> threshold;
};

struct VerificationReport {
  double quad_coefficient;
  double phi0;
  double abs_tol;
  std::vector<PerturbationResult> results;
  bool pass;
};

/// Probes Phi(y0 + eps eta) - Phi(y0) >= c ||eps eta||^2_{H^1} - abs_tol with
/// abs_tol = abs_tol_rel * (1 + |Phi(y0)|). Results are listed family by
/// family in generation order. Throws PreconditionError if `cert` carries no
/// quadratic coefficient.
VerificationReport empirical_verify(const Integrand& f, const Extremal& y0, const Certificate& cert,
                                    std::span<const PerturbationFamily> families, const Grid& grid,
                                    double abs_tol_rel = 1e-10);

}  // namespace varcert
