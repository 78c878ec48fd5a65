#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "support/random_tree.hpp"
#include "varcert/certify.hpp"
#include "varcert/cli.hpp"
#include "varcert/generator.hpp"
#include "varcert/jacobi.hpp"
#include "varcert/perturbation.hpp"

using namespace varcert;
using std::numbers::pi;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

template <class Fn>
void run(int id, const char* name, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Integrand constant_coefficients(double p, double q) {
  return Integrand(Expr::constant(0.5 * p) * pow(z_var, 2) + Expr::constant(0.5 * q) * pow(y_var, 2));
}

const Integrand oscillator(parse("z^2-y^2"));

void oscillator_conjugate_point() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = solve_accessory(oscillator, Extremal::zero(0, 4), Grid(0, 4, 512));
  const auto cp = first_conjugate_point(s);
  const double t = seconds_since(t0);
  const double err = cp ? std::abs(*cp - pi) : INFINITY;
  report(1, "oscillator conjugate point", cp && err <= 1e-6 && t < 0.1,
         fmt("conjugate point %.12f, |err| %.2e, %.4f s", cp.value_or(NAN), err, t));
}

void conservativeness() {
  const auto c = compare_criteria(oscillator, Extremal::zero(0, 4), Grid(0, 4, 512));
  bool ok = c.length_new && c.ratio && std::abs(*c.length_new - pi / 4) <= 1e-12 && std::abs(*c.ratio - 4) <= 1e-5;
  double worst = c.ratio ? std::abs(*c.ratio - 4) : INFINITY;

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> up(0, 5), uq(-5, 0), ua(-1, 1);
  for (int k = 0; k < 20; ++k) {
    double p = 0, q = 0;
    while (p <= 0) p = 5 - up(rng);  // (0, 5]
    while (q >= 0 || q < -5) q = uq(rng);
    const double a = ua(rng);
    const double b = a + 1.2 * pi * std::sqrt(p / -q);
    const auto ck = compare_criteria(constant_coefficients(p, q), Extremal::zero(a, b), Grid(a, b, 1024));
    const double dev = ck.ratio ? std::abs(*ck.ratio - 4) : INFINITY;
    worst = std::max(worst, dev);
    ok = ok && dev <= 1e-5;
  }
  report(2, "criterion conservativeness", ok,
         fmt("oscillator L_new %.15f ratio %.9f; max |ratio-4| over 21 instances %.2e", c.length_new.value_or(NAN),
             c.ratio.value_or(NAN), worst));
}

void length_boundary() {
  struct Case {
    double p, q, a;
  };
  bool ok = true;
  double worst = 0;
  for (const Case c : {Case{2, -2, 0}, Case{1, -0.25, 1.5}, Case{3.7, -0.9, -2}}) {
    const auto f = constant_coefficients(c.p, c.q);
    const auto kind = [&](double b) { return certify(f, Extremal::zero(c.a, b), Grid(c.a, b, 64)).verdict.kind; };
    const double expected = c.a + (pi / 4) * std::sqrt(c.p / -c.q);
    double lo = c.a + 0.5 * (expected - c.a), hi = c.a + 2 * (expected - c.a);
    ok = ok && kind(lo) == VerdictKind::MinimumUnderLength && kind(hi) == VerdictKind::Inconclusive;
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      (kind(mid) == VerdictKind::MinimumUnderLength ? lo : hi) = mid;
    }
    const double dev = std::max(std::abs(lo - expected), std::abs(hi - expected));
    worst = std::max(worst, dev);
    ok = ok && dev <= 1e-9;
  }
  report(3, "length-criterion boundary", ok, fmt("max |b_flip - bound| %.2e over 3 instances", worst));
}

void quadratic_coefficients() {
  const double pi2 = pi * pi;
  struct Case {
    double p, q, len, expected;
  };
  const Case cases[] = {
      {1, 1, 1, 0.5},
      {2, 0, 1, 2 * pi2 / (2 * (pi2 + 16))},
      {2, -2, 0.5, (2 * pi2 - 16 * 0.25 * 2) / (2 * (pi2 + 16 * 0.25))},
  };
  bool ok = true;
  double worst = 0;
  std::string values;
  for (const auto& c : cases) {
    const auto got = quad_coefficient(c.p, c.q, 0, c.len);
    const double rel = got ? std::abs(*got - c.expected) / std::abs(c.expected) : INFINITY;
    worst = std::max(worst, rel);
    ok = ok && rel <= 1e-12;
    values += fmt(" %.15g", got.value_or(NAN));
  }
  report(4, "quadratic-coefficient formulas", ok, fmt("c =%s, max rel err %.2e", values.c_str(), worst));
}

std::vector<CorpusInstance> corpus;

void inverse_problem() {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid g(0, 0.6, 512);
  cli::GenerateOptions gen;
  gen.corpus_seed = 0;
  gen.corpus_count = 100;
  const auto out = cli::run_generate(cli::json::object(), gen, {});
  int exit_ok = 0, el_ok = 0, no_cp = 0;
  double worst_el = 0;
  for (const auto& item : out.report["problems"]) {
    const auto cert = cli::run_certify(item["problem"], {});
    exit_ok += cert.exit_code == cli::kExitMinimum;
  }
  corpus = sample_corpus(0, 100, 0, 0.6);
  for (const auto& inst : corpus) {
    double el = 0;
    for (double r : el_residual(inst.built.f, inst.y0, g)) el = std::max(el, std::abs(r));
    worst_el = std::max(worst_el, el);
    el_ok += el <= 1e-8;
    no_cp += !solve_accessory(inst.built.f, inst.y0, g).conjugate_point;
  }
  const double t = seconds_since(t0);
  const auto n = static_cast<int>(out.report["problems"].size());
  report(5, "inverse-problem soundness",
         n == 100 && corpus.size() == 100 && exit_ok == 100 && el_ok == 100 && no_cp == 100 && t < 30,
         fmt("%d instances, certify exit 0 on %d, EL <= 1e-8 on %d (max %.2e), no conjugate point on %d, %.2f s", n,
             exit_ok, el_ok, worst_el, no_cp, t));
}

void empirical_bound() {
  const Grid g(0, 0.6, 512);
  int passed = 0, quadratic = 0, quadratic_full = 0;
  for (const auto& inst : corpus) {
    const auto cert = certify(inst.built.f, inst.y0, g);
    const PerturbationFamily families[] = {
        {PerturbationKind::SineBasis, 8, inst.index, kDefaultLadder},
        {PerturbationKind::RandomSpline, 4, inst.index, kDefaultLadder},
    };
    const auto rep = empirical_verify(inst.built.f, inst.y0, cert, families, g);
    bool at_small = true, at_all = true;
    for (const auto& r : rep.results) {
      at_small = at_small && r.threshold && *r.threshold >= 1e-3;
      at_all = at_all && r.threshold && *r.threshold == kDefaultLadder.front();
    }
    passed += rep.pass && at_small;
    if (inst.quadratic) {
      ++quadratic;
      quadratic_full += at_all;
    }
  }
  const auto n = static_cast<int>(corpus.size());
  report(6, "empirical quadratic bound", n == 100 && passed == n && quadratic > 0 && quadratic_full == quadratic,
         fmt("%d/%d pass at eps=1e-3; %d/%d quadratic instances pass at every rung", passed, n, quadratic_full,
             quadratic));
}

void friedrichs() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(-3, 3), ulen(0.1, 5);
  int checked = 0;
  double worst = INFINITY;
  for (int k = 0; k < 10; ++k) {
    const double a = ua(rng), b = a + ulen(rng);
    const Grid g(a, b, 512);
    const auto seed = rng();
    for (const auto& eta : generate_perturbations({PerturbationKind::RandomSpline, 70, seed, kDefaultLadder}, g))
      worst = std::min(worst, friedrichs_margin(SampledPath(g, eta.eta, eta.eta_p))), ++checked;
    for (const auto& eta : generate_perturbations({PerturbationKind::SineBasis, 30, seed, kDefaultLadder}, g))
      worst = std::min(worst, friedrichs_margin(SampledPath(g, eta.eta, eta.eta_p))), ++checked;
  }
  report(7, "Friedrichs inequality", checked == 1000 && worst >= -1e-9,
         fmt("%d perturbations, min margin %.3e", checked, worst));
}

void shift_equivalence() {
  int compared = 0, agree = 0;
  double worst = 0;
  for (const auto& inst : corpus) {
    if (inst.y0.is_zero()) continue;
    if (compared == 20) break;
    ++compared;
    const Grid g(inst.y0.a(), inst.y0.b(), 512);
    const auto direct = certify(inst.built.f, inst.y0, g);
    const auto shifted = certify(shift(inst.built.f, inst.y0), Extremal::zero(inst.y0.a(), inst.y0.b()), g);
    const auto dev = [](double u, double v) { return std::abs(u - v); };
    double d = std::max(dev(direct.p_min, shifted.p_min), dev(direct.q_min, shifted.q_min));
    const bool both_c = direct.quad_coefficient.has_value() == shifted.quad_coefficient.has_value();
    if (both_c && direct.quad_coefficient) d = std::max(d, dev(*direct.quad_coefficient, *shifted.quad_coefficient));
    worst = std::max(worst, d);
    agree += direct.verdict.kind == shifted.verdict.kind && both_c && d <= 1e-10;
  }
  report(8, "shift equivalence", compared == 20 && agree == 20,
         fmt("%d/%d instances agree, max deviation %.2e", agree, compared, worst));
}

void hygiene() {
  struct Case {
    const char* f;
    double (*exact)(double);
  };
  bool ok = true;
  std::string ratios;
  for (const Case c : {Case{"z^2 - y^2", [](double x) { return std::sin(x); }},
                       Case{"0.5*z^2 + 0.5*y^2", [](double x) { return std::sinh(x); }}}) {
    const auto err = [&](int n) {
      const auto s = solve_accessory(Integrand(parse(c.f)), Extremal::zero(0, 3), Grid(0, 3, n));
      double e = 0;
      for (int i = 0; i <= n; ++i) e = std::max(e, std::abs(s.U[static_cast<std::size_t>(i)] - c.exact(s.grid.x(i))));
      return e;
    };
    const double ratio = err(32) / err(64);
    ok = ok && ratio >= 8 && ratio <= 32;
    ratios += fmt(" %.3f", ratio);
  }
  const auto d = fixtures::check_derivatives(9, 1000, 6);
  ok = ok && d.failures == 0 && d.points > 0;
  report(9, "numerical-analysis hygiene", ok,
         fmt("RK4 ratios%s; derivatives: %d trees, %d points, %d failures, worst rel %.2e", ratios.c_str(), d.trees,
             d.points, d.failures, d.worst));
}

}  // namespace

int main() {
  run(1, "oscillator conjugate point", oscillator_conjugate_point);
  run(2, "criterion conservativeness", conservativeness);
  run(3, "length-criterion boundary", length_boundary);
  run(4, "quadratic-coefficient formulas", quadratic_coefficients);
  run(5, "inverse-problem soundness", inverse_problem);
  run(6, "empirical quadratic bound", empirical_bound);
  run(7, "Friedrichs inequality", friedrichs);
  run(8, "shift equivalence", shift_equivalence);
  run(9, "numerical-analysis hygiene", hygiene);
  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
