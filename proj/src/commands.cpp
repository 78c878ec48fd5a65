#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "varcert/certify.hpp"
#include "varcert/cli.hpp"
#include "varcert/errors.hpp"
#include "varcert/generator.hpp"
#include "varcert/jacobi.hpp"
#include "varcert/perturbation.hpp"
#include "varcert/table.hpp"

namespace varcert::cli {

namespace {

constexpr const char* kNormNote =
    "quad_coefficient c gives Phi(y) - Phi(y0) >= c * ||y - y0||^2_H1 for y near y0 with the same boundary values";
constexpr const char* kInconclusiveNote =
    "Inconclusive means the length criterion is silent; it is not a disproof of minimality";
constexpr const char* kSobolevNote =
    "Under the same hypotheses y0 is also a strong K-minimum for every absolutely convex compact K of the "
    "Sobolev space H^1; the numeric certificate is unchanged";

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json header(const char* command) {
  return json{{"tool", kToolName}, {"version", kVersion}, {"command", command}};
}

json echo(const Problem& p) {
  json in{{"integrand", p.integrand_text},
          {"interval", {{"a", p.grid.a()}, {"b", p.grid.b()}}},
          {"extremal", p.extremal_text},
          {"grid_n", p.grid.n()},
          {"el_tol", p.el_tol}};
  if (!p.table_names.empty()) in["tables"] = p.table_names;
  return in;
}

int exit_for(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::MinimumUnconditional:
    case VerdictKind::MinimumUnderLength: return kExitMinimum;
    case VerdictKind::Inconclusive: return kExitInconclusive;
    default: return kExitPrecondition;
  }
}

void put_certificate(json& report, const Certificate& c) {
  report["verdict"] = std::string(to_string(c.verdict.kind));
  report["p_min"] = c.p_min;
  report["q_min"] = c.q_min;
  report["length"] = c.interval_length;
  report["length_bound"] = optional_number(c.verdict.length_bound);
  report["length_criterion"] = optional_number(c.length_criterion);
  report["quad_coefficient"] = optional_number(c.quad_coefficient);
  report["el_residual_max"] = c.verdict.el_residual_max;
  report["grid_n"] = c.grid_n;
  report["k_extremum_note"] = c.k_extremum_note ? json(kSobolevNote) : json(nullptr);
  json notes = json::array();
  if (c.quad_coefficient) notes.push_back(kNormNote);
  if (c.verdict.kind == VerdictKind::Inconclusive) notes.push_back(kInconclusiveNote);
  report["notes"] = std::move(notes);
}

template <class Body>
CommandResult guarded(const char* command, Body&& body) {
  auto fail = [&](int code, const std::string& msg) {
    json report = header(command);
    report["error"] = msg;
    return CommandResult{std::move(report), code, msg};
  };
  try {
    return body();
  } catch (const InputError& e) {
    return fail(kExitError, e.what());
  } catch (const DomainError& e) {
    return fail(kExitError, std::string("evaluation error: ") + e.what());
  } catch (const PreconditionError& e) {
    return fail(kExitPrecondition, e.what());
  } catch (const std::exception& e) {
    return fail(kExitError, e.what());
  }
}

void maybe_plot(const Problem& p, const Options& opts) {
  if (opts.plot_data) write_plot_data(p, *opts.plot_data);
}

std::string diagnostic_for(const Certificate& c) {
  switch (c.verdict.kind) {
    case VerdictKind::EulerLagrangeFailed: return "y0 does not satisfy the Euler-Lagrange equation";
    case VerdictKind::LegendreFailed: return "strengthened Legendre condition fails: min f_zz <= 0 along y0";
    default: return {};
  }
}

json table_json(const Table& t) {
  return json{{"a", t.a()}, {"b", t.b()}, {"values", t.values()}, {"slopes", t.slopes()}};
}

json problem_json(const BuiltIntegrand& built, const GeneratorSpec& spec, const Options& opts) {
  json p{{"integrand", built.f.f().str()},
         {"interval", {{"a", spec.a}, {"b", spec.b}}},
         {"extremal", spec.y0 ? spec.y0->str() : std::string("0")}};
  if (opts.grid_n) p["grid_n"] = *opts.grid_n;
  if (built.table) p["tables"] = json{{built.table->name(), table_json(*built.table)}};
  return p;
}

json spec_json(const GeneratorSpec& spec) {
  return json{{"P", spec.P.str()},
              {"qfun", spec.qfun.str()},
              {"pfun", spec.pfun.str()},
              {"rho", spec.rho.str()},
              {"C", spec.C},
              {"interval", {{"a", spec.a}, {"b", spec.b}}},
              {"extremal", spec.y0 ? json(spec.y0->str()) : json(nullptr)}};
}

// Certifies an emitted problem exactly as `varcert certify` would read it.
std::pair<int, std::string> recertify(const json& problem, const Options& opts) {
  const auto p = load_problem(problem, opts);
  const auto c = certify(p.f, p.y0, p.grid, p.el_tol);
  return {exit_for(c.verdict.kind), std::string(to_string(c.verdict.kind))};
}

GeneratorSpec parse_spec(const json& doc) {
  if (!doc.is_object()) throw InputError("generator spec must be a JSON object");
  auto field = [&](const char* key, const char* fallback) {
    if (!doc.contains(key)) return parse_field(fallback, key);
    if (!doc[key].is_string()) throw InputError(std::string("\"") + key + "\" must be a string");
    return parse_field(doc[key].get<std::string>(), key);
  };
  GeneratorSpec s;
  s.P = field("P", "0");
  s.qfun = field("qfun", "0");
  s.pfun = field("pfun", "1");
  s.rho = field("rho", "0");
  if (doc.contains("C")) {
    if (!doc["C"].is_number()) throw InputError("\"C\" must be a number");
    s.C = doc["C"].get<double>();
  }
  if (doc.contains("interval")) {
    const auto& iv = doc["interval"];
    if (!iv.is_object() || !iv.contains("a") || !iv.contains("b") || !iv["a"].is_number() || !iv["b"].is_number())
      throw InputError("\"interval\" must be an object with numeric \"a\" and \"b\"");
    s.a = iv["a"].get<double>();
    s.b = iv["b"].get<double>();
    if (!(s.a < s.b)) throw InputError("interval requires a < b");
  }
  if (doc.contains("extremal") && !doc["extremal"].is_null()) {
    if (!doc["extremal"].is_string()) throw InputError("\"extremal\" must be a string");
    s.y0 = parse_field(doc["extremal"].get<std::string>(), "extremal");
    if (s.y0->depends_on(Var::Y) || s.y0->depends_on(Var::Z))
      throw InputError("extremal must be an expression in x only");
  }
  return s;
}

}  // namespace

CommandResult run_certify(const json& problem, const Options& opts) {
  return guarded("certify", [&] {
    const auto p = load_problem(problem, opts);
    const auto cert = certify(p.f, p.y0, p.grid, p.el_tol, opts.sobolev);
    json report = header("certify");
    report["input"] = echo(p);
    put_certificate(report, cert);
    maybe_plot(p, opts);
    return CommandResult{std::move(report), exit_for(cert.verdict.kind), diagnostic_for(cert)};
  });
}

CommandResult run_compare(const json& problem, const Options& opts) {
  return guarded("compare", [&] {
    const auto p = load_problem(problem, opts);
    const auto cert = certify(p.f, p.y0, p.grid, p.el_tol, opts.sobolev);
    json report = header("compare");
    report["input"] = echo(p);
    put_certificate(report, cert);
    if (!(cert.p_min > 0.0)) {
      report["comparison"] = nullptr;
      return CommandResult{std::move(report), kExitPrecondition,
                           "strengthened Legendre condition fails; the accessory equation is undefined"};
    }
    const auto cmp = compare_criteria(p.f, p.y0, p.grid);
    report["conjugate_point"] = optional_number(cmp.conjugate_point);
    report["comparison"] = {{"length_new", optional_number(cmp.length_new)},
                            {"length_jacobi", optional_number(cmp.length_jacobi)},
                            {"conjugate_point", optional_number(cmp.conjugate_point)},
                            {"ratio", optional_number(cmp.ratio)}};
    maybe_plot(p, opts);
    return CommandResult{std::move(report), kExitMinimum, {}};
  });
}

CommandResult run_verify(const json& problem, const Options& opts) {
  return guarded("verify", [&] {
    const auto p = load_problem(problem, opts);
    const auto cert = certify(p.f, p.y0, p.grid, p.el_tol, opts.sobolev);
    json report = header("verify");
    report["input"] = echo(p);
    put_certificate(report, cert);
    if (!cert.quad_coefficient) {
      report["verification"] = nullptr;
      std::string why = diagnostic_for(cert);
      if (why.empty()) why = "no quadratic coefficient: verdict is " + std::string(to_string(cert.verdict.kind));
      return CommandResult{std::move(report), kExitPrecondition, why};
    }
    if (opts.modes < 0 || opts.splines < 0) throw InputError("--modes and --splines must be non-negative");

    const auto ladder = opts.ladder.empty() ? kDefaultLadder : opts.ladder;
    std::vector<PerturbationFamily> families;
    families.push_back({PerturbationKind::SineBasis, opts.modes, opts.seed, ladder});
    families.push_back({PerturbationKind::RandomSpline, opts.splines, opts.seed, ladder});
    VerificationReport vr;
    try {
      vr = empirical_verify(p.f, p.y0, cert, families, p.grid);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }

    json perturbations = json::array();
    for (const auto& r : vr.results) {
      json checks = json::array();
      for (const auto& c : r.checks)
        checks.push_back({{"epsilon", c.epsilon}, {"delta", c.delta}, {"bound", c.bound}, {"ok", c.ok}});
      perturbations.push_back({{"kind", std::string(to_string(r.kind))},
                               {"index", r.index},
                               {"h1_norm_sq", r.h1_norm_sq},
                               {"threshold", optional_number(r.threshold)},
                               {"checks", std::move(checks)}});
    }
    report["verification"] = {{"quad_coefficient", vr.quad_coefficient},
                              {"phi0", vr.phi0},
                              {"abs_tol", vr.abs_tol},
                              {"seed", opts.seed},
                              {"ladder", ladder},
                              {"pass", vr.pass},
                              {"perturbations", std::move(perturbations)}};
    maybe_plot(p, opts);
    if (vr.pass) return CommandResult{std::move(report), kExitMinimum, {}};
    return CommandResult{std::move(report), kExitInconclusive,
                         "empirical check failed at the smallest epsilon for at least one perturbation"};
  });
}

CommandResult run_generate(const json& spec_doc, const GenerateOptions& gen, const Options& opts) {
  return guarded("generate", [&] {
    json report = header("generate");
    if (gen.corpus_seed) {
      if (gen.corpus_count < 1) throw InputError("--corpus needs a count of at least 1");
      if (!(gen.corpus_a < gen.corpus_b)) throw InputError("corpus interval requires a < b");
      report["input"] = {{"corpus_seed", *gen.corpus_seed},
                         {"count", gen.corpus_count},
                         {"interval", {{"a", gen.corpus_a}, {"b", gen.corpus_b}}}};
      json problems = json::array();
      int worst = kExitMinimum;
      for (const auto& inst : sample_corpus(*gen.corpus_seed, gen.corpus_count, gen.corpus_a, gen.corpus_b)) {
        json problem = problem_json(inst.built, inst.spec, opts);
        const auto [code, verdict] = recertify(problem, opts);
        worst = std::max(worst, code);
        problems.push_back({{"problem", std::move(problem)},
                            {"provenance",
                             {{"index", inst.index},
                              {"attempts", inst.attempts},
                              {"spec", spec_json(inst.spec)},
                              {"antiderivative", std::string(to_string(inst.built.path))},
                              {"quadratic", inst.quadratic},
                              {"verdict", verdict}}}});
      }
      report["problems"] = std::move(problems);
      return CommandResult{std::move(report), worst,
                           worst == kExitMinimum ? std::string() : "an emitted problem does not certify"};
    }

    const auto spec = parse_spec(spec_doc);
    const auto built = build_shifted(spec);
    json problem = problem_json(built, spec, opts);
    const auto [code, verdict] = recertify(problem, opts);
    report["input"] = spec_json(spec);
    report["problem"] = problem;
    report["provenance"] = {{"antiderivative", std::string(to_string(built.path))},
                            {"A", built.antiderivative.str()},
                            {"warnings", built.warnings},
                            {"verdict", verdict}};
    std::string diag;
    if (code != kExitMinimum) diag = "generated problem does not certify: " + verdict;
    return CommandResult{std::move(report), code, diag};
  });
}

void write_plot_data(const Problem& problem, const std::string& path) {
  const auto profile = legendre_profile(problem.f, problem.y0, problem.grid);
  std::optional<AccessorySolution> sol;
  if (profile.p_min > 0.0) {
    try {
      sol = solve_accessory(problem.f, problem.y0, problem.grid);
    } catch (const LegendreViolation&) {
    } catch (const NumericalError&) {
    }
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << "x,p,q,U\n";
  char buf[128];
  for (int i = 0; i <= problem.grid.n(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,", problem.grid.x(i), profile.p[k], profile.q[k]);
    out << buf;
    if (sol) {
      std::snprintf(buf, sizeof buf, "%.17g", sol->U[k]);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace varcert::cli
