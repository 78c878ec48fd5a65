#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "varcert/certify.hpp"
#include "varcert/cli.hpp"
#include "varcert/table.hpp"

namespace varcert::cli {

namespace {

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw InputError(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw InputError(what + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InputError(what + " must be finite");
  return d;
}

std::string text(const json& v, const std::string& what) {
  if (!v.is_string()) throw InputError(what + " must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& what) {
  if (!v.is_array()) throw InputError(what + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(number(e, what));
  return out;
}

}  // namespace

Expr parse_field(const std::string& source, const std::string& what, const TableSet* tables) {
  try {
    return parse(source, tables);
  } catch (const ParseError& e) {
    std::ostringstream os;
    os << what << ": parse error at offset " << e.offset() << ": expected " << e.expected() << "\n  " << source << "\n  "
       << std::string(e.offset(), ' ') << '^';
    throw InputError(os.str());
  }
}

Problem load_problem(const json& doc, const Options& opts) {
  if (!doc.is_object()) throw InputError("problem file must be a JSON object");

  TableSet tables;
  std::vector<std::string> table_names;
  if (auto it = doc.find("tables"); it != doc.end()) {
    if (!it->is_object()) throw InputError("\"tables\" must be an object");
    for (const auto& [name, t] : it->items()) {
      const std::string what = "table " + name;
      if (!t.is_object()) throw InputError(what + " must be an object");
      try {
        tables.emplace(name, std::make_shared<const Table>(name, number(require(t, "a"), what + ".a"),
                                                           number(require(t, "b"), what + ".b"),
                                                           numbers(require(t, "values"), what + ".values"),
                                                           numbers(require(t, "slopes"), what + ".slopes")));
      } catch (const std::invalid_argument& e) {
        throw InputError(what + ": " + e.what());
      }
      table_names.push_back(name);
    }
  }

  const std::string integrand = text(require(doc, "integrand"), "\"integrand\"");
  const json& interval = require(doc, "interval");
  if (!interval.is_object()) throw InputError("\"interval\" must be an object with \"a\" and \"b\"");
  const double a = number(require(interval, "a"), "interval.a");
  const double b = number(require(interval, "b"), "interval.b");
  if (!(a < b)) throw InputError("interval requires a < b");

  const std::string extremal = doc.contains("extremal") ? text(doc["extremal"], "\"extremal\"") : "0";

  std::optional<int> file_n;
  if (auto it = doc.find("grid_n"); it != doc.end()) {
    if (!it->is_number_integer()) throw InputError("\"grid_n\" must be an integer");
    file_n = it->get<int>();
  }
  double el_tol = kDefaultElTol;
  if (doc.contains("el_tol")) el_tol = number(doc["el_tol"], "\"el_tol\"");
  if (opts.el_tol) el_tol = *opts.el_tol;
  if (!(el_tol >= 0.0)) throw InputError("el_tol must be non-negative");

  const int n = opts.grid_n ? *opts.grid_n : file_n ? *file_n : opts.env_grid_n ? *opts.env_grid_n : kDefaultGridN;
  if (n < 2 || n % 2 != 0) throw InputError("grid_n must be even and at least 2, got " + std::to_string(n));

  Expr f = parse_field(integrand, "integrand", &tables);
  Expr y0 = parse_field(extremal, "extremal", nullptr);
  if (y0.depends_on(Var::Y) || y0.depends_on(Var::Z)) throw InputError("extremal must be an expression in x only");

  return Problem{integrand, extremal, Integrand(std::move(f)), Extremal(std::move(y0), a, b), Grid(a, b, n), el_tol,
                 std::move(table_names)};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace varcert::cli
