// csrkn: build, verify and run the symplectic RKN families from the command line.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error,
// 3 numerical failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "csrkn/experiments.hpp"
#include "csrkn/integrator.hpp"
#include "csrkn/number_format.hpp"
#include "csrkn/problems.hpp"
#include "csrkn/tableau.hpp"
#include "csrkn/tableau_io.hpp"
#include "csrkn/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check_order(int order) {
  if (order != 4 && order != 6 && order != 8) {
    throw UsageError("--order must be 4, 6 or 8, got " + std::to_string(order));
  }
}

// Writes to --out when given, else to stdout.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out_path);
  if (!file) {
    throw UsageError("cannot open '" + out_path + "' for writing");
  }
  file << text;
}

csrkn::ProblemSpec lookup_problem(const std::string& name) {
  try {
    return csrkn::find_problem(name);
  } catch (const csrkn::UnknownProblem& e) {
    throw UsageError(e.what());
  }
}

int gen_tableau(int order, double theta, const std::string& format, const std::string& out) {
  check_order(order);
  const auto tableau = csrkn::make_family_tableau(order, theta);
  if (format == "json") {
    emit(out, csrkn::to_json(tableau).dump(2) + "\n");
  } else if (format == "text") {
    emit(out, csrkn::to_text(tableau));
  } else {
    throw UsageError("--format must be json or text, got '" + format + "'");
  }
  return kExitOk;
}

void print_rows(const char* name, const std::vector<csrkn::ConditionRow>& rows) {
  for (const auto& r : rows) {
    std::cout << "  " << name << " kappa=" << r.kappa
              << " residual=" << csrkn::format_shortest(r.max_residual)
              << (r.holds ? " ok" : " VIOLATED") << '\n';
  }
}

int verify(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw UsageError("cannot open '" + path + "'");
  }
  std::stringstream buffer;
  buffer << file.rdbuf();
  csrkn::LoadedTableau loaded;
  try {
    loaded = csrkn::parse_tableau(buffer.str());
  } catch (const csrkn::TableauFormatError& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return kExitUsage;
  }
  const auto& t = loaded.tableau;
  const int s = t.stages();
  const int target = loaded.declared_order.value_or(2 * s);
  const int half = std::max(1, (target + 1) / 2);
  const auto report = csrkn::check_order_conditions(t, std::max(1, target), half, half);

  std::cout << "stages: " << s << '\n';
  print_rows("B", report.b);
  print_rows("CN", report.cn);
  print_rows("DN", report.dn);
  std::cout << "  b_bar = b(1-c) residual=" << csrkn::format_shortest(report.b_bar_residual)
            << (report.b_bar_consistent ? " ok" : " VIOLATED") << '\n';
  std::cout << "satisfied: B(" << report.b_order << ") CN(" << report.cn_order << ") DN("
            << report.dn_order << ")\n";

  bool ok = true;
  if (!report.implied_order) {
    std::cout << "order: unverified (b_bar = b(1-c) fails)\n";
    ok = false;
  } else {
    std::cout << "implied order: " << *report.implied_order;
    if (loaded.declared_order) {
      std::cout << " (declared " << *loaded.declared_order << ")";
      if (*report.implied_order < *loaded.declared_order) {
        std::cout << " VIOLATED";
        ok = false;
      }
    }
    std::cout << '\n';
  }

  const auto violation = csrkn::check_rkn_symplectic(t);
  if (violation) {
    const bool bbar = violation->kind == csrkn::RknSymplecticViolation::Kind::BBarRelation;
    std::cout << "symplectic: violated ("
              << (bbar ? "b_bar_i = b_i(1-c_i)" : "b_i(b_bar_j-a_ij) = b_j(b_bar_i-a_ji)")
              << " at i=" << violation->i + 1 << " j=" << violation->j + 1
              << ", residual=" << csrkn::format_shortest(violation->residual) << ")\n";
    if (loaded.declared_symplectic) {
      ok = false;
    }
  } else {
    std::cout << "symplectic: yes\n";
  }
  std::cout << (ok ? "verified" : "verification FAILED") << '\n';
  return ok ? kExitOk : kExitVerifyFailed;
}

int integrate(const std::string& problem_name, int order, double theta, double h,
              long long steps, long long stride, const std::string& out) {
  check_order(order);
  if (!(h > 0.0)) {
    throw UsageError("--h must be positive");
  }
  if (steps < 0 || stride < 1) {
    throw UsageError("--steps must be >= 0 and --stride >= 1");
  }
  const auto problem = lookup_problem(problem_name);
  csrkn::StepperConfig cfg;
  cfg.h = h;
  const auto tableau = csrkn::make_family_tableau(order, theta);
  const auto traj = csrkn::integrate(problem.system, tableau, problem.initial, cfg,
                                     static_cast<std::size_t>(steps),
                                     static_cast<std::size_t>(stride));
  std::ostringstream csv;
  csrkn::write_csv(traj, csv);
  emit(out, csv.str());

  std::ostream& summary = out.empty() ? std::cerr : std::cout;
  const auto& fin = traj.final_state;
  summary << "final t=" << csrkn::format_17g(fin.t) << " p=[";
  for (Eigen::Index k = 0; k < fin.p.size(); ++k) {
    summary << (k ? ", " : "") << csrkn::format_17g(fin.p(k));
  }
  summary << "] q=[";
  for (Eigen::Index k = 0; k < fin.q.size(); ++k) {
    summary << (k ? ", " : "") << csrkn::format_17g(fin.q(k));
  }
  summary << "]\nmax relative energy error: "
          << csrkn::format_17g(traj.max_relative_energy_error) << '\n';
  return kExitOk;
}

int convergence(const std::string& problem_name, const std::vector<int>& orders, double theta,
                const std::vector<std::string>& h_tokens, double final_time,
                const std::string& out) {
  if (orders.empty()) {
    throw UsageError("at least one --order is required");
  }
  std::vector<double> step_sizes;
  for (const auto& token : h_tokens) {
    if (token.empty()) {
      continue;
    }
    try {
      step_sizes.push_back(csrkn::parse_double(token));
    } catch (const std::invalid_argument&) {
      throw UsageError("--h: '" + token + "' is not a number");
    }
  }
  if (step_sizes.empty()) {
    throw UsageError("--h: the step-size list is empty");
  }
  std::vector<csrkn::MethodSpec> methods;
  for (int order : orders) {
    check_order(order);
    methods.push_back(csrkn::MethodSpec::family(order, theta));
  }
  const auto problem = lookup_problem(problem_name);
  std::vector<csrkn::ConvergenceReport> reports;
  try {
    reports = csrkn::run_convergence(problem, methods, step_sizes, final_time);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  nlohmann::json doc;
  doc["spec_version"] = csrkn::kFormatVersion;
  doc["problem"] = problem.name;
  doc["reports"] = nlohmann::json::array();
  for (const auto& r : reports) {
    doc["reports"].push_back(csrkn::to_json(r));
  }
  emit(out, doc.dump(2) + "\n");
  return kExitOk;
}

int drift(const std::string& problem_name, int order, double theta, double h, double horizon,
          const std::string& out) {
  check_order(order);
  const auto problem = lookup_problem(problem_name);
  csrkn::DriftReport report;
  csrkn::DriftReport baseline;
  try {
    report = csrkn::run_drift(problem, csrkn::MethodSpec::family(order, theta), h, horizon);
    baseline = csrkn::run_drift(problem, csrkn::MethodSpec::rk4_baseline(), h, horizon);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  auto doc = csrkn::to_json(report);
  doc["baseline"] = csrkn::to_json(baseline);
  doc["baseline"].erase("spec_version");
  emit(out, doc.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symplectic Runge-Kutta-Nystrom methods from continuous-stage Legendre expansions"};
  app.require_subcommand(1);
  // --h is the step size, so help is long-form only.
  app.set_help_flag("--help", "print help and exit");

  int order = 4;
  double theta = 0.0;
  std::string format = "json";
  std::string out;
  std::string problem;
  double h = 0.0;
  long long steps = 0;
  long long stride = 1;
  double horizon = 1.0;
  std::string tableau_path;
  std::vector<int> orders;
  std::vector<std::string> step_sizes;

  auto* gen = app.add_subcommand("gen-tableau", "emit the order-4/6/8 symplectic RKN tableau");
  gen->add_option("--order", order, "method order (4, 6 or 8)")->required();
  gen->add_option("--theta", theta, "free family parameter");
  gen->add_option("--format", format, "json or text");
  gen->add_option("--out", out, "output file (default: stdout)");

  auto* ver = app.add_subcommand("verify", "check order and symplecticity conditions of a tableau");
  ver->add_option("tableau", tableau_path, "tableau JSON file")->required();

  auto* integ = app.add_subcommand("integrate", "integrate a catalog problem and write a CSV");
  integ->add_option("--problem", problem, "problem name")->required();
  integ->add_option("--order", order, "method order (4, 6 or 8)")->required();
  integ->add_option("--theta", theta, "free family parameter");
  integ->add_option("--h", h, "step size")->required();
  integ->add_option("--steps", steps, "number of steps")->required();
  integ->add_option("--stride", stride, "output every n-th step");
  integ->add_option("--out", out, "CSV file (default: stdout)");

  auto* conv = app.add_subcommand("convergence", "empirical order study (JSON)");
  conv->add_option("--problem", problem, "problem name")->required();
  conv->add_option("--order", orders, "orders, e.g. 4,6,8")->delimiter(',')->required();
  conv->add_option("--theta", theta, "free family parameter");
  conv->add_option("--h", step_sizes, "step sizes, e.g. 0.1,0.05")
      ->delimiter(',')
      ->required();
  conv->add_option("--T", horizon, "final time (default 1)");
  conv->add_option("--out", out, "JSON file (default: stdout)");

  auto* dr = app.add_subcommand("drift", "long-time energy error study (JSON)");
  dr->add_option("--problem", problem, "problem name")->required();
  dr->add_option("--order", order, "method order (4, 6 or 8)")->required();
  dr->add_option("--theta", theta, "free family parameter");
  dr->add_option("--h", h, "step size")->required();
  dr->add_option("--T", horizon, "horizon")->required();
  dr->add_option("--out", out, "JSON file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      return gen_tableau(order, theta, format, out);
    }
    if (*ver) {
      return verify(tableau_path);
    }
    if (*integ) {
      return integrate(problem, order, theta, h, steps, stride, out);
    }
    if (*conv) {
      return convergence(problem, orders, theta, step_sizes, horizon, out);
    }
    if (*dr) {
      return drift(problem, order, theta, h, horizon, out);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const csrkn::IntegrationError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
