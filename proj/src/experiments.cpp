#include "csrkn/experiments.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "csrkn/number_format.hpp"
#include "csrkn/tableau.hpp"
#include "csrkn/version.hpp"

namespace csrkn {

MethodSpec MethodSpec::family(int order, double theta) {
  if (order != 4 && order != 6 && order != 8) {
    throw std::invalid_argument("order must be 4, 6 or 8, got " + std::to_string(order));
  }
  return {Kind::SymplecticFamily, order, theta};
}

MethodSpec MethodSpec::rk4_baseline() { return {Kind::Rk4Baseline, 4, 0.0}; }

std::string MethodSpec::label() const {
  if (kind == Kind::Rk4Baseline) {
    return "rk4-baseline";
  }
  return "csrkn-order" + std::to_string(order) + "-theta" + format_shortest(theta);
}

int MethodSpec::claimed_order() const { return order; }

OneStepMap make_step_map(const HamiltonianSystem& sys, const MethodSpec& method,
                         const StepperConfig& cfg) {
  cfg.validate();
  if (method.kind == MethodSpec::Kind::Rk4Baseline) {
    const double h = cfg.h;
    return [&sys, h](const State& s) { return rk4_step(sys, s, h); };
  }
  auto tableau = std::make_shared<const RknTableau>(make_family_tableau(method.order, method.theta));
  return [&sys, tableau, cfg](const State& s) { return step(sys, *tableau, s, cfg); };
}

std::optional<double> fit_slope(const std::vector<double>& step_sizes,
                                const std::vector<std::optional<double>>& errors,
                                double floor) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < step_sizes.size() && k < errors.size(); ++k) {
    if (errors[k] && std::isfinite(*errors[k]) && *errors[k] > floor) {
      xs.push_back(std::log(step_sizes[k]));
      ys.push_back(std::log(*errors[k]));
    }
  }
  if (xs.size() < 2) {
    return std::nullopt;
  }
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k] / n;
    my += ys[k] / n;
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  if (sxx == 0.0) {
    return std::nullopt;
  }
  return sxy / sxx;
}

namespace {

std::size_t steps_for(double h, double final_time) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("step sizes must be positive");
  }
  const double n = std::round(final_time / h);
  if (n < 1.0 || std::abs(n * h - final_time) > 1e-9 * std::max(1.0, final_time)) {
    throw std::invalid_argument("step size " + format_shortest(h) +
                                " does not divide the final time " + format_shortest(final_time));
  }
  return static_cast<std::size_t>(n);
}

State run_to(const OneStepMap& advance, State s, std::size_t n_steps) {
  for (std::size_t n = 1; n <= n_steps; ++n) {
    try {
      s = advance(s);
    } catch (IntegrationError& e) {
      e.set_step_index(n);
      throw;
    }
  }
  return s;
}

double state_error(const State& a, const State& b) {
  return std::max((a.p - b.p).lpNorm<Eigen::Infinity>(), (a.q - b.q).lpNorm<Eigen::Infinity>());
}

}  // namespace

std::vector<ConvergenceReport> run_convergence(const ProblemSpec& problem,
                                               const std::vector<MethodSpec>& methods,
                                               const std::vector<double>& step_sizes,
                                               double final_time, const StepperConfig& base) {
  if (step_sizes.empty()) {
    throw std::invalid_argument("at least one step size is required");
  }
  if (methods.empty()) {
    throw std::invalid_argument("at least one method is required");
  }
  if (!(final_time > 0.0)) {
    throw std::invalid_argument("final time must be positive");
  }
  std::vector<std::size_t> steps;
  for (double h : step_sizes) {
    steps.push_back(steps_for(h, final_time));
  }

  State reference_state;
  std::string reference_kind;
  if (problem.has_reference()) {
    reference_state = problem.reference(final_time);
    reference_kind = "closed-form";
  } else {
    double h_min = step_sizes.front();
    std::size_t n_min = steps.front();
    for (std::size_t k = 0; k < step_sizes.size(); ++k) {
      if (step_sizes[k] < h_min) {
        h_min = step_sizes[k];
        n_min = steps[k];
      }
    }
    StepperConfig cfg = base;
    cfg.h = final_time / static_cast<double>(n_min * 20);
    const auto advance = make_step_map(problem.system, MethodSpec::family(8, 0.0), cfg);
    reference_state = run_to(advance, problem.initial, n_min * 20);
    reference_kind = "csrkn-order8-theta0 at h=" + format_shortest(cfg.h);
  }

  std::vector<ConvergenceReport> reports;
  for (const auto& method : methods) {
    ConvergenceReport report;
    report.method = method.label();
    report.problem = problem.name;
    report.reference = reference_kind;
    report.final_time = final_time;
    report.claimed_order = method.claimed_order();
    report.step_sizes = step_sizes;
    for (std::size_t k = 0; k < step_sizes.size(); ++k) {
      StepperConfig cfg = base;
      cfg.h = final_time / static_cast<double>(steps[k]);
      try {
        const auto advance = make_step_map(problem.system, method, cfg);
        const State end = run_to(advance, problem.initial, steps[k]);
        report.errors.emplace_back(state_error(end, reference_state));
        report.failures.emplace_back();
      } catch (const IntegrationError& e) {
        report.errors.emplace_back(std::nullopt);
        report.failures.emplace_back("h=" + format_shortest(step_sizes[k]) + ": " + e.what());
      }
    }
    report.fitted_slope = fit_slope(step_sizes, report.errors, kSlopeErrorFloor);
    for (const auto& e : report.errors) {
      report.points_used += (e && *e > kSlopeErrorFloor) ? 1 : 0;
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

DriftReport run_drift(const ProblemSpec& problem, const MethodSpec& method, double h,
                      double horizon, const StepperConfig& base) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("step size must be positive");
  }
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be non-negative");
  }
  if (horizon / h > kMaxDriftSteps) {
    throw std::invalid_argument("horizon / h exceeds the guard of 1e8 steps");
  }
  StepperConfig cfg = base;
  cfg.h = h;
  const auto advance = make_step_map(problem.system, method, cfg);
  const auto total = static_cast<std::size_t>(std::max(1.0, std::round(horizon / h)));

  // Checkpoint steps for horizon * 10^-k, collected from the horizon down.
  std::vector<std::size_t> marks;
  for (double t = horizon; ; t /= 10.0) {
    const double n = std::round(t / h);
    if (n < 1.0) {
      break;
    }
    const auto step_n = static_cast<std::size_t>(n);
    if (marks.empty() || step_n < marks.back()) {
      marks.push_back(step_n);
    }
  }
  if (marks.empty()) {
    marks.push_back(total);
  }

  DriftReport report;
  report.method = method.label();
  report.problem = problem.name;
  report.h = h;
  report.horizon = horizon;
  report.steps = total;

  const auto& sys = problem.system;
  const double h0 = sys.energy(problem.initial.p, problem.initial.q);
  State s = problem.initial;
  double max_err = 0.0;
  auto next_mark = marks.rbegin();
  for (std::size_t n = 1; n <= total; ++n) {
    try {
      s = advance(s);
    } catch (IntegrationError& e) {
      e.set_step_index(n);
      throw;
    }
    const double err = relative_energy_error(sys.energy(s.p, s.q), h0);
    max_err = std::max(max_err, err);
    if (next_mark != marks.rend() && *next_mark == n) {
      report.checkpoints.push_back({s.t, n, err, max_err});
      ++next_mark;
    }
  }
  report.max_relative_error = max_err;

  const double hundredth = std::round(horizon / 100.0 / h);
  if (hundredth >= 1.0 && marks.size() >= 3) {
    for (const auto& c : report.checkpoints) {
      if (c.step == static_cast<std::size_t>(hundredth) && c.max_relative_error > 0.0) {
        report.drift_ratio = report.checkpoints.back().max_relative_error / c.max_relative_error;
      }
    }
  }
  return report;
}

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const ConvergenceReport& report) {
  auto errors = nlohmann::json::array();
  for (const auto& e : report.errors) {
    errors.push_back(optional_number(e));
  }
  auto failures = nlohmann::json::array();
  for (const auto& f : report.failures) {
    if (!f.empty()) {
      failures.push_back(f);
    }
  }
  nlohmann::json j;
  j["spec_version"] = kFormatVersion;
  j["method"] = report.method;
  j["problem"] = report.problem;
  j["reference"] = report.reference;
  j["final_time"] = report.final_time;
  j["claimed_order"] = report.claimed_order;
  j["step_sizes"] = report.step_sizes;
  j["errors"] = errors;
  j["fitted_slope"] = optional_number(report.fitted_slope);
  j["slope_deviation"] = report.fitted_slope
                             ? nlohmann::json(*report.fitted_slope - report.claimed_order)
                             : nlohmann::json(nullptr);
  j["points_used"] = report.points_used;
  j["failures"] = failures;
  return j;
}

nlohmann::json to_json(const DriftReport& report) {
  auto checkpoints = nlohmann::json::array();
  for (const auto& c : report.checkpoints) {
    checkpoints.push_back({{"t", c.t},
                           {"step", c.step},
                           {"relative_energy_error", c.relative_error},
                           {"max_relative_energy_error", c.max_relative_error}});
  }
  nlohmann::json j;
  j["spec_version"] = kFormatVersion;
  j["method"] = report.method;
  j["problem"] = report.problem;
  j["h"] = report.h;
  j["T"] = report.horizon;
  j["steps"] = report.steps;
  j["checkpoints"] = checkpoints;
  j["max_relative_energy_error"] = report.max_relative_error;
  j["drift_ratio"] = optional_number(report.drift_ratio);
  return j;
}

}  // namespace csrkn
