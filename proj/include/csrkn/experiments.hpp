#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csrkn/integrator.hpp"
#include "csrkn/problems.hpp"

namespace csrkn {

/// Either a member of the order-4/6/8 symplectic families or the RK4 baseline.
struct MethodSpec {
  enum class Kind { SymplecticFamily, Rk4Baseline };

  Kind kind = Kind::SymplecticFamily;
  int order = 4;
  double theta = 0.0;

  static MethodSpec family(int order, double theta = 0.0);
  static MethodSpec rk4_baseline();

  std::string label() const;
  int claimed_order() const;
};

/// One-step map of the method on the system (the tableau is built once).
OneStepMap make_step_map(const HamiltonianSystem& sys, const MethodSpec& method,
                         const StepperConfig& cfg);

/// Least-squares slope of log(error) against log(h), using only finite errors
/// above `floor`; empty with fewer than two usable points.
std::optional<double> fit_slope(const std::vector<double>& step_sizes,
                                const std::vector<std::optional<double>>& errors,
                                double floor);

inline constexpr double kSlopeErrorFloor = 100.0 * 2.220446049250313e-16;

struct ConvergenceReport {
  std::string method;
  std::string problem;
  std::string reference;  // "closed-form" or the refined run used
  double final_time = 0.0;
  int claimed_order = 0;
  std::vector<double> step_sizes;
  // Max-norm error over (p, q) at the final time; empty where the run failed.
  std::vector<std::optional<double>> errors;
  std::vector<std::string> failures;
  std::optional<double> fitted_slope;
  std::size_t points_used = 0;
};

/// One report per method. The reference is the closed-form flow when the
/// problem has one, else an order-8 run at min(h) / 20. Each h must divide T.
std::vector<ConvergenceReport> run_convergence(const ProblemSpec& problem,
                                               const std::vector<MethodSpec>& methods,
                                               const std::vector<double>& step_sizes,
                                               double final_time,
                                               const StepperConfig& base = {});

struct DriftCheckpoint {
  double t = 0.0;
  std::size_t step = 0;
  double relative_error = 0.0;
  double max_relative_error = 0.0;
};

struct DriftReport {
  std::string method;
  std::string problem;
  double h = 0.0;
  double horizon = 0.0;
  std::size_t steps = 0;
  std::vector<DriftCheckpoint> checkpoints;  // at horizon * 10^-k, ascending
  double max_relative_error = 0.0;
  // Max-so-far error at the horizon over that at horizon / 100.
  std::optional<double> drift_ratio;
};

inline constexpr double kMaxDriftSteps = 1e8;

DriftReport run_drift(const ProblemSpec& problem, const MethodSpec& method, double h,
                      double horizon, const StepperConfig& base = {});

nlohmann::json to_json(const ConvergenceReport& report);
nlohmann::json to_json(const DriftReport& report);

}  // namespace csrkn
