#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csrkn/tableau.hpp"

namespace csrkn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// H(p, q) = 1/2 p^T M p + V(q), i.e. q'' = -M grad V(q). M may be singular.
class HamiltonianSystem {
 public:
  using Potential = std::function<double(const Vector&)>;
  using Gradient = std::function<Vector(const Vector&)>;

  /// Throws std::invalid_argument unless M is square and exactly symmetric.
  HamiltonianSystem(Matrix mass, Potential potential, Gradient gradient);

  int dim() const { return static_cast<int>(mass_.rows()); }
  const Matrix& mass() const { return mass_; }

  double potential(const Vector& q) const { return potential_(q); }
  Vector grad_potential(const Vector& q) const { return gradient_(q); }

  /// g(q) = -grad V(q); drives the momentum update.
  Vector g(const Vector& q) const { return -gradient_(q); }
  /// f(q) = M g(q); the acceleration.
  Vector f(const Vector& q) const { return mass_ * g(q); }

  double energy(const Vector& p, const Vector& q) const {
    return 0.5 * p.dot(mass_ * p) + potential_(q);
  }

 private:
  Matrix mass_;
  Potential potential_;
  Gradient gradient_;
};

/// Largest relative mismatch between grad V and central differences of V
/// over the given points; relative to max(1, |grad V|_inf).
double gradient_mismatch(const HamiltonianSystem& sys, const std::vector<Vector>& points,
                         double fd_step = 1e-6);

struct State {
  Vector p;
  Vector q;
  double t = 0.0;
};

struct StepperConfig {
  double h = 0.01;
  double stage_tol = 1e-14;
  int max_iters = 100;
  // Relaxation factor of the fixed-point update; 1 is the plain iteration.
  double relaxation = 1.0;

  void validate() const;
};

/// Base for failures inside a step; integrate() attaches the step index.
class IntegrationError : public std::runtime_error {
 public:
  explicit IntegrationError(std::string detail);

  const char* what() const noexcept override { return message_.c_str(); }
  const std::string& detail() const { return detail_; }
  std::optional<std::size_t> step_index() const { return step_; }
  void set_step_index(std::size_t step);

 private:
  std::string detail_;
  std::string message_;
  std::optional<std::size_t> step_;
};

class NonConvergence : public IntegrationError {
 public:
  NonConvergence(int iterations, double residual);

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class NonFiniteState : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

using OneStepMap = std::function<State(const State&)>;

/// One step of the RKN scheme. The stage system
///   Q_i = q0 + h c_i M p0 + h^2 sum_j a_bar(i,j) f(Q_j)
/// is solved by fixed-point iteration from Q_i = q0 + h c_i M p0, stopping once
/// the max-norm update is below stage_tol (1 + |q0|_inf). Then
///   q1 = q0 + h M p0 + h^2 sum_i b_bar(i) f(Q_i),  p1 = p0 + h sum_i b(i) g(Q_i).
State step(const HamiltonianSystem& sys, const RknTableau& tableau, const State& s0,
           const StepperConfig& cfg);

/// Classical explicit RK4 on (p' = g(q), q' = M p). Non-symplectic; kept only
/// as a baseline for contrast.
State rk4_step(const HamiltonianSystem& sys, const State& s0, double h);

struct TrajectorySample {
  double t = 0.0;
  Vector p;
  Vector q;
  double energy = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double initial_energy = 0.0;
  // Over every step, not only the recorded samples.
  double max_relative_energy_error = 0.0;
  State final_state;
};

/// |H - H0| / |H0|, or |H - H0| when H0 == 0.
double relative_energy_error(double energy, double initial_energy);

/// Applies `advance` n_steps times. Records the initial state, every
/// stride-th state, and the final state.
Trajectory integrate(const HamiltonianSystem& sys, const OneStepMap& advance, const State& s0,
                     std::size_t n_steps, std::size_t stride = 1);

Trajectory integrate(const HamiltonianSystem& sys, const RknTableau& tableau, const State& s0,
                     const StepperConfig& cfg, std::size_t n_steps, std::size_t stride = 1);

/// Header t,p_1..p_d,q_1..q_d,H,H_rel_err; 17 significant digits.
void write_csv(const Trajectory& traj, std::ostream& os);

/// || J^T S J - S ||_F for the Jacobian J of (p0, q0) -> (p1, q1), by central
/// differences; S = [[0, I], [-I, 0]].
double symplecticity_defect(const OneStepMap& map, const State& s0, double fd_eps = 1e-6);

double symplecticity_defect(const HamiltonianSystem& sys, const RknTableau& tableau,
                            const State& s0, const StepperConfig& cfg, double fd_eps = 1e-6);

/// Jacobian of the one-step map with respect to z = (p, q).
Matrix step_jacobian(const OneStepMap& map, const State& s0, double fd_eps = 1e-6);

}  // namespace csrkn
