#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "csrkn/integrator.hpp"

namespace csrkn {

struct ConservedQuantity {
  std::string name;
  std::function<double(const State&)> value;
};

struct ProblemSpec {
  std::string name;
  std::string description;
  HamiltonianSystem system;
  State initial;
  // Exact flow from `initial`, when one is known.
  std::function<State(double)> reference;
  std::optional<double> period;
  std::vector<ConservedQuantity> invariants;

  bool has_reference() const { return static_cast<bool>(reference); }
};

class UnknownProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// M = 1, V = q^2 / 2, starting at (p, q) = (0, 1).
ProblemSpec harmonic_oscillator();

/// M = 1, V = -cos q, starting at rest from q0.
ProblemSpec pendulum(double q0 = 1.0);

/// Planar two-body problem, M = I, V = -1/|q|, perihelion start
/// q = (1 - e, 0), p = (0, sqrt((1 + e) / (1 - e))): H = -1/2, period 2 pi.
ProblemSpec kepler(double eccentricity);

/// M = I, V = (q1^2 + q2^2) / 2 + q1^2 q2 - q2^3 / 3.
ProblemSpec henon_heiles();

/// M = diag(1, 0), V = |q|^2 / 2. The second coordinate cannot move.
ProblemSpec frozen_direction();

std::vector<ProblemSpec> catalog();

/// Looks a problem up by name. "kepler-e<ecc>" accepts any 0 <= ecc < 1.
ProblemSpec find_problem(std::string_view name);

}  // namespace csrkn
