#include "csrkn/problems.hpp"

#include <cmath>
#include <numbers>

#include "csrkn/number_format.hpp"

namespace csrkn {

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double x : values) {
    v(k++) = x;
  }
  return v;
}

ConservedQuantity energy_of(const HamiltonianSystem& sys) {
  return {"H", [sys](const State& s) { return sys.energy(s.p, s.q); }};
}

// Solves E - e sin E = mean_anomaly by Newton's method.
double eccentric_anomaly(double mean_anomaly, double e) {
  // Danby's starting value.
  const double sign = std::sin(mean_anomaly) < 0.0 ? -1.0 : 1.0;
  double big_e = mean_anomaly + 0.85 * e * sign;
  for (int iter = 0; iter < 100; ++iter) {
    const double delta = (big_e - e * std::sin(big_e) - mean_anomaly) / (1.0 - e * std::cos(big_e));
    big_e -= delta;
    if (std::abs(delta) < 1e-16) {
      break;
    }
  }
  return big_e;
}

}  // namespace

ProblemSpec harmonic_oscillator() {
  HamiltonianSystem sys(Matrix::Identity(1, 1),
                        [](const Vector& q) { return 0.5 * q.squaredNorm(); },
                        [](const Vector& q) { return Vector(q); });
  State initial{vec({0.0}), vec({1.0}), 0.0};
  auto reference = [](double t) { return State{vec({-std::sin(t)}), vec({std::cos(t)}), t}; };
  auto invariants = std::vector{energy_of(sys)};
  return {"harmonic", "harmonic oscillator, M = 1, V = q^2/2", std::move(sys), initial,
          reference, 2.0 * std::numbers::pi, std::move(invariants)};
}

ProblemSpec pendulum(double q0) {
  HamiltonianSystem sys(Matrix::Identity(1, 1),
                        [](const Vector& q) { return -std::cos(q(0)); },
                        [](const Vector& q) { return vec({std::sin(q(0))}); });
  State initial{vec({0.0}), vec({q0}), 0.0};
  auto invariants = std::vector{energy_of(sys)};
  return {"pendulum", "mathematical pendulum, M = 1, V = -cos q", std::move(sys), initial,
          nullptr, std::nullopt, std::move(invariants)};
}

ProblemSpec kepler(double e) {
  if (!(e >= 0.0 && e < 1.0)) {
    throw std::invalid_argument("Kepler eccentricity must lie in [0, 1)");
  }
  HamiltonianSystem sys(
      Matrix::Identity(2, 2), [](const Vector& q) { return -1.0 / q.norm(); },
      [](const Vector& q) {
        const double r = q.norm();
        return Vector(q / (r * r * r));
      });
  State initial{vec({0.0, std::sqrt((1.0 + e) / (1.0 - e))}), vec({1.0 - e, 0.0}), 0.0};
  const double root = std::sqrt(1.0 - e * e);
  auto reference = [e, root](double t) {
    const double big_e = eccentric_anomaly(std::remainder(t, 2.0 * std::numbers::pi), e);
    const double c = std::cos(big_e);
    const double s = std::sin(big_e);
    const double rate = 1.0 / (1.0 - e * c);
    return State{vec({-s * rate, root * c * rate}), vec({c - e, root * s}), t};
  };
  auto invariants = std::vector{
      energy_of(sys),
      ConservedQuantity{"L", [](const State& s) { return s.q(0) * s.p(1) - s.q(1) * s.p(0); }}};
  return {"kepler-e" + format_shortest(e), "Kepler two-body problem, eccentricity " + format_shortest(e),
          std::move(sys), initial, reference, 2.0 * std::numbers::pi, std::move(invariants)};
}

ProblemSpec henon_heiles() {
  HamiltonianSystem sys(
      Matrix::Identity(2, 2),
      [](const Vector& q) {
        return 0.5 * (q(0) * q(0) + q(1) * q(1)) + q(0) * q(0) * q(1) - q(1) * q(1) * q(1) / 3.0;
      },
      [](const Vector& q) {
        return vec({q(0) + 2.0 * q(0) * q(1), q(1) + q(0) * q(0) - q(1) * q(1)});
      });
  State initial{vec({0.1, 0.1}), vec({0.1, 0.1}), 0.0};
  auto invariants = std::vector{energy_of(sys)};
  return {"henon-heiles", "Henon-Heiles potential", std::move(sys), initial, nullptr,
          std::nullopt, std::move(invariants)};
}

ProblemSpec frozen_direction() {
  Matrix mass = Matrix::Zero(2, 2);
  mass(0, 0) = 1.0;
  HamiltonianSystem sys(mass, [](const Vector& q) { return 0.5 * q.squaredNorm(); },
                        [](const Vector& q) { return Vector(q); });
  const State initial{vec({0.0, 0.5}), vec({1.0, 0.3}), 0.0};
  // First coordinate rotates; q2 stays put while p2 decreases linearly.
  auto reference = [initial](double t) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    const double q1 = initial.q(0) * c + initial.p(0) * s;
    const double p1 = -initial.q(0) * s + initial.p(0) * c;
    return State{vec({p1, initial.p(1) - initial.q(1) * t}), vec({q1, initial.q(1)}), t};
  };
  auto invariants = std::vector{energy_of(sys)};
  return {"frozen", "singular mass matrix diag(1, 0), V = |q|^2/2", std::move(sys), initial,
          reference, std::nullopt, std::move(invariants)};
}

std::vector<ProblemSpec> catalog() {
  std::vector<ProblemSpec> out;
  out.push_back(harmonic_oscillator());
  out.push_back(pendulum());
  out.push_back(kepler(0.6));
  out.push_back(kepler(0.3));
  out.push_back(henon_heiles());
  out.push_back(frozen_direction());
  return out;
}

ProblemSpec find_problem(std::string_view name) {
  constexpr std::string_view kKeplerPrefix = "kepler-e";
  if (name.starts_with(kKeplerPrefix)) {
    try {
      return kepler(parse_double(name.substr(kKeplerPrefix.size())));
    } catch (const std::invalid_argument&) {
      // fall through to the generic error below
    }
  }
  for (auto& problem : catalog()) {
    if (problem.name == name) {
      return std::move(problem);
    }
  }
  std::string known;
  for (const auto& problem : catalog()) {
    known += (known.empty() ? "" : ", ") + problem.name;
  }
  throw UnknownProblem("unknown problem '" + std::string(name) + "'; available: " + known +
                       " (kepler-e<eccentricity> for any eccentricity in [0, 1))");
}

}  // namespace csrkn
