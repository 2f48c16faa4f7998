#include "csrkn/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace csrkn {

namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kNewtonMaxIters = 100;

struct LegendreValue {
  double value;
  double slope;
};

// Classical L_n and L_n' on [-1,1].
LegendreValue classical_legendre(int n, double x) {
  double prev = 1.0;
  double curr = x;
  for (int k = 2; k <= n; ++k) {
    const double next = ((2.0 * k - 1.0) * x * curr - (k - 1.0) * prev) / k;
    prev = curr;
    curr = next;
  }
  return {curr, n * (x * curr - prev) / (x * x - 1.0)};
}

}  // namespace

QuadratureRule gauss_legendre(int stages) {
  if (stages < 1 || stages > kMaxGaussStages) {
    throw std::out_of_range("Gauss-Legendre stages must lie in [1, " +
                            std::to_string(kMaxGaussStages) + "], got " +
                            std::to_string(stages));
  }
  const auto s = static_cast<std::size_t>(stages);
  QuadratureRule rule;
  rule.nodes.resize(s);
  rule.weights.resize(s);
  rule.exactness_order = 2 * stages;
  if (stages == 1) {
    rule.nodes[0] = 0.5;
    rule.weights[0] = 1.0;
    return rule;
  }

  // Roots come in pairs +-x; solve for the non-negative half only.
  for (std::size_t i = 0; i < (s + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (stages + 0.5));
    LegendreValue lv{};
    bool converged = false;
    for (int iter = 0; iter < kNewtonMaxIters; ++iter) {
      lv = classical_legendre(stages, x);
      const double dx = lv.value / lv.slope;
      x -= dx;
      if (std::abs(dx) <= kNewtonTol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw std::runtime_error("Newton iteration for Gauss node " + std::to_string(i) +
                               " of " + std::to_string(stages) + " did not converge");
    }
    lv = classical_legendre(stages, x);
    // Weight on [-1,1] is 2 / ((1-x^2) L_n'(x)^2); halve it for [0,1].
    const double w = 1.0 / ((1.0 - x * x) * lv.slope * lv.slope);
    // x is the i-th largest root.
    rule.nodes[s - 1 - i] = 0.5 * (1.0 + x);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.weights[s - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (s % 2 == 1) {
    rule.nodes[s / 2] = 0.5;
  }
  return rule;
}

std::optional<QuadratureRule> gauss_legendre_closed_form(int stages) {
  QuadratureRule rule;
  rule.exactness_order = 2 * stages;
  switch (stages) {
    case 2: {
      const double r3 = std::sqrt(3.0);
      rule.nodes = {(3.0 - r3) / 6.0, (3.0 + r3) / 6.0};
      rule.weights = {0.5, 0.5};
      return rule;
    }
    case 3: {
      const double r15 = std::sqrt(15.0);
      rule.nodes = {(5.0 - r15) / 10.0, 0.5, (5.0 + r15) / 10.0};
      rule.weights = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};
      return rule;
    }
    case 4: {
      const double r30 = std::sqrt(30.0);
      const double outer = std::sqrt(525.0 + 70.0 * r30);
      const double inner = std::sqrt(525.0 - 70.0 * r30);
      rule.nodes = {(35.0 - outer) / 70.0, (35.0 - inner) / 70.0, (35.0 + inner) / 70.0,
                    (35.0 + outer) / 70.0};
      rule.weights = {0.25 - r30 / 72.0, 0.25 + r30 / 72.0, 0.25 + r30 / 72.0,
                      0.25 - r30 / 72.0};
      return rule;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace csrkn
