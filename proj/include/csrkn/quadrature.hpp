#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace csrkn {

/// Quadrature rule on [0,1]: int_0^1 g = sum_i weights[i] g(nodes[i]).
/// exactness_order p means the rule is exact for polynomials of degree < p.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int exactness_order = 0;

  std::size_t stages() const { return nodes.size(); }
};

inline constexpr int kMaxGaussStages = 32;

/// s-point Gauss-Legendre rule on [0,1], nodes ascending, exactness order 2s.
/// Nodes come from Newton iteration on the degree-s Legendre polynomial.
QuadratureRule gauss_legendre(int stages);

/// The same rule assembled from closed-form radicals; only s = 2, 3, 4.
std::optional<QuadratureRule> gauss_legendre_closed_form(int stages);

template <class F>
double integrate(const QuadratureRule& rule, F&& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.stages(); ++i) {
    sum += rule.weights[i] * f(rule.nodes[i]);
  }
  return sum;
}

}  // namespace csrkn
