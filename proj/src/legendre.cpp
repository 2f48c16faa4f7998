#include "csrkn/legendre.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace csrkn::legendre {

namespace {

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxDegree) {
    throw std::out_of_range("Legendre degree " + std::to_string(degree) +
                            " outside [0, " + std::to_string(kMaxDegree) + "]");
  }
}

}  // namespace

std::vector<double> eval_all(int max_degree, double t) {
  check_degree(max_degree);
  // Bonnet recurrence for the classical polynomials L_n on [-1,1], then
  // P_n(t) = sqrt(2n+1) L_n(2t-1).
  const double x = 2.0 * t - 1.0;
  std::vector<double> values(static_cast<std::size_t>(max_degree) + 1);
  double prev = 1.0;
  double curr = x;
  values[0] = 1.0;
  for (int n = 1; n <= max_degree; ++n) {
    if (n > 1) {
      const double next = ((2.0 * n - 1.0) * x * curr - (n - 1.0) * prev) / n;
      prev = curr;
      curr = next;
    }
    values[static_cast<std::size_t>(n)] = std::sqrt(2.0 * n + 1.0) * curr;
  }
  return values;
}

double eval(int degree, double t) {
  return eval_all(degree, t)[static_cast<std::size_t>(degree)];
}

double xi(int index) {
  if (index < 1) {
    throw std::invalid_argument("xi is defined for index >= 1, got " + std::to_string(index));
  }
  const double n = index;
  return 1.0 / (2.0 * std::sqrt(4.0 * n * n - 1.0));
}

double integral_from_zero(int degree, double x) {
  check_degree(degree);
  if (degree + 1 > kMaxDegree) {
    throw std::out_of_range("antiderivative of degree " + std::to_string(degree) +
                            " needs P_" + std::to_string(degree + 1));
  }
  const auto values = eval_all(degree + 1, x);
  const auto at = [&](int k) { return values[static_cast<std::size_t>(k)]; };
  if (degree == 0) {
    return xi(1) * at(1) + 0.5 * at(0);
  }
  return xi(degree + 1) * at(degree + 1) - xi(degree) * at(degree - 1);
}

}  // namespace csrkn::legendre
