#pragma once

#include <vector>

// Shifted Legendre polynomials on [0,1], normalized so that
// int_0^1 P_i(t) P_k(t) dt = delta_ik.
namespace csrkn::legendre {

inline constexpr int kMaxDegree = 64;

/// P_degree(t). Arguments outside [0,1] are evaluated by extrapolation;
/// see is_extrapolation().
double eval(int degree, double t);

/// P_0(t), ..., P_max_degree(t) in one pass of the recurrence.
std::vector<double> eval_all(int max_degree, double t);

/// int_0^x P_degree(t) dt, from the closed-form antiderivative identities.
double integral_from_zero(int degree, double x);

/// xi_index = 1 / (2 sqrt(4 index^2 - 1)), index >= 1.
double xi(int index);

inline bool is_extrapolation(double t) { return t < 0.0 || t > 1.0; }

}  // namespace csrkn::legendre
