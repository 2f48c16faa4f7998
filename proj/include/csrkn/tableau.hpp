#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "csrkn/quadrature.hpp"
#include "csrkn/scheme.hpp"

namespace csrkn {

/// Finite-stage RKN coefficients
///   Q_i = q0 + h c_i q0' + h^2 sum_j a_bar(i,j) f(Q_j)
///   q1  = q0 + h q0'     + h^2 sum_i b_bar(i) f(Q_i)
///   q1' = q0'            + h   sum_i b(i) f(Q_i)
struct RknTableau {
  Eigen::MatrixXd a_bar;
  Eigen::VectorXd b_bar;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  int claimed_order = 0;
  bool symplectic = false;

  int stages() const { return static_cast<int>(c.size()); }
};

/// Applies the quadrature rule to the continuous-stage scheme:
/// a_bar(i,j) = b_j Abar(c_i, c_j), b_bar(i) = b_i (1 - c_i).
/// claimed_order is the guaranteed order min(p, 2 alpha + 2, alpha + beta)
/// with alpha = min(eta, p - deg_sigma + 1), beta = min(zeta, p - deg_tau + 1).
RknTableau discretize(const CsRknScheme& scheme, const QuadratureRule& rule);

/// The order-4/6/8 symplectic family discretized with Gauss(order / 2).
RknTableau make_family_tableau(int order, double theta);

inline constexpr double kConditionTol = 1e-12;

struct RknSymplecticViolation {
  enum class Kind { BBarRelation, Bilinear };
  Kind kind = Kind::Bilinear;
  int i = 0;
  int j = 0;
  double residual = 0.0;
};

/// Checks b_bar_i = b_i (1 - c_i) and
/// b_i (b_bar_j - a_bar_ij) = b_j (b_bar_i - a_bar_ji); empty if both hold.
std::optional<RknSymplecticViolation> check_rkn_symplectic(const RknTableau& t,
                                                           double tol = kConditionTol);

struct ConditionRow {
  int kappa = 0;
  double max_residual = 0.0;
  bool holds = false;
};

struct OrderConditionReport {
  std::vector<ConditionRow> b;   // kappa = 1..xi
  std::vector<ConditionRow> cn;  // kappa = 1..eta-1
  std::vector<ConditionRow> dn;  // kappa = 1..zeta-1
  // Largest satisfied arguments: B(b_order), CN(cn_order), DN(dn_order).
  int b_order = 0;
  int cn_order = 1;
  int dn_order = 1;
  double b_bar_residual = 0.0;
  bool b_bar_consistent = false;
  // min(b_order, 2 cn_order + 2, cn_order + dn_order); only when b_bar is consistent.
  std::optional<int> implied_order;
};

OrderConditionReport check_order_conditions(const RknTableau& t, int xi, int eta, int zeta,
                                            double tol = kConditionTol);

/// Order implied by the simplifying assumptions with bounds generous enough
/// for any s-stage tableau; empty when b_bar != b (1 - c).
std::optional<int> derive_order(const RknTableau& t, double tol = kConditionTol);

}  // namespace csrkn
