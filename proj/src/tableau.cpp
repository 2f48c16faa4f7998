#include "csrkn/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace csrkn {

RknTableau discretize(const CsRknScheme& scheme, const QuadratureRule& rule) {
  const auto s = static_cast<Eigen::Index>(rule.stages());
  RknTableau t;
  t.a_bar.resize(s, s);
  t.b_bar.resize(s);
  t.b.resize(s);
  t.c.resize(s);
  for (Eigen::Index i = 0; i < s; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    t.c(i) = rule.nodes[ui];
    t.b(i) = rule.weights[ui];
    t.b_bar(i) = rule.weights[ui] * (1.0 - rule.nodes[ui]);
  }
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      t.a_bar(i, j) = t.b(j) * eval_A(scheme, t.c(i), t.c(j));
    }
  }

  const int p = rule.exactness_order;
  const int d_tau = std::max(scheme.a_bar.max_degree_tau(), 0);
  const int d_sigma = std::max(scheme.a_bar.max_degree_sigma(), 0);
  const int alpha = std::min(scheme.eta, p - d_sigma + 1);
  const int beta = std::min(scheme.zeta, p - d_tau + 1);
  t.claimed_order = std::max(0, std::min({p, 2 * alpha + 2, alpha + beta}));
  t.symplectic = scheme.symplectic;
  return t;
}

RknTableau make_family_tableau(int order, double theta) {
  const auto scheme = build_symplectic_family(order, theta);
  return discretize(scheme, gauss_legendre(order / 2));
}

std::optional<RknSymplecticViolation> check_rkn_symplectic(const RknTableau& t, double tol) {
  const int s = t.stages();
  for (int i = 0; i < s; ++i) {
    const double r = t.b_bar(i) - t.b(i) * (1.0 - t.c(i));
    if (std::abs(r) > tol) {
      return RknSymplecticViolation{RknSymplecticViolation::Kind::BBarRelation, i, i, r};
    }
  }
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      const double r = t.b(i) * (t.b_bar(j) - t.a_bar(i, j)) - t.b(j) * (t.b_bar(i) - t.a_bar(j, i));
      if (std::abs(r) > tol) {
        return RknSymplecticViolation{RknSymplecticViolation::Kind::Bilinear, i, j, r};
      }
    }
  }
  return std::nullopt;
}

namespace {

int contiguous(const std::vector<ConditionRow>& rows) {
  int k = 0;
  for (const auto& r : rows) {
    if (!r.holds) {
      break;
    }
    k = r.kappa;
  }
  return k;
}

}  // namespace

OrderConditionReport check_order_conditions(const RknTableau& t, int xi, int eta, int zeta,
                                            double tol) {
  if (xi < 1 || eta < 1 || zeta < 1) {
    throw std::invalid_argument("order condition bounds must be >= 1");
  }
  const int s = t.stages();
  OrderConditionReport report;

  for (int k = 1; k <= xi; ++k) {
    double sum = 0.0;
    for (int i = 0; i < s; ++i) {
      sum += t.b(i) * std::pow(t.c(i), k - 1);
    }
    const double r = std::abs(sum - 1.0 / k);
    report.b.push_back({k, r, r <= tol});
  }

  for (int k = 1; k <= eta - 1; ++k) {
    double worst = 0.0;
    for (int i = 0; i < s; ++i) {
      double sum = 0.0;
      for (int j = 0; j < s; ++j) {
        sum += t.a_bar(i, j) * std::pow(t.c(j), k - 1);
      }
      worst = std::max(worst, std::abs(sum - std::pow(t.c(i), k + 1) / (k * (k + 1.0))));
    }
    report.cn.push_back({k, worst, worst <= tol});
  }

  for (int k = 1; k <= zeta - 1; ++k) {
    double worst = 0.0;
    for (int j = 0; j < s; ++j) {
      double sum = 0.0;
      for (int i = 0; i < s; ++i) {
        sum += t.b(i) * std::pow(t.c(i), k - 1) * t.a_bar(i, j);
      }
      const double bj = t.b(j);
      const double cj = t.c(j);
      const double rhs = bj * std::pow(cj, k + 1) / (k * (k + 1.0)) - bj * cj / k + bj / (k + 1.0);
      worst = std::max(worst, std::abs(sum - rhs));
    }
    report.dn.push_back({k, worst, worst <= tol});
  }

  report.b_order = contiguous(report.b);
  report.cn_order = contiguous(report.cn) + 1;
  report.dn_order = contiguous(report.dn) + 1;

  for (int i = 0; i < s; ++i) {
    report.b_bar_residual =
        std::max(report.b_bar_residual, std::abs(t.b_bar(i) - t.b(i) * (1.0 - t.c(i))));
  }
  report.b_bar_consistent = report.b_bar_residual <= tol;
  if (report.b_bar_consistent) {
    report.implied_order = std::min({report.b_order, 2 * report.cn_order + 2,
                                     report.cn_order + report.dn_order});
  }
  return report;
}

std::optional<int> derive_order(const RknTableau& t, double tol) {
  const int s = t.stages();
  return check_order_conditions(t, 2 * s + 2, s + 3, s + 3, tol).implied_order;
}

}  // namespace csrkn
