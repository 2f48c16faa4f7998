#include "csrkn/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "csrkn/legendre.hpp"
#include "csrkn/quadrature.hpp"
#include "csrkn/version.hpp"

namespace csrkn {

double LegendreSeries2D::coefficient(int i, int j) const {
  const auto it = terms_.find({i, j});
  return it == terms_.end() ? 0.0 : it->second;
}

void LegendreSeries2D::set(int i, int j, double value) {
  if (i < 0 || j < 0 || i > legendre::kMaxDegree || j > legendre::kMaxDegree) {
    throw std::out_of_range("series index (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") out of range");
  }
  if (value == 0.0) {
    terms_.erase({i, j});
  } else {
    terms_[{i, j}] = value;
  }
}

void LegendreSeries2D::add(int i, int j, double value) { set(i, j, coefficient(i, j) + value); }

int LegendreSeries2D::max_degree_tau() const {
  int d = -1;
  for (const auto& [idx, _] : terms_) {
    d = std::max(d, idx.tau);
  }
  return d;
}

int LegendreSeries2D::max_degree_sigma() const {
  int d = -1;
  for (const auto& [idx, _] : terms_) {
    d = std::max(d, idx.sigma);
  }
  return d;
}

double LegendreSeries2D::eval(double tau, double sigma) const {
  if (terms_.empty()) {
    return 0.0;
  }
  const auto p_tau = legendre::eval_all(max_degree_tau(), tau);
  const auto p_sigma = legendre::eval_all(max_degree_sigma(), sigma);
  double sum = 0.0;
  for (const auto& [idx, a] : terms_) {
    sum += a * p_tau[static_cast<std::size_t>(idx.tau)] * p_sigma[static_cast<std::size_t>(idx.sigma)];
  }
  return sum;
}

CsRknScheme build_order_scheme(int eta, int zeta, const FreeParameters& omega) {
  if (eta < 1 || zeta < 1) {
    throw std::invalid_argument("eta and zeta must be >= 1");
  }
  for (const auto& [idx, value] : omega) {
    if (idx.tau < zeta - 1 || idx.sigma < eta - 1) {
      throw std::invalid_argument("free coefficient at (" + std::to_string(idx.tau) + ", " +
                                  std::to_string(idx.sigma) + ") violates i >= zeta-1 = " +
                                  std::to_string(zeta - 1) + ", j >= eta-1 = " +
                                  std::to_string(eta - 1));
    }
  }

  using legendre::xi;
  CsRknScheme scheme;
  scheme.eta = eta;
  scheme.zeta = zeta;
  scheme.omega = omega;

  auto& a = scheme.a_bar;
  a.add(0, 0, 1.0 / 6.0);
  a.add(0, 1, -0.5 * xi(1));
  a.add(1, 0, 0.5 * xi(1));

  const int n1 = std::max(eta - 3, zeta - 1);
  const int n2 = std::max(eta - 2, zeta - 2);
  const int n3 = std::max(eta - 1, zeta - 3);
  for (int k = 1; k <= n1; ++k) {
    a.add(k - 1, k + 1, xi(k) * xi(k + 1));
  }
  for (int k = 1; k <= n2; ++k) {
    a.add(k, k, -(xi(k) * xi(k) + xi(k + 1) * xi(k + 1)));
  }
  for (int k = 1; k <= n3; ++k) {
    a.add(k + 1, k - 1, xi(k) * xi(k + 1));
  }
  for (const auto& [idx, value] : omega) {
    a.add(idx.tau, idx.sigma, value);
  }

  scheme.symplectic = !check_symplectic(scheme).has_value();
  return scheme;
}

CsRknScheme build_symplectic_family(int order, double theta) {
  if (order != 4 && order != 6 && order != 8) {
    throw std::invalid_argument("symplectic families exist for order 4, 6 or 8, got " +
                                std::to_string(order));
  }
  const int eta = order / 2;
  FreeParameters omega;
  if (theta != 0.0) {
    omega[{eta - 1, eta - 1}] = theta;
  }
  auto scheme = build_order_scheme(eta, eta, omega);
  if (!scheme.symplectic) {
    throw std::logic_error("symplectic family of order " + std::to_string(order) +
                           " failed its own symplecticity check");
  }
  return scheme;
}

std::optional<SymplecticWitness> check_symplectic(const CsRknScheme& scheme, double tol) {
  const auto& a = scheme.a_bar;
  const double antisym = a.coefficient(0, 1) - a.coefficient(1, 0) + legendre::xi(1);
  if (std::abs(antisym) > tol) {
    return SymplecticWitness{{0, 1}, antisym};
  }
  for (const auto& [idx, value] : a.terms()) {
    if (idx.tau + idx.sigma <= 1) {
      continue;
    }
    const double residual = value - a.coefficient(idx.sigma, idx.tau);
    if (std::abs(residual) > tol) {
      return SymplecticWitness{idx, residual};
    }
  }
  return std::nullopt;
}

double eval_A(const CsRknScheme& scheme, double tau, double sigma) {
  return scheme.a_bar.eval(tau, sigma);
}

namespace {

constexpr int kSamplePoints = 20;

double sample_point(int k) { return static_cast<double>(k) / (kSamplePoints - 1); }

// Smallest Gauss rule exact for polynomials of the given degree.
QuadratureRule exact_rule(int degree) {
  return gauss_legendre(std::clamp(degree / 2 + 1, 1, kMaxGaussStages));
}

int contiguous_max(const std::vector<KappaResidual>& rows) {
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

SimplifyingAssumptionReport verify_simplifying_assumptions(const CsRknScheme& scheme,
                                                           int cn_kappa_max, int dn_kappa_max,
                                                           double tol) {
  const auto& a = scheme.a_bar;
  const int d_tau = std::max(a.max_degree_tau(), 0);
  const int d_sigma = std::max(a.max_degree_sigma(), 0);
  SimplifyingAssumptionReport report;

  // CN: int_0^1 Abar(tau, s) C(s)^(k-1) ds = C(tau)^(k+1) / (k (k+1)).
  for (int k = 1; k <= cn_kappa_max; ++k) {
    const auto rule = exact_rule(d_sigma + k - 1);
    double worst = 0.0;
    for (int n = 0; n < kSamplePoints; ++n) {
      const double tau = sample_point(n);
      const double lhs = integrate(rule, [&](double s) {
        return a.eval(tau, s) * std::pow(CsRknScheme::c(s), k - 1);
      });
      const double rhs = std::pow(CsRknScheme::c(tau), k + 1) / (k * (k + 1.0));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    report.cn.push_back({k, worst, worst <= tol});
  }

  // DN: int_0^1 B(t) C(t)^(k-1) Abar(t, sigma) dt
  //       = B C^(k+1) / (k (k+1)) - B C / k + B / (k+1), evaluated at sigma.
  for (int k = 1; k <= dn_kappa_max; ++k) {
    const auto rule = exact_rule(d_tau + k - 1);
    double worst = 0.0;
    for (int n = 0; n < kSamplePoints; ++n) {
      const double sigma = sample_point(n);
      const double lhs = integrate(rule, [&](double t) {
        return CsRknScheme::b(t) * std::pow(CsRknScheme::c(t), k - 1) * a.eval(t, sigma);
      });
      const double bs = CsRknScheme::b(sigma);
      const double cs = CsRknScheme::c(sigma);
      const double rhs =
          bs * std::pow(cs, k + 1) / (k * (k + 1.0)) - bs * cs / k + bs / (k + 1.0);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    report.dn.push_back({k, worst, worst <= tol});
  }

  report.cn_max_kappa = contiguous_max(report.cn);
  report.dn_max_kappa = contiguous_max(report.dn);
  return report;
}

nlohmann::json to_json(const CsRknScheme& scheme) {
  nlohmann::json omega = nlohmann::json::array();
  for (const auto& [idx, value] : scheme.omega) {
    omega.push_back({idx.tau, idx.sigma, value});
  }
  return {{"spec_version", kFormatVersion},
          {"eta", scheme.eta},
          {"zeta", scheme.zeta},
          {"omega", omega},
          {"symplectic", scheme.symplectic}};
}

CsRknScheme scheme_from_json(const nlohmann::json& j) {
  FreeParameters omega;
  for (const auto& entry : j.at("omega")) {
    if (!entry.is_array() || entry.size() != 3) {
      throw std::invalid_argument("omega entries must be [i, j, value]");
    }
    omega[{entry[0].get<int>(), entry[1].get<int>()}] = entry[2].get<double>();
  }
  auto scheme = build_order_scheme(j.at("eta").get<int>(), j.at("zeta").get<int>(), omega);
  if (j.value("symplectic", false) && !scheme.symplectic) {
    throw std::invalid_argument("scheme is flagged symplectic but its coefficients are not");
  }
  return scheme;
}

}  // namespace csrkn
