#pragma once

#include <compare>
#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

namespace csrkn {

/// Index (i, j) of the basis function P_i(tau) P_j(sigma).
struct IndexPair {
  int tau = 0;
  int sigma = 0;

  friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

/// Truncated tensor Legendre series  sum a_(i,j) P_i(tau) P_j(sigma).
/// Zero coefficients are never stored, so the populated set is exactly the support.
class LegendreSeries2D {
 public:
  using Terms = std::map<IndexPair, double>;

  double coefficient(int i, int j) const;
  void set(int i, int j, double value);
  void add(int i, int j, double value);

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Largest populated i (resp. j); -1 for an empty series.
  int max_degree_tau() const;
  int max_degree_sigma() const;

  double eval(double tau, double sigma) const;

 private:
  Terms terms_;
};

using FreeParameters = std::map<IndexPair, double>;

/// Continuous-stage RKN coefficients with B(tau) = 1, C(tau) = tau and
/// Bbar(tau) = 1 - tau fixed; only Abar(tau, sigma) varies.
struct CsRknScheme {
  LegendreSeries2D a_bar;
  int eta = 1;
  int zeta = 1;
  FreeParameters omega;
  bool symplectic = false;

  static double b(double) { return 1.0; }
  static double c(double tau) { return tau; }
  static double b_bar(double tau) { return 1.0 - tau; }
};

/// Abar built from the structural terms that enforce CN(eta) and DN(zeta),
/// plus the free coefficients omega. Every omega key (i, j) needs
/// i >= zeta - 1 and j >= eta - 1.
CsRknScheme build_order_scheme(int eta, int zeta, const FreeParameters& omega = {});

/// One-parameter symplectic family of order 4, 6 or 8: eta = zeta = order / 2
/// and the single free coefficient theta at (eta - 1, eta - 1).
CsRknScheme build_symplectic_family(int order, double theta);

inline constexpr double kSymplecticTol = 1e-13;

struct SymplecticWitness {
  IndexPair index;
  double residual = 0.0;
};

/// Empty when the coefficients satisfy a_(0,1) - a_(1,0) = -xi_1 and
/// a_(i,j) = a_(j,i) for i + j > 1; otherwise the first violation.
std::optional<SymplecticWitness> check_symplectic(const CsRknScheme& scheme,
                                                  double tol = kSymplecticTol);

double eval_A(const CsRknScheme& scheme, double tau, double sigma);

struct KappaResidual {
  int kappa = 0;
  double max_residual = 0.0;
  bool holds = false;
};

struct SimplifyingAssumptionReport {
  // B(kappa) holds for every kappa because B = 1 and C = tau.
  bool b_holds_for_all = true;
  std::vector<KappaResidual> cn;
  std::vector<KappaResidual> dn;
  // Largest kappa such that the condition holds for 1..kappa (0 if none).
  int cn_max_kappa = 0;
  int dn_max_kappa = 0;
};

inline constexpr double kSimplifyingTol = 1e-12;

/// Evaluates the continuous CN and DN identities for kappa = 1..kappa_max at
/// fixed sample points, integrating with a Gauss rule exact for the integrand.
SimplifyingAssumptionReport verify_simplifying_assumptions(const CsRknScheme& scheme,
                                                           int cn_kappa_max, int dn_kappa_max,
                                                           double tol = kSimplifyingTol);

nlohmann::json to_json(const CsRknScheme& scheme);
CsRknScheme scheme_from_json(const nlohmann::json& j);

}  // namespace csrkn
