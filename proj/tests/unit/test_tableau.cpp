#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <iostream>
#include <random>

#include "csrkn/quadrature.hpp"
#include "csrkn/scheme.hpp"
#include "csrkn/tableau.hpp"
#include "printed_tableaux.hpp"

using namespace csrkn;

namespace {

RknTableau manual(std::initializer_list<std::initializer_list<double>> a,
                  std::initializer_list<double> b_bar, std::initializer_list<double> b,
                  std::initializer_list<double> c) {
  const auto s = static_cast<Eigen::Index>(c.size());
  RknTableau t;
  t.a_bar.resize(s, s);
  Eigen::Index i = 0;
  for (const auto& row : a) {
    Eigen::Index k = 0;
    for (double v : row) t.a_bar(i, k++) = v;
    ++i;
  }
  t.b_bar = Eigen::Map<const Eigen::VectorXd>(b_bar.begin(), s);
  t.b = Eigen::Map<const Eigen::VectorXd>(b.begin(), s);
  t.c = Eigen::Map<const Eigen::VectorXd>(c.begin(), s);
  return t;
}

void report(const std::vector<fixture::Mismatch>& mm, int order, double theta) {
  for (const auto& m : mm) {
    std::cout << "order " << order << " theta " << theta << ": " << m.field << "(" << m.i;
    if (m.j >= 0) std::cout << "," << m.j;
    std::cout << ") generated " << m.generated << " printed " << static_cast<double>(m.printed)
              << '\n';
  }
}

}  // namespace

TEST_CASE("order-4 family reproduces the published table") {
  for (double theta : {0.0, 1.0, -2.5}) {
    const auto t = discretize(build_symplectic_family(4, theta), gauss_legendre(2));
    double worst = 0.0;
    const auto mm = fixture::compare(t, fixture::printed_order4(theta), 1e-13, &worst);
    CAPTURE(theta);
    CHECK(mm.empty());
    CHECK(worst < 1e-13);
    CHECK(t.claimed_order == 4);
    CHECK(t.symplectic);
  }
  const auto t0 = make_family_tableau(4, 0.0);
  CHECK(t0.a_bar(0, 0) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  // Independent path: b_1 * Abar(c_1, c_1).
  const auto sc = build_symplectic_family(4, 0.0);
  CHECK(t0.a_bar(0, 0) == doctest::Approx(0.5 * eval_A(sc, t0.c(0), t0.c(0))).epsilon(1e-15));
}

TEST_CASE("order-6 family against the published table") {
  for (double theta : {0.0, 1.0}) {
    const auto t = make_family_tableau(6, theta);
    const auto mm = fixture::compare(t, fixture::printed_order6(theta), 1e-13);
    report(mm, 6, theta);
    CHECK(mm.empty());
    const auto rep = check_order_conditions(t, 6, 3, 3);
    CHECK(rep.b_order >= 6);
    CHECK(rep.cn_order >= 3);
    CHECK(rep.dn_order >= 3);
    CHECK_FALSE(check_rkn_symplectic(t).has_value());
  }
}

TEST_CASE("order-8 family against the published table (informational)") {
  for (double theta : {0.0, 0.25}) {
    const auto t = make_family_tableau(8, theta);
    const auto mm = fixture::compare(t, fixture::printed_order8(theta), 1e-13);
    report(mm, 8, theta);
    if (theta == 0.0) CHECK(mm.empty());
    // With theta != 0 the printed table differs only where the term
    // sqrt(14) theta / 29400525 appears; replacing the denominator by 56
    // closes the gap.
    for (const auto& m : mm) {
      CHECK(m.field == "a_bar");
      const double gap = std::fabs(m.generated - static_cast<double>(m.printed));
      CHECK(gap == doctest::Approx(std::sqrt(14.0) * theta * (1.0 / 56 - 1.0 / 29400525))
                       .epsilon(1e-10));
    }
    const auto rep = check_order_conditions(t, 8, 4, 4);
    CHECK(rep.b_order >= 8);
    CHECK(rep.cn_order >= 4);
    CHECK(rep.dn_order >= 4);
    CHECK(rep.implied_order == 8);
    CHECK_FALSE(check_rkn_symplectic(t).has_value());
  }
}

TEST_CASE("check_rkn_symplectic examples") {
  CHECK_FALSE(check_rkn_symplectic(make_family_tableau(6, 0.0)).has_value());

  const auto g = gauss_legendre(2);
  const double c1 = g.nodes[0], c2 = g.nodes[1];
  const auto zero_a = manual({{0, 0}, {0, 0}}, {0.5 * (1 - c1), 0.5 * (1 - c2)}, {0.5, 0.5},
                             {c1, c2});
  const auto v = check_rkn_symplectic(zero_a);
  REQUIRE(v.has_value());
  CHECK(v->kind == RknSymplecticViolation::Kind::Bilinear);
  // b_1 bbar_2 - b_2 bbar_1 = (c_1 - c_2) / 4
  CHECK(std::fabs(v->residual) == doctest::Approx(std::fabs(c1 - c2) / 4.0));

  const auto one = manual({{0.125}}, {0.5}, {1.0}, {0.5});
  CHECK_FALSE(check_rkn_symplectic(one).has_value());

  const auto bad_bbar = manual({{0.125}}, {0.4}, {1.0}, {0.5});
  const auto v2 = check_rkn_symplectic(bad_bbar);
  REQUIRE(v2.has_value());
  CHECK(v2->kind == RknSymplecticViolation::Kind::BBarRelation);
}

TEST_CASE("B(1) only for b = [1, 0], c = [0, 1]") {
  const auto t = manual({{0, 0}, {0, 0}}, {1, 0}, {1, 0}, {0, 1});
  const auto rep = check_order_conditions(t, 4, 1, 1);
  CHECK(rep.b_order == 1);
  REQUIRE(rep.b.size() == 4);
  CHECK(rep.b[0].holds);
  CHECK_FALSE(rep.b[1].holds);
  CHECK(rep.b[1].max_residual == doctest::Approx(0.5));
  CHECK(rep.implied_order == 1);
}

TEST_CASE("bounds must be positive") {
  const auto t = make_family_tableau(4, 0.0);
  CHECK_THROWS_AS(check_order_conditions(t, 0, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(check_order_conditions(t, 4, 0, 2), std::invalid_argument);
}

TEST_CASE("inconsistent b_bar voids the implied order") {
  auto t = make_family_tableau(4, 0.0);
  t.b_bar(0) += 1e-6;
  const auto rep = check_order_conditions(t, 4, 2, 2);
  CHECK_FALSE(rep.b_bar_consistent);
  CHECK_FALSE(rep.implied_order.has_value());
  CHECK_FALSE(derive_order(t).has_value());
}

TEST_CASE("order transfer for the three families") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(0.5, 3.0);
  for (int eta : {2, 3, 4}) {
    const double theta = th(rng);
    const auto t = make_family_tableau(2 * eta, theta);
    const auto rep = check_order_conditions(t, 2 * eta, eta + 1, eta + 1);
    CAPTURE(eta);
    CHECK(rep.b_order == 2 * eta);
    CHECK(rep.cn_order == eta);
    CHECK(rep.dn_order == eta);
    CHECK(rep.implied_order == 2 * eta);
    CHECK(t.claimed_order == 2 * eta);
  }
}

TEST_CASE("implied order does not depend on theta") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> th(-10.0, 10.0);
  for (int order : {4, 6, 8}) {
    for (int k = 0; k < 10; ++k) {
      const auto t = make_family_tableau(order, th(rng));
      CHECK(derive_order(t) == order);
      CHECK(t.claimed_order == order);
    }
  }
}

TEST_CASE("quadrature keeps symplecticity for s <= 6") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> th(-5.0, 5.0);
  for (int order : {4, 6, 8}) {
    const auto sc = build_symplectic_family(order, th(rng));
    for (int s = 1; s <= 6; ++s) {
      const auto t = discretize(sc, gauss_legendre(s));
      CAPTURE(order);
      CAPTURE(s);
      CHECK(t.symplectic);
      CHECK_FALSE(check_rkn_symplectic(t).has_value());
    }
  }
  // A symmetric omega block with eta != zeta is also symplectic before and after.
  const auto sc = build_order_scheme(2, 2, {{{1, 2}, 0.3}, {{2, 1}, 0.3}});
  REQUIRE(sc.symplectic);
  for (int s = 1; s <= 6; ++s) CHECK_FALSE(check_rkn_symplectic(discretize(sc, gauss_legendre(s))).has_value());
}

TEST_CASE("claimed order from degrees and quadrature exactness") {
  const auto sc = build_symplectic_family(8, 0.0);
  // gauss(2): p = 4, deg = 4 -> alpha = min(4, 1) = 1, beta = 1 -> min(4, 4, 2) = 2.
  CHECK(discretize(sc, gauss_legendre(2)).claimed_order == 2);
  CHECK(discretize(sc, gauss_legendre(4)).claimed_order == 8);
  CHECK(discretize(build_symplectic_family(4, 0.0), gauss_legendre(5)).claimed_order == 4);
}
