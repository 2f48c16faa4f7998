#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "csrkn/integrator.hpp"
#include "csrkn/problems.hpp"
#include "csrkn/tableau.hpp"

using namespace csrkn;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

HamiltonianSystem quadratic(const Matrix& mass, const Matrix& stiffness) {
  return HamiltonianSystem(
      mass, [stiffness](const Vector& q) { return 0.5 * q.dot(stiffness * q); },
      [stiffness](const Vector& q) -> Vector { return stiffness * q; });
}

HamiltonianSystem free_particle(int d) {
  return HamiltonianSystem(
      Matrix::Identity(d, d), [](const Vector&) { return 0.0; },
      [d](const Vector&) -> Vector { return Vector::Zero(d); });
}

StepperConfig config(double h) {
  StepperConfig cfg;
  cfg.h = h;
  return cfg;
}

State explicit_euler(const HamiltonianSystem& sys, const State& s, double h) {
  return {s.p + h * sys.g(s.q), s.q + h * (sys.mass() * s.p), s.t + h};
}

}  // namespace

TEST_CASE("system validation") {
  Matrix asym(2, 2);
  asym << 1, 0.5, 0.4, 1;
  CHECK_THROWS_AS(quadratic(asym, Matrix::Identity(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(quadratic(Matrix(2, 3), Matrix::Identity(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(HamiltonianSystem(Matrix::Identity(1, 1), nullptr,
                                    [](const Vector& q) -> Vector { return q; }),
                  std::invalid_argument);
}

TEST_CASE("config validation") {
  const auto sys = harmonic_oscillator();
  const auto t = make_family_tableau(4, 0.0);
  for (double h : {0.0, -0.1, std::numeric_limits<double>::quiet_NaN()}) {
    CHECK_THROWS_AS(step(sys.system, t, sys.initial, config(h)), std::invalid_argument);
  }
  auto cfg = config(0.1);
  cfg.stage_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = config(0.1);
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  State wrong{vec({0, 0}), vec({1, 1}), 0.0};
  CHECK_THROWS_AS(step(sys.system, t, wrong, config(0.1)), std::invalid_argument);
}

TEST_CASE("free particle moves in a straight line") {
  const auto sys = free_particle(3);
  const State s0{vec({0.3, -1.2, 2.0}), vec({1.0, 2.0, -0.5}), 0.25};
  for (int order : {4, 6, 8}) {
    for (double h : {0.01, 0.7, 3.0}) {
      const auto s1 = step(sys, make_family_tableau(order, 0.4), s0, config(h));
      CHECK((s1.q - (s0.q + h * s0.p)).lpNorm<Eigen::Infinity>() < 1e-15 * (1 + h));
      CHECK(s1.p == s0.p);
      CHECK(s1.t == doctest::Approx(0.25 + h));
    }
  }
}

TEST_CASE("harmonic oscillator, one order-4 step") {
  const auto prob = harmonic_oscillator();
  const double h = 0.1;
  const auto s1 = step(prob.system, make_family_tableau(4, 0.0), prob.initial, config(h));
  CHECK(std::fabs(s1.p(0) + std::sin(h)) < 5e-8);
  CHECK(std::fabs(s1.q(0) - std::cos(h)) < 5e-8);
}

TEST_CASE("singular mass matrix freezes the second coordinate") {
  Matrix mass = Matrix::Zero(2, 2);
  mass(0, 0) = 1.0;
  const auto sys = quadratic(mass, Matrix::Identity(2, 2));
  const State s0{vec({0.2, 0.5}), vec({1.0, 0.3}), 0.0};
  const double h = 0.05;
  const auto tab = make_family_tableau(6, 0.0);
  const auto s1 = step(sys, tab, s0, config(h));
  CHECK(s1.q(1) == s0.q(1));
  // Stage values in direction 2 all equal q2, so g_2 = -q2 at every stage.
  CHECK(s1.p(1) == doctest::Approx(s0.p(1) - h * s0.q(1)).epsilon(1e-15));
  // Direction 1 is an ordinary oscillator.
  const double c = std::cos(h), s = std::sin(h);
  CHECK(std::fabs(s1.q(0) - (s0.q(0) * c + s0.p(0) * s)) < 1e-11);
  CHECK(std::fabs(s1.p(0) - (s0.p(0) * c - s0.q(0) * s)) < 1e-11);
}

TEST_CASE("stage solve agrees with a direct linear solve") {
  Matrix mass(2, 2), stiff(2, 2);
  mass << 2.0, 0.3, 0.3, 1.0;
  stiff << 1.5, -0.4, -0.4, 0.8;
  const auto sys = quadratic(mass, stiff);
  const State s0{vec({0.4, -0.1}), vec({0.7, 1.3}), 0.0};
  for (int order : {4, 6, 8}) {
    const auto tab = make_family_tableau(order, 0.3);
    const double h = 0.15;
    auto cfg = config(h);
    const auto s1 = step(sys, tab, s0, cfg);

    // Q = base - h^2 (A kron M K) Q, stacked stage by stage.
    const int s = tab.stages(), d = 2;
    const Matrix mk = mass * stiff;
    Matrix lhs = Matrix::Identity(s * d, s * d);
    Vector rhs(s * d);
    for (int i = 0; i < s; ++i) {
      rhs.segment(i * d, d) = s0.q + h * tab.c(i) * (mass * s0.p);
      for (int j = 0; j < s; ++j) lhs.block(i * d, j * d, d, d) += h * h * tab.a_bar(i, j) * mk;
    }
    const Vector stages = lhs.partialPivLu().solve(rhs);
    Vector q1 = s0.q + h * (mass * s0.p);
    Vector p1 = s0.p;
    for (int i = 0; i < s; ++i) {
      const Vector g = -stiff * stages.segment(i * d, d);
      q1 += h * h * tab.b_bar(i) * (mass * g);
      p1 += h * tab.b(i) * g;
    }
    const double scale = 1.0 + s0.q.lpNorm<Eigen::Infinity>();
    CHECK((s1.q - q1).lpNorm<Eigen::Infinity>() < cfg.stage_tol * scale);
    CHECK((s1.p - p1).lpNorm<Eigen::Infinity>() < cfg.stage_tol * scale);
  }
}

TEST_CASE("momentum flip reverses a step") {
  const auto prob = henon_heiles();
  for (int order : {4, 6, 8}) {
    const auto tab = make_family_tableau(order, 0.0);
    const auto cfg = config(0.1);
    const State s0{vec({0.3, -0.2}), vec({0.25, 0.1}), 0.0};
    auto s1 = step(prob.system, tab, s0, cfg);
    s1.p = -s1.p;
    auto s2 = step(prob.system, tab, s1, cfg);
    s2.p = -s2.p;
    CHECK((s2.q - s0.q).lpNorm<Eigen::Infinity>() < 10 * cfg.stage_tol);
    CHECK((s2.p - s0.p).lpNorm<Eigen::Infinity>() < 10 * cfg.stage_tol);
  }
}

TEST_CASE("symplecticity defect on Henon-Heiles") {
  const auto prob = henon_heiles();
  const auto cfg = config(0.1);
  CHECK(symplecticity_defect(prob.system, make_family_tableau(4, 0.0), prob.initial, cfg, 1e-5) <
        1e-8);
  for (int order : {4, 6, 8}) {
    for (double theta : {0.0, 1.7}) {
      CHECK(symplecticity_defect(prob.system, make_family_tableau(order, theta), prob.initial,
                                 cfg, 1e-5) < 1e-7);
    }
  }
}

TEST_CASE("det J = 1 for the linear oscillator") {
  const auto prob = harmonic_oscillator();
  for (int order : {4, 6, 8}) {
    const auto tab = make_family_tableau(order, -0.8);
    const auto cfg = config(0.2);
    const Matrix jac = step_jacobian(
        [&](const State& s) { return step(prob.system, tab, s, cfg); }, prob.initial, 1e-5);
    CHECK(std::fabs(jac.determinant() - 1.0) < 1e-10);
  }
}

TEST_CASE("explicit Euler is visibly not symplectic") {
  const auto prob = harmonic_oscillator();
  double prev = 0.0;
  for (double h : {0.025, 0.05, 0.1}) {
    const double defect = symplecticity_defect(
        [&](const State& s) { return explicit_euler(prob.system, s, h); }, prob.initial, 1e-5);
    // det J = 1 + h^2, so the defect grows like h^2 here; at h = 0.1 it is 1e-2.
    CHECK(defect > prev);
    prev = defect;
  }
  CHECK(prev > 1e-3);
  // In 2x2, J^T S J - S = (det J - 1) S and |S|_F = sqrt 2. Euler: det J = 1 + h^2.
  CHECK(prev == doctest::Approx(std::sqrt(2.0) * 0.01).epsilon(1e-8));
}

TEST_CASE("RK4 defect on the oscillator matches its stability polynomial") {
  // det J = |R(ih)|^2 with R(z) = 1 + z + z^2/2 + z^3/6 + z^4/24, so
  // det J - 1 = -h^6/72 + h^8/576.
  const auto prob = harmonic_oscillator();
  for (double h : {0.1, 0.3}) {
    const double expected = std::sqrt(2.0) * std::fabs(-std::pow(h, 6) / 72 + std::pow(h, 8) / 576);
    const double defect = symplecticity_defect(
        [&](const State& s) { return rk4_step(prob.system, s, h); }, prob.initial, 1e-4);
    CHECK(defect == doctest::Approx(expected).epsilon(1e-4));
  }
}

TEST_CASE("non-convergence carries the step index") {
  const auto prob = harmonic_oscillator();
  auto cfg = config(0.5);
  cfg.max_iters = 3;
  const auto tab = make_family_tableau(4, 0.0);
  CHECK_THROWS_AS(step(prob.system, tab, prob.initial, cfg), NonConvergence);
  try {
    integrate(prob.system, tab, prob.initial, cfg, 10);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.iterations() == 3);
    CHECK(e.residual() > cfg.stage_tol);
    CHECK(e.step_index() == 1u);
    CHECK(std::string(e.what()).rfind("step 1:", 0) == 0);
    CHECK(std::string(e.what()).find("reduce the step size") != std::string::npos);
  }

  int calls = 0;
  const OneStepMap flaky = [&](const State& s) {
    if (++calls == 7) throw NonConvergence(100, 0.5);
    return rk4_step(prob.system, s, 0.1);
  };
  try {
    integrate(prob.system, flaky, prob.initial, 20);
    FAIL("expected NonConvergence");
  } catch (const IntegrationError& e) {
    CHECK(e.step_index() == 7u);
  }
}

TEST_CASE("non-finite forces abort") {
  const HamiltonianSystem sys(
      Matrix::Identity(1, 1), [](const Vector& q) { return -std::log(q(0)); },
      [](const Vector& q) -> Vector { return Vector::Constant(1, -1.0 / q(0)); });
  const State s0{vec({0.0}), vec({0.0}), 0.0};
  CHECK_THROWS_AS(step(sys, make_family_tableau(4, 0.0), s0, config(0.1)), NonFiniteState);
}

TEST_CASE("relaxation still reaches the same fixed point") {
  const auto prob = henon_heiles();
  const auto tab = make_family_tableau(6, 0.0);
  auto cfg = config(0.1);
  const auto plain = step(prob.system, tab, prob.initial, cfg);
  cfg.relaxation = 0.7;
  cfg.max_iters = 400;
  const auto damped = step(prob.system, tab, prob.initial, cfg);
  CHECK((plain.q - damped.q).lpNorm<Eigen::Infinity>() < 1e-13);
  CHECK((plain.p - damped.p).lpNorm<Eigen::Infinity>() < 1e-13);
}

TEST_CASE("trajectory recording") {
  const auto prob = harmonic_oscillator();
  const auto tab = make_family_tableau(4, 0.0);
  const auto cfg = config(0.1);

  const auto empty = integrate(prob.system, tab, prob.initial, cfg, 0);
  REQUIRE(empty.samples.size() == 1);
  CHECK(empty.samples[0].q == prob.initial.q);
  CHECK(empty.max_relative_energy_error == 0.0);
  CHECK(empty.final_state.q == prob.initial.q);

  CHECK(integrate(prob.system, tab, prob.initial, cfg, 100, 10).samples.size() == 11);
  // The final state is always recorded, even off-stride.
  const auto odd = integrate(prob.system, tab, prob.initial, cfg, 25, 10);
  CHECK(odd.samples.size() == 4);
  CHECK(odd.samples.back().t == doctest::Approx(2.5));
  CHECK_THROWS_AS(integrate(prob.system, tab, prob.initial, cfg, 5, 0), std::invalid_argument);
}

TEST_CASE("csv layout") {
  const auto prob = henon_heiles();
  const auto traj =
      integrate(prob.system, make_family_tableau(4, 0.0), prob.initial, config(0.1), 3);
  std::ostringstream os;
  write_csv(traj, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,p_1,p_2,q_1,q_2,H,H_rel_err");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
  }
  CHECK(rows == 4);
  CHECK(os.str().find("\n0,0.10000000000000001,") != std::string::npos);
}

TEST_CASE("order 6, 1e5 steps: energy error small and not accumulating") {
  const auto prob = harmonic_oscillator();
  const auto tab = make_family_tableau(6, 0.0);
  const auto early = integrate(prob.system, tab, prob.initial, config(0.1), 1000, 1000);
  const auto full = integrate(prob.system, tab, prob.initial, config(0.1), 100000, 1000);
  CHECK(full.max_relative_energy_error < 1e-9);
  // Bounded oscillation: the long run is not meaningfully worse than the first 1000 steps.
  CHECK(full.max_relative_energy_error < 3.0 * early.max_relative_energy_error + 1e-14);
}

TEST_CASE("Kepler e = 0.6, one period, order 4 against an order-8 reference") {
  const auto prob = kepler(0.6);
  const double h = 0.005;
  const auto n = static_cast<std::size_t>(std::lround(2.0 * M_PI / h));
  const auto coarse =
      integrate(prob.system, make_family_tableau(4, 0.0), prob.initial, config(h), n, n);
  const auto fine = integrate(prob.system, make_family_tableau(8, 0.0), prob.initial,
                              config(h / 100), n * 100, n * 100);
  const double err =
      (coarse.final_state.q - fine.final_state.q).lpNorm<Eigen::Infinity>();
  CHECK(err < 1e-6);
  // The reference itself agrees with the closed-form orbit.
  const auto exact = prob.reference(fine.final_state.t);
  CHECK((fine.final_state.q - exact.q).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("gradient mismatch detects a wrong gradient") {
  const auto good = harmonic_oscillator();
  std::vector<Vector> pts;
  for (double x : {-1.0, 0.2, 0.9}) pts.push_back(vec({x}));
  CHECK(gradient_mismatch(good.system, pts) < 1e-6);
  const HamiltonianSystem bad(
      Matrix::Identity(1, 1), [](const Vector& q) { return 0.5 * q.squaredNorm(); },
      [](const Vector& q) -> Vector { return 1.1 * q; });
  CHECK(gradient_mismatch(bad, pts) > 1e-3);
}
