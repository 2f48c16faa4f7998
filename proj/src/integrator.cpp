#include "csrkn/integrator.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "csrkn/number_format.hpp"

namespace csrkn {

HamiltonianSystem::HamiltonianSystem(Matrix mass, Potential potential, Gradient gradient)
    : mass_(std::move(mass)), potential_(std::move(potential)), gradient_(std::move(gradient)) {
  if (mass_.rows() == 0 || mass_.rows() != mass_.cols()) {
    throw std::invalid_argument("mass matrix must be square and non-empty");
  }
  if (mass_ != mass_.transpose()) {
    throw std::invalid_argument("mass matrix must be exactly symmetric");
  }
  if (!potential_ || !gradient_) {
    throw std::invalid_argument("potential and its gradient are both required");
  }
}

double gradient_mismatch(const HamiltonianSystem& sys, const std::vector<Vector>& points,
                         double fd_step) {
  double worst = 0.0;
  for (const auto& q : points) {
    const Vector grad = sys.grad_potential(q);
    const double scale = std::max(1.0, grad.lpNorm<Eigen::Infinity>());
    for (Eigen::Index k = 0; k < q.size(); ++k) {
      Vector plus = q;
      Vector minus = q;
      plus(k) += fd_step;
      minus(k) -= fd_step;
      const double fd = (sys.potential(plus) - sys.potential(minus)) / (2.0 * fd_step);
      worst = std::max(worst, std::abs(fd - grad(k)) / scale);
    }
  }
  return worst;
}

void StepperConfig::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("step size h must be positive and finite");
  }
  if (!(stage_tol > 0.0)) {
    throw std::invalid_argument("stage_tol must be positive");
  }
  if (max_iters < 1) {
    throw std::invalid_argument("max_iters must be at least 1");
  }
  if (!(relaxation > 0.0 && relaxation <= 1.0)) {
    throw std::invalid_argument("relaxation must lie in (0, 1]");
  }
}

IntegrationError::IntegrationError(std::string detail)
    : std::runtime_error(detail), detail_(std::move(detail)), message_(detail_) {}

void IntegrationError::set_step_index(std::size_t step) {
  step_ = step;
  message_ = "step " + std::to_string(step) + ": " + detail_;
}

NonConvergence::NonConvergence(int iterations, double residual)
    : IntegrationError("stage iteration did not converge after " + std::to_string(iterations) +
                       " iterations (residual " + format_shortest(residual) +
                       "); reduce the step size"),
      iterations_(iterations),
      residual_(residual) {}

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw NonFiniteState(std::string("non-finite value in ") + what);
  }
}

void check_dimensions(const HamiltonianSystem& sys, const State& s) {
  if (s.p.size() != sys.dim() || s.q.size() != sys.dim()) {
    throw std::invalid_argument("state dimension does not match the system");
  }
}

}  // namespace

State step(const HamiltonianSystem& sys, const RknTableau& tableau, const State& s0,
           const StepperConfig& cfg) {
  cfg.validate();
  check_dimensions(sys, s0);
  const int s = tableau.stages();
  if (s < 1 || tableau.a_bar.rows() != s || tableau.a_bar.cols() != s ||
      tableau.b.size() != s || tableau.b_bar.size() != s) {
    throw std::invalid_argument("inconsistent tableau dimensions");
  }
  const int d = sys.dim();
  const double h = cfg.h;
  const double h2 = h * h;
  const Matrix& mass = sys.mass();

  const Vector velocity = mass * s0.p;
  Matrix base(d, s);
  for (int i = 0; i < s; ++i) {
    base.col(i) = s0.q + (h * tableau.c(i)) * velocity;
  }

  Matrix stages = base;
  Matrix g(d, s);
  const auto evaluate = [&] {
    for (int j = 0; j < s; ++j) {
      g.col(j) = sys.g(stages.col(j));
    }
    require_finite(g, "stage force");
  };
  evaluate();

  const double scale = 1.0 + s0.q.lpNorm<Eigen::Infinity>();
  double update = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    Matrix next = base + h2 * (mass * g) * tableau.a_bar.transpose();
    if (cfg.relaxation != 1.0) {
      next = stages + cfg.relaxation * (next - stages);
    }
    require_finite(next, "stage values");
    update = (next - stages).lpNorm<Eigen::Infinity>() / scale;
    stages = std::move(next);
    evaluate();
    if (update <= cfg.stage_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NonConvergence(cfg.max_iters, update);
  }

  State s1;
  s1.q = s0.q + h * velocity + h2 * (mass * (g * tableau.b_bar));
  s1.p = s0.p + h * (g * tableau.b);
  s1.t = s0.t + h;
  require_finite(s1.q, "updated position");
  require_finite(s1.p, "updated momentum");
  return s1;
}

State rk4_step(const HamiltonianSystem& sys, const State& s0, double h) {
  check_dimensions(sys, s0);
  const Matrix& mass = sys.mass();
  const auto rhs = [&](const Vector& p, const Vector& q) {
    return std::pair<Vector, Vector>{sys.g(q), mass * p};
  };
  const auto [k1p, k1q] = rhs(s0.p, s0.q);
  const auto [k2p, k2q] = rhs(s0.p + 0.5 * h * k1p, s0.q + 0.5 * h * k1q);
  const auto [k3p, k3q] = rhs(s0.p + 0.5 * h * k2p, s0.q + 0.5 * h * k2q);
  const auto [k4p, k4q] = rhs(s0.p + h * k3p, s0.q + h * k3q);
  State s1;
  s1.p = s0.p + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  s1.q = s0.q + (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
  s1.t = s0.t + h;
  require_finite(s1.q, "updated position");
  require_finite(s1.p, "updated momentum");
  return s1;
}

double relative_energy_error(double energy, double initial_energy) {
  const double diff = std::abs(energy - initial_energy);
  return initial_energy == 0.0 ? diff : diff / std::abs(initial_energy);
}

Trajectory integrate(const HamiltonianSystem& sys, const OneStepMap& advance, const State& s0,
                     std::size_t n_steps, std::size_t stride) {
  if (stride == 0) {
    throw std::invalid_argument("output stride must be at least 1");
  }
  check_dimensions(sys, s0);
  Trajectory traj;
  traj.initial_energy = sys.energy(s0.p, s0.q);
  traj.samples.push_back({s0.t, s0.p, s0.q, traj.initial_energy});

  State current = s0;
  for (std::size_t n = 1; n <= n_steps; ++n) {
    try {
      current = advance(current);
    } catch (IntegrationError& e) {
      e.set_step_index(n);
      throw;
    }
    const double energy = sys.energy(current.p, current.q);
    traj.max_relative_energy_error = std::max(
        traj.max_relative_energy_error, relative_energy_error(energy, traj.initial_energy));
    if (n % stride == 0 || n == n_steps) {
      traj.samples.push_back({current.t, current.p, current.q, energy});
    }
  }
  traj.final_state = current;
  return traj;
}

Trajectory integrate(const HamiltonianSystem& sys, const RknTableau& tableau, const State& s0,
                     const StepperConfig& cfg, std::size_t n_steps, std::size_t stride) {
  cfg.validate();
  return integrate(
      sys, [&](const State& s) { return step(sys, tableau, s, cfg); }, s0, n_steps, stride);
}

void write_csv(const Trajectory& traj, std::ostream& os) {
  const auto d = traj.samples.empty() ? 0 : traj.samples.front().p.size();
  os << 't';
  for (Eigen::Index k = 1; k <= d; ++k) {
    os << ",p_" << k;
  }
  for (Eigen::Index k = 1; k <= d; ++k) {
    os << ",q_" << k;
  }
  os << ",H,H_rel_err\n";
  for (const auto& row : traj.samples) {
    os << format_17g(row.t);
    for (Eigen::Index k = 0; k < d; ++k) {
      os << ',' << format_17g(row.p(k));
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      os << ',' << format_17g(row.q(k));
    }
    os << ',' << format_17g(row.energy) << ','
       << format_17g(relative_energy_error(row.energy, traj.initial_energy)) << '\n';
  }
}

Matrix step_jacobian(const OneStepMap& map, const State& s0, double fd_eps) {
  if (!(fd_eps > 0.0)) {
    throw std::invalid_argument("finite-difference step must be positive");
  }
  const auto d = s0.p.size();
  const auto pack = [d](const State& s) {
    Vector z(2 * d);
    z << s.p, s.q;
    return z;
  };
  const auto unpack = [d, &s0](const Vector& z) {
    return State{z.head(d), z.tail(d), s0.t};
  };
  const Vector z0 = pack(s0);
  Matrix jac(2 * d, 2 * d);
  for (Eigen::Index k = 0; k < 2 * d; ++k) {
    Vector plus = z0;
    Vector minus = z0;
    plus(k) += fd_eps;
    minus(k) -= fd_eps;
    jac.col(k) = (pack(map(unpack(plus))) - pack(map(unpack(minus)))) / (2.0 * fd_eps);
  }
  return jac;
}

double symplecticity_defect(const OneStepMap& map, const State& s0, double fd_eps) {
  const Matrix jac = step_jacobian(map, s0, fd_eps);
  const auto d = s0.p.size();
  Matrix skew = Matrix::Zero(2 * d, 2 * d);
  skew.topRightCorner(d, d) = Matrix::Identity(d, d);
  skew.bottomLeftCorner(d, d) = -Matrix::Identity(d, d);
  return (jac.transpose() * skew * jac - skew).norm();
}

double symplecticity_defect(const HamiltonianSystem& sys, const RknTableau& tableau,
                            const State& s0, const StepperConfig& cfg, double fd_eps) {
  return symplecticity_defect([&](const State& s) { return step(sys, tableau, s, cfg); }, s0,
                              fd_eps);
}

}  // namespace csrkn
