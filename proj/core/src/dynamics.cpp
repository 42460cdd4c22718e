#include "qanneal/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "qanneal/errors.hpp"
#include "qanneal/spectral.hpp"

namespace qanneal {

namespace {

using cd = std::complex<double>;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

KrylovPropagator::KrylovPropagator(std::size_t dim, PropagatorOptions options)
    : options_(options),
      basis_(static_cast<Eigen::Index>(dim), options.max_krylov + 1),
      work_(static_cast<Eigen::Index>(dim)) {
  if (options.max_krylov < 1) throw std::invalid_argument("KrylovPropagator: max_krylov must be positive");
}

void KrylovPropagator::step(const InstantHamiltonian& h, Eigen::VectorXcd& psi, double dt) {
  if (static_cast<Eigen::Index>(h.dim()) != basis_.rows() || psi.size() != basis_.rows())
    throw std::invalid_argument("KrylovPropagator: dimension mismatch");
  step_recursive(h, psi, dt, 0);
}

void KrylovPropagator::step_recursive(const InstantHamiltonian& h, Eigen::VectorXcd& psi, double dt,
                                      int depth) {
  if (try_step(h, psi, dt)) return;
  if (depth >= options_.max_subdivisions)
    throw NumericalError("Krylov propagator: step tolerance not met after " +
                         std::to_string(depth) + " subdivisions");
  step_recursive(h, psi, 0.5 * dt, depth + 1);
  step_recursive(h, psi, 0.5 * dt, depth + 1);
}

bool KrylovPropagator::try_step(const InstantHamiltonian& h, Eigen::VectorXcd& psi, double dt) {
  const double beta0 = psi.norm();
  if (beta0 == 0.0 || dt == 0.0) return true;
  const int max_m = options_.max_krylov;
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples v_j and v_{j+1}
  basis_.col(0) = psi / beta0;

  Eigen::VectorXcd coeffs;
  for (int j = 0; j < max_m; ++j) {
    auto vj = basis_.col(j);
    h.apply(vj, work_);
    ++matvecs_;
    const double a = vj.dot(work_).real();
    alpha.push_back(a);
    work_ -= a * vj;
    if (j > 0) work_ -= beta[j - 1] * basis_.col(j - 1);
    // one full reorthogonalization pass
    work_ -= basis_.leftCols(j + 1) * (basis_.leftCols(j + 1).adjoint() * work_);
    const double b = work_.norm();

    const int m = j + 1;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    const Eigen::VectorXcd phases =
        (eig.eigenvalues().cast<cd>() * cd(0.0, -dt)).array().exp().matrix();
    coeffs = eig.eigenvectors().cast<cd>() *
             (phases.asDiagonal() * eig.eigenvectors().row(0).transpose().cast<cd>());

    const double scale = std::max(1.0, std::abs(a));
    const bool breakdown = b <= 1e-13 * scale;
    const double error = beta0 * b * std::abs(coeffs(m - 1));
    if (breakdown || error <= options_.tolerance) {
      max_used_ = std::max(max_used_, m);
      psi = beta0 * (basis_.leftCols(m) * coeffs);
      return true;
    }
    beta.push_back(b);
    basis_.col(j + 1) = work_ / b;
  }
  max_used_ = std::max(max_used_, max_m);
  return false;
}

Bits initial_configuration(int n) {
  Bits config = 0;
  for (int i = 2; i <= n; i += 2) config |= Bits{1} << (i - 1);
  return config;
}

Eigen::VectorXcd initial_state(const HamiltonianParts& parts) {
  const auto index = parts.space.index(initial_configuration(parts.sites()));
  if (!index) throw std::invalid_argument("initial_state: configuration outside the state space");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(parts.dim()));
  psi(static_cast<Eigen::Index>(*index)) = 1.0;
  return psi;
}

void propagate(const ScheduledHamiltonian& h, Eigen::VectorXcd& psi, double s_begin, double s_end,
               double duration, int steps, const PropagatorOptions& options,
               const std::function<void(int, const Eigen::VectorXcd&)>& on_step) {
  if (steps < 1) throw std::invalid_argument("propagate: steps must be positive");
  if (static_cast<std::size_t>(psi.size()) != h.dim())
    throw std::invalid_argument("propagate: state dimension mismatch");
  KrylovPropagator propagator(h.dim(), options);
  const double dt = duration / steps;
  for (int n = 0; n < steps; ++n) {
    const double s_mid = s_begin + (s_end - s_begin) * (n + 0.5) / steps;
    propagator.step(h.at(s_mid), psi, dt);
    const double drift = std::abs(psi.norm() - 1.0);
    if (drift > options.norm_drift_limit)
      throw NumericalError("propagate: norm drift " + std::to_string(drift) + " at step " +
                           std::to_string(n + 1));
    if (on_step) on_step(n + 1, psi);
  }
}

double success_probability(const Eigen::VectorXcd& state, const PartitionSolution& solutions,
                           const StateSpace& space) {
  if (static_cast<std::size_t>(state.size()) != space.dim())
    throw std::invalid_argument("success_probability: state dimension mismatch");
  double p = 0.0;
  for (Bits config : solutions.solutions) {
    if (auto index = space.index(config)) p += std::norm(state(static_cast<Eigen::Index>(*index)));
  }
  return p;
}

namespace {

// Weight of `state` on the ground cluster of H, given ascending eigenpairs.
double cluster_weight(const Eigen::VectorXcd& state, const Eigenpairs& pairs, Eigen::Index cluster) {
  double p = 0.0;
  for (Eigen::Index l = 0; l < cluster; ++l)
    p += std::norm(pairs.vectors.col(l).cast<cd>().dot(state));
  return p;
}

double diagonal_ground_weight(const Eigen::VectorXcd& state, const Eigen::VectorXd& diagonal) {
  const double lowest = diagonal.minCoeff();
  const double tol = 1e-12 * std::max(1.0, std::abs(lowest));
  double p = 0.0;
  for (Eigen::Index i = 0; i < diagonal.size(); ++i)
    if (diagonal(i) - lowest <= tol) p += std::norm(state(i));
  return p;
}

}  // namespace

double ground_state_probability(const Eigen::VectorXcd& state, const HamiltonianParts& parts, double s,
                                const EigenOptions& options) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("ground_state_probability: s outside [0, 1]");
  if (static_cast<std::size_t>(state.size()) != parts.dim())
    throw std::invalid_argument("ground_state_probability: state dimension mismatch");
  const InstantHamiltonian h = parts.schedule().at(s);
  if (h.is_diagonal()) return diagonal_ground_weight(state, h.diagonal());
  const int k = parts.dim() >= 2 ? 2 : 1;
  const auto pairs = lowest_eigs(h, k, options);
  if (k == 2 && pairs.values(1) - pairs.values(0) < kDegeneracyThreshold)
    throw DegenerateGroundState(s, pairs.values(1) - pairs.values(0));
  return cluster_weight(state, pairs, 1);
}

double effective_dimension(const Eigen::VectorXcd& state) {
  const double sum4 = state.cwiseAbs2().cwiseAbs2().sum();
  if (sum4 == 0.0) throw std::invalid_argument("effective_dimension: zero state");
  return 1.0 / sum4;
}

DynamicsTrace evolve(const HamiltonianParts& parts, const PartitionSolution& solutions,
                     const AnnealSchedule& schedule, int steps, const ObserverSpec& observers,
                     const PropagatorOptions& options) {
  if (steps < 1) throw std::invalid_argument("evolve: steps must be positive");
  if (!(schedule.total_time > 0.0)) throw std::invalid_argument("evolve: total time must be positive");
  if (observers.samples < 1) throw std::invalid_argument("evolve: need at least one sample");

  // Sample at step boundaries nearest to uniform times; the final state is
  // always sampled.
  std::vector<int> sample_steps;
  if (observers.samples == 1) {
    sample_steps.push_back(steps);
  } else {
    for (int j = 0; j < observers.samples; ++j) {
      const int n = static_cast<int>(std::lround(static_cast<double>(j) * steps / (observers.samples - 1)));
      if (sample_steps.empty() || sample_steps.back() != n) sample_steps.push_back(n);
    }
  }

  const ScheduledHamiltonian h = parts.schedule();
  const std::size_t max_degeneracy = std::max<std::size_t>(solutions.degeneracy(), 2);
  DynamicsTrace trace;
  std::size_t next_sample = 0;

  auto record = [&](int n, const Eigen::VectorXcd& psi) {
    const double t = schedule.total_time * n / steps;
    const double s = static_cast<double>(n) / steps;
    trace.times.push_back(t);
    trace.s.push_back(s);
    trace.p_s.push_back(success_probability(psi, solutions, parts.space));
    double pg = kNaN;
    if (observers.ground_probability) {
      try {
        pg = ground_state_probability(psi, parts, s, observers.eigen);
      } catch (const DegenerateGroundState&) {
        const int k = static_cast<int>(std::min<std::size_t>(parts.dim(), max_degeneracy + 1));
        const auto pairs = lowest_eigs(h.at(s), k, observers.eigen);
        Eigen::Index cluster = 1;
        while (cluster < pairs.values.size() &&
               pairs.values(cluster) - pairs.values(0) < kDegeneracyThreshold)
          ++cluster;
        pg = cluster_weight(psi, pairs, cluster);
        ++trace.degenerate_ground_samples;
      }
    }
    trace.p_g.push_back(pg);
    trace.d_eff.push_back(observers.effective_dimension ? effective_dimension(psi) : kNaN);
    trace.q.push_back(observers.glass_order ? glass_order(psi, parts.space) : kNaN);
    trace.norm_error.push_back(std::abs(psi.norm() - 1.0));
  };

  Eigen::VectorXcd psi = initial_state(parts);
  if (sample_steps[0] == 0) {
    record(0, psi);
    ++next_sample;
  }
  propagate(h, psi, 0.0, 1.0, schedule.total_time, steps, options,
            [&](int n, const Eigen::VectorXcd& state) {
              if (next_sample < sample_steps.size() && sample_steps[next_sample] == n) {
                record(n, state);
                ++next_sample;
              }
            });
  trace.final_state = std::move(psi);
  return trace;
}

void write_dynamics_csv(std::ostream& out, const DynamicsTrace& trace) {
  const auto old = out.precision(17);
  out << "t,s,P_s,P_g,D_eff,q,norm_error\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    out << trace.times[i] << ',' << trace.s[i] << ',' << trace.p_s[i] << ',' << trace.p_g[i] << ','
        << trace.d_eff[i] << ',' << trace.q[i] << ',' << trace.norm_error[i] << '\n';
  }
  out.precision(old);
}

std::string final_summary_json(const std::string& instance_id, AnnealerKind annealer, double total_time,
                               int steps, double p_s_final, std::size_t degeneracy, int min_cut) {
  nlohmann::ordered_json j;
  j["instance_id"] = instance_id;
  j["annealer"] = std::string(to_string(annealer));
  j["T"] = total_time;
  j["steps"] = steps;
  j["P_s_final"] = p_s_final;
  j["D"] = degeneracy;
  j["min_cut"] = min_cut;
  return j.dump();
}

}  // namespace qanneal
