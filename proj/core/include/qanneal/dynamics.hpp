#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qanneal/eigensolver.hpp"
#include "qanneal/graph.hpp"
#include "qanneal/hamiltonian.hpp"

namespace qanneal {

/// Linear schedule s(t) = t / T with hbar = 1.
struct AnnealSchedule {
  double total_time = 50.0;
  double s_of_t(double t) const { return t / total_time; }
};

struct PropagatorOptions {
  double tolerance = 1e-10;  // per step, estimated Krylov truncation error
  int max_krylov = 40;
  int max_subdivisions = 12;  // halvings of a step before giving up
  double norm_drift_limit = 1e-6;
};

/// Applies exp(-i H dt) to a state with a Lanczos approximation of the
/// exponential. dt may be negative. Steps that do not reach the tolerance
/// within max_krylov vectors are split in halves.
class KrylovPropagator {
 public:
  explicit KrylovPropagator(std::size_t dim, PropagatorOptions options = {});

  void step(const InstantHamiltonian& h, Eigen::VectorXcd& psi, double dt);

  /// Largest Krylov dimension used so far.
  int max_dimension_used() const noexcept { return max_used_; }
  long long matvecs() const noexcept { return matvecs_; }

 private:
  bool try_step(const InstantHamiltonian& h, Eigen::VectorXcd& psi, double dt);
  void step_recursive(const InstantHamiltonian& h, Eigen::VectorXcd& psi, double dt, int depth);

  PropagatorOptions options_;
  Eigen::MatrixXcd basis_;
  Eigen::VectorXcd work_;
  int max_used_ = 0;
  long long matvecs_ = 0;
};

/// Product state occupying every even site (1-based): |0101...>.
Bits initial_configuration(int n);

/// Ground state of H(0): the basis vector of initial_configuration().
Eigen::VectorXcd initial_state(const HamiltonianParts& parts);

/// Evolves psi along s from s_begin to s_end over `duration` (negative runs
/// time backwards) in `steps` midpoint steps. `on_step(n, psi)` is called
/// after step n = 1..steps. Throws NumericalError on norm drift.
void propagate(const ScheduledHamiltonian& h, Eigen::VectorXcd& psi, double s_begin, double s_end,
               double duration, int steps, const PropagatorOptions& options = {},
               const std::function<void(int, const Eigen::VectorXcd&)>& on_step = {});

/// Sum of |amplitude|^2 over the solution configurations.
double success_probability(const Eigen::VectorXcd& state, const PartitionSolution& solutions,
                           const StateSpace& space);

/// |<psi_g(s)|psi>|^2 for a unique ground state. When H(s) is diagonal
/// (s = 0 or 1) the weight on the whole degenerate ground subspace is
/// returned. Throws DegenerateGroundState at interior degeneracies.
double ground_state_probability(const Eigen::VectorXcd& state, const HamiltonianParts& parts, double s,
                                const EigenOptions& options = {});

/// Inverse participation ratio (sum |c_i|^4)^-1.
double effective_dimension(const Eigen::VectorXcd& state);

struct ObserverSpec {
  int samples = 201;  // uniform in t, including t = 0 and t = T
  bool ground_probability = false;
  bool effective_dimension = true;
  bool glass_order = true;
  EigenOptions eigen;
};

struct DynamicsTrace {
  std::vector<double> times;
  std::vector<double> s;
  std::vector<double> p_s;
  std::vector<double> p_g;  // NaN when not requested
  std::vector<double> d_eff;
  std::vector<double> q;
  std::vector<double> norm_error;
  /// Samples where the interior ground level was degenerate; P_g there is
  /// the weight on the near-degenerate ground cluster.
  int degenerate_ground_samples = 0;
  Eigen::VectorXcd final_state;

  double final_success() const { return p_s.empty() ? 0.0 : p_s.back(); }
};

/// Full anneal from initial_state(parts) over schedule.total_time.
DynamicsTrace evolve(const HamiltonianParts& parts, const PartitionSolution& solutions,
                     const AnnealSchedule& schedule, int steps, const ObserverSpec& observers = {},
                     const PropagatorOptions& options = {});

/// CSV "t,s,P_s,P_g,D_eff,q,norm_error".
void write_dynamics_csv(std::ostream& out, const DynamicsTrace& trace);

/// {"instance_id","annealer","T","steps","P_s_final","D","min_cut"}
std::string final_summary_json(const std::string& instance_id, AnnealerKind annealer, double total_time,
                               int steps, double p_s_final, std::size_t degeneracy, int min_cut);

}  // namespace qanneal
