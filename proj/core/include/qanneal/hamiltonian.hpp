#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qanneal/basis.hpp"
#include "qanneal/graph.hpp"

namespace qanneal {

struct ProblemInstance;

/// Open-boundary square lattice. Site i = (r-1)*cols + c (1-based), which is
/// also the Jordan-Wigner ordering.
class LatticeGeometry {
 public:
  LatticeGeometry(int rows, int cols);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int sites() const noexcept { return rows_ * cols_; }
  /// Nearest-neighbour pairs (i, j), i < j, 1-based: for each site in order,
  /// its right neighbour then its lower neighbour.
  const std::vector<std::pair<int, int>>& bonds() const noexcept { return bonds_; }

 private:
  int rows_;
  int cols_;
  std::vector<std::pair<int, int>> bonds_;
};

struct OffDiagonal {
  std::uint32_t row = 0;
  std::uint32_t col = 0;  // row < col; the (col, row) element is implied
  double value = 0.0;
};

/// Real symmetric matrix: dense diagonal plus the strict upper triangle in
/// coordinate form, sorted row-major, deduplicated, without explicit zeros.
class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(std::size_t dim, std::vector<double> diagonal, std::vector<OffDiagonal> offdiag);

  static SparseOperator diagonal_only(std::vector<double> diagonal);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<double>& diagonal() const noexcept { return diagonal_; }
  const std::vector<OffDiagonal>& offdiag() const noexcept { return offdiag_; }
  bool has_diagonal() const noexcept;
  bool has_offdiag() const noexcept { return !offdiag_.empty(); }

  /// y += weight * (off-diagonal part) * x. Works for real and complex vectors.
  template <class In, class Out>
  void apply_offdiag(double weight, const Eigen::MatrixBase<In>& x, Eigen::MatrixBase<Out>& y) const {
    for (const auto& e : offdiag_) {
      const double v = weight * e.value;
      y(e.row) += v * x(e.col);
      y(e.col) += v * x(e.row);
    }
  }

  /// y += weight * A * x
  template <class In, class Out>
  void apply_add(double weight, const Eigen::MatrixBase<In>& x, Eigen::MatrixBase<Out>& y) const {
    for (std::size_t i = 0; i < dim_; ++i) y(i) += (weight * diagonal_[i]) * x(i);
    apply_offdiag(weight, x, y);
  }

  Eigen::MatrixXd to_dense() const;

  /// "row col value" lines, 17 significant digits, nonzero diagonal first.
  void dump(std::ostream& out) const;

  friend bool operator==(const SparseOperator& a, const SparseOperator& b);

 private:
  std::size_t dim_ = 0;
  std::vector<double> diagonal_;
  std::vector<OffDiagonal> offdiag_;
};

/// Hamiltonian frozen at one schedule point: the diagonal is pre-summed, the
/// off-diagonal terms are applied with their weights.
class InstantHamiltonian {
 public:
  std::size_t dim() const noexcept { return static_cast<std::size_t>(diagonal_.size()); }
  const Eigen::VectorXd& diagonal() const noexcept { return diagonal_; }

  /// y = H x
  template <class In, class Out>
  void apply(const Eigen::MatrixBase<In>& x, Eigen::MatrixBase<Out>& y) const {
    y = diagonal_.cwiseProduct(x);
    for (const auto& [op, w] : offdiag_terms_) op->apply_offdiag(w, x, y);
  }

  bool is_diagonal() const noexcept { return offdiag_terms_.empty(); }

  Eigen::MatrixXd to_dense() const;

 private:
  friend class ScheduledHamiltonian;
  Eigen::VectorXd diagonal_;
  std::vector<std::pair<std::shared_ptr<const SparseOperator>, double>> offdiag_terms_;
};

/// H(s) = sum_k w_k(s) A_k over shared, immutable operators.
class ScheduledHamiltonian {
 public:
  using Weight = std::function<double(double)>;

  ScheduledHamiltonian(std::size_t dim, int sites);

  void add_term(std::shared_ptr<const SparseOperator> op, Weight weight);

  std::size_t dim() const noexcept { return dim_; }
  int sites() const noexcept { return sites_; }

  InstantHamiltonian at(double s) const;
  SparseOperator materialize(double s) const;

 private:
  struct Term {
    std::shared_ptr<const SparseOperator> op;
    Weight weight;
  };
  std::size_t dim_;
  int sites_;
  std::vector<Term> terms_;
};

enum class AnnealerKind { fermion, boson, ising };
enum class Statistics { fermion, boson };

std::string_view to_string(AnnealerKind kind);
AnnealerKind parse_annealer(std::string_view name);

/// The three schedule-weighted components of one annealer:
/// H(s) = (1-s) h_initial + lambda s (1-s) h_driver + s h_problem.
struct HamiltonianParts {
  AnnealerKind kind = AnnealerKind::boson;
  StateSpace space;
  std::shared_ptr<const SparseOperator> h_initial;
  std::shared_ptr<const SparseOperator> h_driver;
  std::shared_ptr<const SparseOperator> h_problem;
  double lambda = 3.0;
  double alpha = 1.0;  // Ising penalty; unused by the atomic annealers

  int sites() const { return space.sites(); }
  std::size_t dim() const { return space.dim(); }
  ScheduledHamiltonian schedule() const;
};

/// Checks the component invariants (shared dimension, diagonal initial and
/// problem terms, purely off-diagonal driver).
HamiltonianParts make_parts(AnnealerKind kind, StateSpace space, SparseOperator h_initial,
                            SparseOperator h_driver, SparseOperator h_problem, double lambda,
                            double alpha);

/// sum_i V_i n_i with V_i = -2 on even sites, 0 on odd sites.
SparseOperator build_onsite(const LatticeGeometry& geometry, const SectorBasis& basis);

/// (-1)^(occupied sites strictly between p and q), p < q, 1-based.
int jw_sign(Bits state, int p, int q);

/// -sum_<ij> (a_i^+ a_j + h.c.) for hard-core bosons or spinless fermions.
SparseOperator build_tunneling(const LatticeGeometry& geometry, const SectorBasis& basis,
                               Statistics statistics);

/// Diagonal cut cost over the sector.
SparseOperator build_problem_atomic(const Graph& graph, const SectorBasis& basis);

enum class AlphaCheck { reject, warn };

/// Lower bound min(2*max_degree, n)/8 on the penalty factor.
double alpha_lower_bound(const Graph& graph);

/// cut + alpha * (sum_i sigma_i^z)^2 over all 2^n spin configurations.
SparseOperator build_ising_problem(const Graph& graph, double alpha,
                                   AlphaCheck check = AlphaCheck::reject);

struct IsingDrivers {
  SparseOperator h_z;  // sum_i h_i sigma_i^z, h_i = -1 (even i), +1 (odd i)
  SparseOperator h_x;  // -sum_i sigma_i^x
};
IsingDrivers build_ising_drivers(int n);

/// Weighted sum at schedule point s in [0, 1].
SparseOperator assemble(const HamiltonianParts& parts, double s);

HamiltonianParts build_atomic_parts(Statistics statistics, const Graph& graph,
                                    const LatticeGeometry& geometry, double lambda = 3.0);
HamiltonianParts build_ising_parts(const Graph& graph, double lambda = 3.0, double alpha = 1.0,
                                   AlphaCheck check = AlphaCheck::reject);
HamiltonianParts build_parts(AnnealerKind kind, const ProblemInstance& instance,
                             double lambda = 3.0, double alpha = 1.0);

}  // namespace qanneal
