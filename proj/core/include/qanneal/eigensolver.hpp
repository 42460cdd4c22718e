#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>

#include <Eigen/Core>

#include "qanneal/hamiltonian.hpp"

namespace qanneal {

enum class EigenMethod { automatic, dense, iterative };

std::string_view to_string(EigenMethod method);
EigenMethod parse_eigen_method(std::string_view name);

struct EigenOptions {
  EigenMethod method = EigenMethod::automatic;
  /// `automatic` diagonalizes densely up to this dimension.
  std::size_t dense_threshold = 2000;
  /// Converged when ||Hv - Ev|| <= tolerance * max(1, |E|) for every pair.
  double tolerance = 1e-9;
  /// Cap on block applications of H before giving up.
  int max_block_products = 5000;
  std::uint64_t seed = 0x5eed5eedULL;
};

/// k lowest eigenpairs, values ascending, vectors orthonormal columns.
struct Eigenpairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

/// Y = H X for a block of column vectors.
using BlockOperator = std::function<void(const Eigen::MatrixXd& x, Eigen::MatrixXd& y)>;

Eigenpairs lowest_eigs_dense(const Eigen::MatrixXd& h, int k);

/// Thick-restarted block Krylov (block Lanczos with full reorthogonalization).
/// The block is wider than k so degenerate clusters inside the window are
/// resolved. `guess` columns, if given, seed the starting block.
/// Throws NumericalError if the tolerance is not reached.
Eigenpairs lowest_eigs_iterative(std::size_t dim, const BlockOperator& apply, int k,
                                 const EigenOptions& options = {},
                                 const Eigen::MatrixXd* guess = nullptr);

Eigenpairs lowest_eigs(const SparseOperator& h, int k, const EigenOptions& options = {});
Eigenpairs lowest_eigs(const InstantHamiltonian& h, int k, const EigenOptions& options = {},
                       const Eigen::MatrixXd* guess = nullptr);

}  // namespace qanneal
