#include "qanneal/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "qanneal/errors.hpp"

namespace qanneal {

std::string_view to_string(EigenMethod method) {
  switch (method) {
    case EigenMethod::automatic: return "automatic";
    case EigenMethod::dense: return "dense";
    case EigenMethod::iterative: return "iterative";
  }
  return "?";
}

EigenMethod parse_eigen_method(std::string_view name) {
  for (auto m : {EigenMethod::automatic, EigenMethod::dense, EigenMethod::iterative})
    if (name == to_string(m)) return m;
  throw std::invalid_argument("unknown eigensolver \"" + std::string(name) + "\"");
}

namespace {

void check_k(std::size_t dim, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > dim)
    throw std::invalid_argument("lowest_eigs: need 1 <= k <= dim (k=" + std::to_string(k) +
                                ", dim=" + std::to_string(dim) + ")");
}

void fill_random(Eigen::Ref<Eigen::MatrixXd> block, std::mt19937_64& rng) {
  for (Eigen::Index j = 0; j < block.cols(); ++j)
    for (Eigen::Index i = 0; i < block.rows(); ++i)
      block(i, j) = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

// Orthonormalizes the columns of `block` against the first `used` columns of
// `basis` and among themselves. One block pass of classical Gram-Schmidt, then
// per column further passes while the norm keeps collapsing (DGKS criterion).
// Columns that are numerically dependent are dropped. Returns the kept block.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& basis, Eigen::Index used, Eigen::MatrixXd block) {
  const Eigen::VectorXd original = block.colwise().norm();
  const auto q = basis.leftCols(used);
  if (used > 0) block.noalias() -= q * (q.transpose() * block);
  Eigen::MatrixXd kept(block.rows(), block.cols());
  Eigen::Index count = 0;
  for (Eigen::Index j = 0; j < block.cols(); ++j) {
    if (original(j) == 0.0) continue;
    Eigen::VectorXd v = block.col(j);
    double norm = v.norm();
    for (int pass = 0; pass < 4; ++pass) {
      const double before = norm;
      if (used > 0) v.noalias() -= q * (q.transpose() * v);
      if (count > 0) v.noalias() -= kept.leftCols(count) * (kept.leftCols(count).transpose() * v);
      norm = v.norm();
      if (norm > 0.7 * before || norm <= 1e-10 * original(j)) break;
    }
    if (norm <= 1e-10 * original(j)) continue;
    kept.col(count++) = v / norm;
  }
  return kept.leftCols(count);
}

}  // namespace

Eigenpairs lowest_eigs_dense(const Eigen::MatrixXd& h, int k) {
  check_k(static_cast<std::size_t>(h.rows()), k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  return {solver.eigenvalues().head(k), solver.eigenvectors().leftCols(k)};
}

Eigenpairs lowest_eigs_iterative(std::size_t dim, const BlockOperator& apply, int k,
                                 const EigenOptions& options, const Eigen::MatrixXd* guess) {
  check_k(dim, k);
  const auto n = static_cast<Eigen::Index>(dim);
  const Eigen::Index block = std::min<Eigen::Index>(n, k + std::max(4, k / 2));
  const Eigen::Index max_basis = std::min<Eigen::Index>(n, std::max<Eigen::Index>(8 * block, k + 40));

  std::mt19937_64 rng(options.seed);
  Eigen::MatrixXd start(n, block);
  fill_random(start, rng);
  if (guess != nullptr && guess->rows() == n) {
    const Eigen::Index g = std::min(guess->cols(), block);
    start.leftCols(g) = guess->leftCols(g);
  }

  Eigen::MatrixXd basis(n, max_basis);     // Q
  Eigen::MatrixXd products(n, max_basis);  // H Q
  Eigen::MatrixXd projected(max_basis, max_basis);  // Q^T H Q, grown incrementally
  Eigen::Index used = 0;
  int block_products = 0;

  auto append = [&](Eigen::MatrixXd fresh) {
    fresh = orthonormalize(basis, used, std::move(fresh));
    // An invariant subspace was reached; keep exploring with random directions.
    while (fresh.cols() == 0 && used < n) {
      Eigen::MatrixXd extra(n, std::min<Eigen::Index>(block, n - used));
      fill_random(extra, rng);
      fresh = orthonormalize(basis, used, std::move(extra));
    }
    const Eigen::Index c = std::min<Eigen::Index>(fresh.cols(), max_basis - used);
    if (c == 0) return Eigen::Index{0};
    Eigen::MatrixXd image(n, c);
    apply(fresh.leftCols(c), image);
    ++block_products;
    basis.middleCols(used, c) = fresh.leftCols(c);
    products.middleCols(used, c) = image;
    const Eigen::MatrixXd column = basis.leftCols(used + c).transpose() * image;
    projected.block(0, used, used + c, c) = column;
    projected.block(used, 0, c, used) = column.topRows(used).transpose();
    const Eigen::MatrixXd corner = projected.block(used, used, c, c);
    projected.block(used, used, c, c) = 0.5 * (corner + corner.transpose());
    used += c;
    return c;
  };

  Eigen::Index last = append(std::move(start));
  Eigen::Index last_begin = 0;
  while (true) {
    // Grow the block Krylov space to the basis limit, then Rayleigh-Ritz.
    while (last > 0 && used < max_basis) {
      Eigen::MatrixXd next = products.middleCols(last_begin, last);
      last_begin = used;
      last = append(std::move(next));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(projected.topLeftCorner(used, used));
    if (ritz.info() != Eigen::Success) throw NumericalError("Rayleigh-Ritz step failed");

    const Eigen::Index keep = std::min<Eigen::Index>(block, used);
    const Eigen::VectorXd theta = ritz.eigenvalues().head(keep);
    const Eigen::Index retain = std::min<Eigen::Index>(used, std::max(keep, max_basis / 2));
    const Eigen::MatrixXd coeffs = ritz.eigenvectors().leftCols(retain);
    const Eigen::MatrixXd vectors = basis.leftCols(used) * coeffs;
    const Eigen::MatrixXd images = products.leftCols(used) * coeffs;

    bool converged = true;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double residual = (images.col(i) - theta(i) * vectors.col(i)).norm();
      if (residual > options.tolerance * std::max(1.0, std::abs(theta(i)))) {
        converged = false;
        break;
      }
    }
    // Once the full space is spanned the Ritz pairs are exact up to round-off.
    if (converged || used == n || last == 0) return {theta.head(k), vectors.leftCols(k)};
    if (block_products >= options.max_block_products)
      throw NumericalError("lowest_eigs: no convergence after " + std::to_string(block_products) +
                           " block products");

    // Thick restart on the lowest Ritz vectors; H Q follows without new products.
    basis.leftCols(retain) = vectors;
    products.leftCols(retain) = images;
    projected.topLeftCorner(retain, retain) = ritz.eigenvalues().head(retain).asDiagonal();
    used = retain;
    Eigen::MatrixXd next = images.leftCols(keep) - vectors.leftCols(keep) * theta.asDiagonal();
    last_begin = used;
    last = append(std::move(next));
  }
}

Eigenpairs lowest_eigs(const SparseOperator& h, int k, const EigenOptions& options) {
  check_k(h.dim(), k);
  const bool dense = options.method == EigenMethod::dense ||
                     (options.method == EigenMethod::automatic && h.dim() <= options.dense_threshold);
  if (dense) return lowest_eigs_dense(h.to_dense(), k);
  return lowest_eigs_iterative(
      h.dim(),
      [&h](const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
        y.setZero();
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
          auto out = y.col(j);
          h.apply_add(1.0, x.col(j), out);
        }
      },
      k, options);
}

Eigenpairs lowest_eigs(const InstantHamiltonian& h, int k, const EigenOptions& options,
                       const Eigen::MatrixXd* guess) {
  check_k(h.dim(), k);
  const bool dense = options.method == EigenMethod::dense ||
                     (options.method == EigenMethod::automatic && h.dim() <= options.dense_threshold);
  if (dense) return lowest_eigs_dense(h.to_dense(), k);
  return lowest_eigs_iterative(
      h.dim(),
      [&h](const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
          auto out = y.col(j);
          h.apply(x.col(j), out);
        }
      },
      k, options, guess);
}

}  // namespace qanneal
