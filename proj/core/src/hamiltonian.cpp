#include "qanneal/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "qanneal/instance.hpp"

namespace qanneal {

LatticeGeometry::LatticeGeometry(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("LatticeGeometry: rows and cols must be positive");
  if (rows * cols > 63) throw std::invalid_argument("LatticeGeometry: at most 63 sites");
  for (int r = 1; r <= rows; ++r) {
    for (int c = 1; c <= cols; ++c) {
      const int i = (r - 1) * cols + c;
      if (c < cols) bonds_.emplace_back(i, i + 1);
      if (r < rows) bonds_.emplace_back(i, i + cols);
    }
  }
}

// ---------------------------------------------------------------- operator

SparseOperator::SparseOperator(std::size_t dim, std::vector<double> diagonal,
                               std::vector<OffDiagonal> offdiag)
    : dim_(dim), diagonal_(std::move(diagonal)), offdiag_(std::move(offdiag)) {
  if (diagonal_.empty()) diagonal_.assign(dim_, 0.0);
  if (diagonal_.size() != dim_) throw std::invalid_argument("SparseOperator: diagonal size mismatch");
  if (dim_ > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("SparseOperator: dimension too large");

  const auto less = [](const OffDiagonal& a, const OffDiagonal& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  };
  for (auto& e : offdiag_) {
    if (e.row > e.col) std::swap(e.row, e.col);
    if (e.row == e.col) throw std::invalid_argument("SparseOperator: diagonal entry in off-diagonal list");
    if (e.col >= dim_) throw std::invalid_argument("SparseOperator: index out of range");
  }
  if (!std::is_sorted(offdiag_.begin(), offdiag_.end(), less))
    std::sort(offdiag_.begin(), offdiag_.end(), less);

  // merge duplicates, drop zeros
  std::size_t out = 0;
  for (std::size_t i = 0; i < offdiag_.size();) {
    OffDiagonal merged = offdiag_[i++];
    while (i < offdiag_.size() && offdiag_[i].row == merged.row && offdiag_[i].col == merged.col)
      merged.value += offdiag_[i++].value;
    if (merged.value != 0.0) offdiag_[out++] = merged;
  }
  offdiag_.resize(out);
}

SparseOperator SparseOperator::diagonal_only(std::vector<double> diagonal) {
  const std::size_t dim = diagonal.size();
  return SparseOperator(dim, std::move(diagonal), {});
}

bool SparseOperator::has_diagonal() const noexcept {
  return std::any_of(diagonal_.begin(), diagonal_.end(), [](double d) { return d != 0.0; });
}

Eigen::MatrixXd SparseOperator::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < dim_; ++i) m(i, i) = diagonal_[i];
  for (const auto& e : offdiag_) {
    m(e.row, e.col) = e.value;
    m(e.col, e.row) = e.value;
  }
  return m;
}

void SparseOperator::dump(std::ostream& out) const {
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < dim_; ++i)
    if (diagonal_[i] != 0.0) out << i << ' ' << i << ' ' << diagonal_[i] << '\n';
  for (const auto& e : offdiag_) out << e.row << ' ' << e.col << ' ' << e.value << '\n';
  out.precision(old);
}

bool operator==(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim_ != b.dim_ || a.diagonal_ != b.diagonal_ || a.offdiag_.size() != b.offdiag_.size())
    return false;
  for (std::size_t i = 0; i < a.offdiag_.size(); ++i) {
    const auto& x = a.offdiag_[i];
    const auto& y = b.offdiag_[i];
    if (x.row != y.row || x.col != y.col || x.value != y.value) return false;
  }
  return true;
}

// ------------------------------------------------------------- scheduling

ScheduledHamiltonian::ScheduledHamiltonian(std::size_t dim, int sites) : dim_(dim), sites_(sites) {}

void ScheduledHamiltonian::add_term(std::shared_ptr<const SparseOperator> op, Weight weight) {
  if (!op || op->dim() != dim_) throw std::invalid_argument("ScheduledHamiltonian: dimension mismatch");
  terms_.push_back({std::move(op), std::move(weight)});
}

InstantHamiltonian ScheduledHamiltonian::at(double s) const {
  InstantHamiltonian h;
  h.diagonal_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
  for (const auto& term : terms_) {
    const double w = term.weight(s);
    if (w == 0.0) continue;
    const auto& d = term.op->diagonal();
    h.diagonal_ += w * Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
    if (term.op->has_offdiag()) h.offdiag_terms_.emplace_back(term.op, w);
  }
  return h;
}

Eigen::MatrixXd InstantHamiltonian::to_dense() const {
  Eigen::MatrixXd m = diagonal_.asDiagonal();
  for (const auto& [op, w] : offdiag_terms_) {
    for (const auto& e : op->offdiag()) {
      m(e.row, e.col) += w * e.value;
      m(e.col, e.row) += w * e.value;
    }
  }
  return m;
}

SparseOperator ScheduledHamiltonian::materialize(double s) const {
  std::vector<double> diagonal(dim_, 0.0);
  std::vector<OffDiagonal> offdiag;
  for (const auto& term : terms_) {
    const double w = term.weight(s);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < dim_; ++i) diagonal[i] += w * term.op->diagonal()[i];
    for (auto e : term.op->offdiag()) {
      e.value *= w;
      offdiag.push_back(e);
    }
  }
  return SparseOperator(dim_, std::move(diagonal), std::move(offdiag));
}

// ------------------------------------------------------------------ parts

std::string_view to_string(AnnealerKind kind) {
  switch (kind) {
    case AnnealerKind::fermion: return "fermion";
    case AnnealerKind::boson: return "boson";
    case AnnealerKind::ising: return "ising";
  }
  return "?";
}

AnnealerKind parse_annealer(std::string_view name) {
  if (name == "fermion") return AnnealerKind::fermion;
  if (name == "boson") return AnnealerKind::boson;
  if (name == "ising") return AnnealerKind::ising;
  throw std::invalid_argument("unknown annealer \"" + std::string(name) + "\"");
}

ScheduledHamiltonian HamiltonianParts::schedule() const {
  ScheduledHamiltonian h(dim(), sites());
  const double l = lambda;
  h.add_term(h_initial, [](double s) { return 1.0 - s; });
  h.add_term(h_driver, [l](double s) { return l * s * (1.0 - s); });
  h.add_term(h_problem, [](double s) { return s; });
  return h;
}

HamiltonianParts make_parts(AnnealerKind kind, StateSpace space, SparseOperator h_initial,
                            SparseOperator h_driver, SparseOperator h_problem, double lambda,
                            double alpha) {
  const std::size_t dim = space.dim();
  if (h_initial.dim() != dim || h_driver.dim() != dim || h_problem.dim() != dim)
    throw std::invalid_argument("make_parts: operators must share the state-space dimension");
  if (h_initial.has_offdiag() || h_problem.has_offdiag())
    throw std::invalid_argument("make_parts: initial and problem terms must be diagonal");
  if (h_driver.has_diagonal()) throw std::invalid_argument("make_parts: driver must be off-diagonal");
  HamiltonianParts parts{kind, std::move(space),
                         std::make_shared<const SparseOperator>(std::move(h_initial)),
                         std::make_shared<const SparseOperator>(std::move(h_driver)),
                         std::make_shared<const SparseOperator>(std::move(h_problem)), lambda, alpha};
  return parts;
}

// --------------------------------------------------------------- builders

SparseOperator build_onsite(const LatticeGeometry& geometry, const SectorBasis& basis) {
  if (basis.sites() != geometry.sites())
    throw std::invalid_argument("build_onsite: basis and lattice sizes differ");
  Bits even_sites = 0;  // 1-based even i <=> 0-based odd bit
  for (int i = 2; i <= geometry.sites(); i += 2) even_sites |= Bits{1} << (i - 1);
  std::vector<double> diagonal;
  diagonal.reserve(basis.dim());
  for (Bits state : basis.states()) diagonal.push_back(-2.0 * std::popcount(state & even_sites));
  return SparseOperator::diagonal_only(std::move(diagonal));
}

int jw_sign(Bits state, int p, int q) {
  if (p > q) std::swap(p, q);
  if (q - p <= 1) return 1;
  // sites p+1 .. q-1 live in bits p .. q-2
  const Bits between = ((Bits{1} << (q - 1)) - 1) & ~((Bits{1} << p) - 1);
  return (std::popcount(state & between) & 1) ? -1 : 1;
}

SparseOperator build_tunneling(const LatticeGeometry& geometry, const SectorBasis& basis,
                               Statistics statistics) {
  if (basis.sites() != geometry.sites())
    throw std::invalid_argument("build_tunneling: basis and lattice sizes differ");
  std::vector<OffDiagonal> offdiag;
  const auto states = basis.states();
  for (std::size_t r = 0; r < states.size(); ++r) {
    const Bits state = states[r];
    for (const auto& [i, j] : geometry.bonds()) {
      const Bits bi = Bits{1} << (i - 1);
      const Bits bj = Bits{1} << (j - 1);
      if (((state & bi) != 0) == ((state & bj) != 0)) continue;
      const std::size_t c = basis.rank(state ^ (bi | bj));
      if (c < r) continue;
      double value = -1.0;
      if (statistics == Statistics::fermion) value *= jw_sign(state, i, j);
      offdiag.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), value});
    }
  }
  return SparseOperator(basis.dim(), {}, std::move(offdiag));
}

SparseOperator build_problem_atomic(const Graph& graph, const SectorBasis& basis) {
  if (graph.n() != basis.sites())
    throw std::invalid_argument("build_problem_atomic: graph and basis sizes differ");
  std::vector<double> diagonal;
  diagonal.reserve(basis.dim());
  for (Bits state : basis.states()) diagonal.push_back(cut_size(graph, state));
  return SparseOperator::diagonal_only(std::move(diagonal));
}

double alpha_lower_bound(const Graph& graph) {
  return std::min(2.0 * graph.degree(), static_cast<double>(graph.n())) / 8.0;
}

SparseOperator build_ising_problem(const Graph& graph, double alpha, AlphaCheck check) {
  const double bound = alpha_lower_bound(graph);
  if (alpha < bound) {
    const std::string msg = "build_ising_problem: alpha=" + std::to_string(alpha) +
                            " is below the balancing bound " + std::to_string(bound);
    if (check == AlphaCheck::reject) throw std::invalid_argument(msg);
    std::cerr << "warning: " << msg << '\n';
  }
  const FullBasis basis(graph.n());
  std::vector<double> diagonal(basis.dim());
  for (std::size_t b = 0; b < basis.dim(); ++b) {
    const int magnetization = 2 * std::popcount(static_cast<Bits>(b)) - graph.n();
    diagonal[b] = cut_size(graph, static_cast<Bits>(b)) + alpha * magnetization * magnetization;
  }
  return SparseOperator::diagonal_only(std::move(diagonal));
}

IsingDrivers build_ising_drivers(int n) {
  if (n < 1) throw std::invalid_argument("build_ising_drivers: n must be positive");
  const FullBasis basis(n);
  const std::size_t dim = basis.dim();
  std::vector<double> hz(dim, 0.0);
  std::vector<OffDiagonal> hx;
  hx.reserve(dim * static_cast<std::size_t>(n) / 2);
  for (std::size_t b = 0; b < dim; ++b) {
    double e = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double h = (i % 2 == 0) ? -1.0 : 1.0;
      const double sz = ((b >> (i - 1)) & 1U) ? 1.0 : -1.0;
      e += h * sz;
      const std::size_t flipped = b ^ (std::size_t{1} << (i - 1));
      if (flipped > b)
        hx.push_back({static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(flipped), -1.0});
    }
    hz[b] = e;
  }
  return {SparseOperator::diagonal_only(std::move(hz)), SparseOperator(dim, {}, std::move(hx))};
}

SparseOperator assemble(const HamiltonianParts& parts, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("assemble: s must lie in [0, 1]");
  return parts.schedule().materialize(s);
}

HamiltonianParts build_atomic_parts(Statistics statistics, const Graph& graph,
                                    const LatticeGeometry& geometry, double lambda) {
  if (graph.n() != geometry.sites())
    throw std::invalid_argument("build_atomic_parts: graph size differs from lattice size");
  if (graph.n() % 2 != 0) throw std::invalid_argument("build_atomic_parts: need an even site count");
  SectorBasis basis(graph.n(), graph.n() / 2);
  auto onsite = build_onsite(geometry, basis);
  auto tunneling = build_tunneling(geometry, basis, statistics);
  auto problem = build_problem_atomic(graph, basis);
  const auto kind = statistics == Statistics::fermion ? AnnealerKind::fermion : AnnealerKind::boson;
  return make_parts(kind, StateSpace(std::move(basis)), std::move(onsite), std::move(tunneling),
                    std::move(problem), lambda, 0.0);
}

HamiltonianParts build_ising_parts(const Graph& graph, double lambda, double alpha, AlphaCheck check) {
  auto problem = build_ising_problem(graph, alpha, check);
  auto [hz, hx] = build_ising_drivers(graph.n());
  return make_parts(AnnealerKind::ising, StateSpace(FullBasis(graph.n())), std::move(hz),
                    std::move(hx), std::move(problem), lambda, alpha);
}

HamiltonianParts build_parts(AnnealerKind kind, const ProblemInstance& instance, double lambda,
                             double alpha) {
  switch (kind) {
    case AnnealerKind::fermion:
      return build_atomic_parts(Statistics::fermion, instance.graph,
                                LatticeGeometry(instance.rows, instance.cols), lambda);
    case AnnealerKind::boson:
      return build_atomic_parts(Statistics::boson, instance.graph,
                                LatticeGeometry(instance.rows, instance.cols), lambda);
    case AnnealerKind::ising:
      return build_ising_parts(instance.graph, lambda, alpha);
  }
  throw std::invalid_argument("build_parts: unknown annealer");
}

}  // namespace qanneal
