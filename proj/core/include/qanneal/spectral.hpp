#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qanneal/basis.hpp"
#include "qanneal/eigensolver.hpp"
#include "qanneal/hamiltonian.hpp"

namespace qanneal {

/// Below this ground-level splitting the ground state is treated as degenerate.
inline constexpr double kDegeneracyThreshold = 1e-10;

/// Lowest levels of H(s) on a grid of schedule points.
struct SpectralTrace {
  int k = 0;
  std::vector<double> s_grid;
  std::vector<std::vector<double>> levels;  // ascending per s
  std::vector<Eigen::MatrixXd> vectors;     // per s, only when retained
  /// tracks[i][l]: sorted index at s_grid[i] of the level that continues
  /// track l by maximal eigenvector overlap. Identity at the first point.
  std::vector<std::vector<int>> tracks;

  bool has_vectors() const noexcept { return !vectors.empty(); }
};

struct TraceOptions {
  bool retain_vectors = false;
  bool track_levels = true;
  EigenOptions eigen;
};

/// `points` evenly spaced values covering [lo, hi].
std::vector<double> uniform_grid(int points, double lo = 0.0, double hi = 1.0);

/// Computes max(k, degeneracy_hint + 1) levels at every grid point.
SpectralTrace spectral_trace(const ScheduledHamiltonian& h, std::span<const double> s_grid,
                             int k = 12, std::size_t degeneracy_hint = 0,
                             const TraceOptions& options = {});
SpectralTrace spectral_trace(const HamiltonianParts& parts, std::span<const double> s_grid,
                             int k = 12, std::size_t degeneracy_hint = 0,
                             const TraceOptions& options = {});

struct GapReport {
  double relevant_gap = 0.0;
  double argmin_s = 0.0;
  std::vector<double> per_s_gap;  // E_D(s) - E_0(s) on the trace grid
};

/// Grid minimum of E_D - E_0.
GapReport relevant_gap(const SpectralTrace& trace, std::size_t degeneracy);

/// Grid minimum refined by golden-section search around the coarse argmin,
/// re-diagonalizing H until the bracket is narrower than `s_tolerance`.
GapReport relevant_gap(const SpectralTrace& trace, std::size_t degeneracy,
                       const ScheduledHamiltonian& h, const EigenOptions& options = {},
                       double s_tolerance = 1e-4);

/// Per-site ground-state fidelity susceptibility -2 ln F / (N ds^2) from the
/// symmetric pair (s - ds/2, s + ds/2). Throws DegenerateGroundState if the
/// ground level at either point is split by less than kDegeneracyThreshold.
double fidelity_susceptibility(const ScheduledHamiltonian& h, double s, double delta_s,
                               const EigenOptions& options = {});

/// Susceptibility on a grid. Points outside [delta_s, 1 - delta_s] and points
/// with a degenerate ground state are NaN.
std::vector<double> susceptibility_profile(const ScheduledHamiltonian& h,
                                           std::span<const double> s_grid, double delta_s,
                                           const EigenOptions& options = {});

/// Edwards-Anderson order (1/N) sum_i <2 n_i - 1>^2 of a normalized state.
/// The same expression is q_z for spins with up = 1.
double glass_order(const Eigen::VectorXd& state, const StateSpace& space);
double glass_order(const Eigen::VectorXcd& state, const StateSpace& space);

/// Mean glass order of the k lowest retained eigenvectors at each s.
std::vector<double> glass_order_lowk(const SpectralTrace& trace, const StateSpace& space, int k = 12);

/// Optional per-s columns appended to the trace CSV.
struct TraceColumns {
  std::vector<double> q_gs;
  std::vector<double> q_low12;
  std::vector<double> susceptibility;
};

/// CSV with header "s,E_0,...,E_{k-1}[,q_gs][,q_low12][,S]".
void write_trace_csv(std::ostream& out, const SpectralTrace& trace, const TraceColumns& extra = {});

}  // namespace qanneal
