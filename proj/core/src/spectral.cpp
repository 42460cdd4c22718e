#include "qanneal/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qanneal/errors.hpp"

namespace qanneal {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Greedy assignment of current sorted levels to previous tracks by the
// largest squared overlap first.
std::vector<int> match_levels(const Eigen::MatrixXd& previous, const std::vector<int>& previous_tracks,
                              const Eigen::MatrixXd& current) {
  const Eigen::MatrixXd overlap = (previous.transpose() * current).cwiseAbs2();
  const auto k = static_cast<int>(overlap.rows());
  std::vector<int> result(static_cast<std::size_t>(k), -1);
  std::vector<bool> row_used(static_cast<std::size_t>(k)), col_used(static_cast<std::size_t>(k));
  std::vector<std::tuple<double, int, int>> entries;
  entries.reserve(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) entries.emplace_back(overlap(i, j), i, j);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
  // previous sorted index i belongs to track t where previous_tracks[t] == i
  std::vector<int> track_of(static_cast<std::size_t>(k));
  for (int t = 0; t < k; ++t) track_of[static_cast<std::size_t>(previous_tracks[t])] = t;
  for (const auto& [value, i, j] : entries) {
    if (row_used[i] || col_used[j]) continue;
    row_used[i] = col_used[j] = true;
    result[static_cast<std::size_t>(track_of[static_cast<std::size_t>(i)])] = j;
  }
  return result;
}

double gap_at(const ScheduledHamiltonian& h, double s, std::size_t degeneracy, const EigenOptions& options) {
  const auto pairs = lowest_eigs(h.at(s), static_cast<int>(degeneracy) + 1, options);
  return pairs.values(static_cast<Eigen::Index>(degeneracy)) - pairs.values(0);
}

}  // namespace

std::vector<double> uniform_grid(int points, double lo, double hi) {
  if (points < 1) throw std::invalid_argument("uniform_grid: need at least one point");
  if (points == 1) return {lo};
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * i / (points - 1);
  grid.back() = hi;
  return grid;
}

SpectralTrace spectral_trace(const ScheduledHamiltonian& h, std::span<const double> s_grid, int k,
                             std::size_t degeneracy_hint, const TraceOptions& options) {
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] >= 0.0 && s_grid[i] <= 1.0))
      throw std::invalid_argument("spectral_trace: s outside [0, 1]");
    if (i > 0 && s_grid[i] <= s_grid[i - 1])
      throw std::invalid_argument("spectral_trace: s grid must be ascending");
  }
  const int levels = static_cast<int>(std::min<std::size_t>(
      h.dim(), std::max<std::size_t>(static_cast<std::size_t>(k), degeneracy_hint + 1)));

  SpectralTrace trace;
  trace.k = levels;
  trace.s_grid.assign(s_grid.begin(), s_grid.end());
  Eigen::MatrixXd previous;
  for (const double s : s_grid) {
    Eigenpairs pairs;
    try {
      pairs = lowest_eigs(h.at(s), levels, options.eigen, previous.size() ? &previous : nullptr);
    } catch (const NumericalError& e) {
      throw NumericalError("spectral_trace at s=" + std::to_string(s) + ": " + e.what());
    }
    trace.levels.emplace_back(pairs.values.data(), pairs.values.data() + pairs.values.size());
    if (options.track_levels) {
      if (previous.size() == 0) {
        std::vector<int> identity(static_cast<std::size_t>(levels));
        for (int l = 0; l < levels; ++l) identity[l] = l;
        trace.tracks.push_back(std::move(identity));
      } else {
        trace.tracks.push_back(match_levels(previous, trace.tracks.back(), pairs.vectors));
      }
    }
    if (options.retain_vectors) trace.vectors.push_back(pairs.vectors);
    previous = std::move(pairs.vectors);
  }
  return trace;
}

SpectralTrace spectral_trace(const HamiltonianParts& parts, std::span<const double> s_grid, int k,
                             std::size_t degeneracy_hint, const TraceOptions& options) {
  return spectral_trace(parts.schedule(), s_grid, k, degeneracy_hint, options);
}

GapReport relevant_gap(const SpectralTrace& trace, std::size_t degeneracy) {
  if (trace.levels.empty()) throw std::invalid_argument("relevant_gap: empty trace");
  if (degeneracy < 1) throw std::invalid_argument("relevant_gap: degeneracy must be positive");
  GapReport report;
  report.relevant_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trace.levels.size(); ++i) {
    const auto& e = trace.levels[i];
    if (e.size() <= degeneracy)
      throw std::invalid_argument("relevant_gap: trace has " + std::to_string(e.size()) +
                                  " levels, need " + std::to_string(degeneracy + 1));
    const double gap = e[degeneracy] - e[0];
    report.per_s_gap.push_back(gap);
    if (gap < report.relevant_gap) {
      report.relevant_gap = gap;
      report.argmin_s = trace.s_grid[i];
    }
  }
  return report;
}

GapReport relevant_gap(const SpectralTrace& trace, std::size_t degeneracy,
                       const ScheduledHamiltonian& h, const EigenOptions& options, double s_tolerance) {
  GapReport report = relevant_gap(trace, degeneracy);
  const auto& grid = trace.s_grid;
  const auto it = std::find(grid.begin(), grid.end(), report.argmin_s);
  const auto i = static_cast<std::size_t>(it - grid.begin());
  double a = grid[i > 0 ? i - 1 : i];
  double b = grid[i + 1 < grid.size() ? i + 1 : i];
  if (b - a <= s_tolerance) return report;

  auto consider = [&](double s, double gap) {
    if (gap < report.relevant_gap) {
      report.relevant_gap = gap;
      report.argmin_s = s;
    }
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = gap_at(h, c, degeneracy, options);
  double fd = gap_at(h, d, degeneracy, options);
  consider(c, fc);
  consider(d, fd);
  while (b - a > s_tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = gap_at(h, c, degeneracy, options);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = gap_at(h, d, degeneracy, options);
      consider(d, fd);
    }
  }
  return report;
}

double fidelity_susceptibility(const ScheduledHamiltonian& h, double s, double delta_s,
                               const EigenOptions& options) {
  if (!(delta_s > 0.0)) throw std::invalid_argument("fidelity_susceptibility: delta_s must be positive");
  const double lo = s - 0.5 * delta_s;
  const double hi = s + 0.5 * delta_s;
  if (!(s > 0.0 && s < 1.0) || lo < 0.0 || hi > 1.0)
    throw std::invalid_argument("fidelity_susceptibility: stencil leaves [0, 1]");

  EigenOptions tight = options;
  tight.tolerance = std::min(options.tolerance, 1e-11);
  const int k = h.dim() >= 2 ? 2 : 1;
  auto ground = [&](double at) {
    auto pairs = lowest_eigs(h.at(at), k, tight);
    if (k == 2 && pairs.values(1) - pairs.values(0) < kDegeneracyThreshold)
      throw DegenerateGroundState(at, pairs.values(1) - pairs.values(0));
    return Eigen::VectorXd(pairs.vectors.col(0));
  };
  const Eigen::VectorXd g1 = ground(lo);
  const Eigen::VectorXd g2 = ground(hi);
  const double fidelity = std::min(1.0, std::abs(g1.dot(g2)));
  return std::max(0.0, -2.0 * std::log(fidelity) / (h.sites() * delta_s * delta_s));
}

std::vector<double> susceptibility_profile(const ScheduledHamiltonian& h, std::span<const double> s_grid,
                                           double delta_s, const EigenOptions& options) {
  std::vector<double> out;
  out.reserve(s_grid.size());
  for (const double s : s_grid) {
    if (s < delta_s || s > 1.0 - delta_s) {
      out.push_back(kNaN);
      continue;
    }
    try {
      out.push_back(fidelity_susceptibility(h, s, delta_s, options));
    } catch (const DegenerateGroundState&) {
      out.push_back(kNaN);
    }
  }
  return out;
}

namespace {

double glass_order_from_weights(const Eigen::VectorXd& weights, const StateSpace& space) {
  if (static_cast<std::size_t>(weights.size()) != space.dim())
    throw std::invalid_argument("glass_order: state dimension does not match the state space");
  const double norm = weights.sum();
  if (std::abs(norm - 1.0) > 1e-8)
    throw std::invalid_argument("glass_order: state is not normalized (norm^2 = " + std::to_string(norm) + ")");
  const int n = space.sites();
  std::vector<double> magnetization(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index b = 0; b < weights.size(); ++b) {
    const Bits config = space.state(static_cast<std::size_t>(b));
    const double w = weights(b);
    for (int i = 0; i < n; ++i) magnetization[i] += ((config >> i) & 1U) ? w : -w;
  }
  double q = 0.0;
  for (double m : magnetization) q += m * m;
  return std::clamp(q / n, 0.0, 1.0);
}

}  // namespace

double glass_order(const Eigen::VectorXd& state, const StateSpace& space) {
  return glass_order_from_weights(state.cwiseAbs2(), space);
}

double glass_order(const Eigen::VectorXcd& state, const StateSpace& space) {
  return glass_order_from_weights(state.cwiseAbs2(), space);
}

std::vector<double> glass_order_lowk(const SpectralTrace& trace, const StateSpace& space, int k) {
  if (!trace.has_vectors()) throw std::invalid_argument("glass_order_lowk: trace did not retain vectors");
  if (k < 1 || k > trace.k) throw std::invalid_argument("glass_order_lowk: k exceeds the available levels");
  std::vector<double> out;
  out.reserve(trace.vectors.size());
  for (const auto& vectors : trace.vectors) {
    double sum = 0.0;
    for (int l = 0; l < k; ++l) sum += glass_order(Eigen::VectorXd(vectors.col(l)), space);
    out.push_back(sum / k);
  }
  return out;
}

void write_trace_csv(std::ostream& out, const SpectralTrace& trace, const TraceColumns& extra) {
  const std::size_t rows = trace.s_grid.size();
  auto usable = [rows](const std::vector<double>& column, const char* name) {
    if (!column.empty() && column.size() != rows)
      throw std::invalid_argument(std::string("write_trace_csv: column ") + name + " has wrong length");
    return !column.empty();
  };
  const bool q_gs = usable(extra.q_gs, "q_gs");
  const bool q_low = usable(extra.q_low12, "q_low12");
  const bool sus = usable(extra.susceptibility, "S");

  const auto old = out.precision(17);
  out << "s";
  for (int l = 0; l < trace.k; ++l) out << ",E_" << l;
  if (q_gs) out << ",q_gs";
  if (q_low) out << ",q_low12";
  if (sus) out << ",S";
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    out << trace.s_grid[i];
    for (double e : trace.levels[i]) out << ',' << e;
    if (q_gs) out << ',' << extra.q_gs[i];
    if (q_low) out << ',' << extra.q_low12[i];
    if (sus) out << ',' << extra.susceptibility[i];
    out << '\n';
  }
  out.precision(old);
}

}  // namespace qanneal
