// Acceptance checks. Each criterion prints one PASS/FAIL line.
//
//   qanneal_acceptance [--work DIR] [criterion ...]
//
// Criteria 2 and 3 share a resumable 4x3 sweep kept in DIR.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qanneal/dynamics.hpp"
#include "qanneal/errors.hpp"
#include "qanneal/experiment.hpp"
#include "qanneal/instance.hpp"
#include "qanneal/spectral.hpp"

using namespace qanneal;
namespace fs = std::filesystem;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

constexpr AnnealerKind kAll[] = {AnnealerKind::fermion, AnnealerKind::boson, AnnealerKind::ising};

fs::path g_work = fs::temp_directory_path() / "qanneal_acceptance";

ProblemInstance fixture() { return read_instance(QANNEAL_FIXTURES "/gapped_4x2.json"); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ----------------------------------------------------------------------- 1

Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  const SectorBasis sector(12, 6);
  int matched = 0, even = 0;
  for (std::size_t k = 0; k < 100; ++k) {
    const auto inst = make_instance(3, 4, 101, k);
    const auto reference = oracle::enumerate_bisections(inst.graph);

    const auto atomic = build_problem_atomic(inst.graph, sector);
    const double low = *std::min_element(atomic.diagonal().begin(), atomic.diagonal().end());
    std::vector<Bits> atomic_argmin;
    for (std::size_t r = 0; r < sector.dim(); ++r)
      if (atomic.diagonal()[r] == low) atomic_argmin.push_back(sector.unrank(r));

    const auto ising = build_ising_problem(inst.graph, 1.0);
    const double spin_low = *std::min_element(ising.diagonal().begin(), ising.diagonal().end());
    std::vector<Bits> ising_argmin;
    for (std::size_t b = 0; b < ising.dim(); ++b)
      if (ising.diagonal()[b] == spin_low) ising_argmin.push_back(b);

    const auto solved = solve_partition_bruteforce(inst.graph);
    if (atomic_argmin == reference.solutions && ising_argmin == reference.solutions &&
        solved.solutions == reference.solutions)
      ++matched;
    if (reference.solutions.size() % 2 == 0) ++even;
  }
  const double elapsed = seconds_since(start);
  return {matched == 100 && even == 100 && elapsed < 60.0,
          fmt("%d/100 argmin sets match, %d/100 even D, %.1f s", matched, even, elapsed)};
}

// ------------------------------------------------------------------- 2 + 3

std::vector<ResultRecord> desk_sweep() {
  SweepConfig config;
  config.rows = 3;
  config.cols = 4;
  config.instance_count = 100;
  config.seed = 2025;
  config.total_time = 50.0;
  config.lambda = 3.0;
  config.alpha = 1.0;
  config.steps = 2000;
  config.output_dir = g_work / "sweep_4x3";
  return run_sweep(config).records;
}

Outcome statistics_ordering() {
  const auto records = desk_sweep();
  double sum_f = 0, sum_b = 0;
  std::size_t nf = 0, nb = 0;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    if (r.annealer == AnnealerKind::fermion) sum_f += r.p_s_final, ++nf;
    if (r.annealer == AnnealerKind::boson) sum_b += r.p_s_final, ++nb;
  }
  const double mean_f = sum_f / static_cast<double>(nf);
  const double mean_b = sum_b / static_cast<double>(nb);
  const auto report = compare_annealers(records, AnnealerKind::boson, AnnealerKind::fermion);
  return {nf >= 100 && nb >= 100 && report.paired >= 100 && mean_f < mean_b && report.a_win_rate() >= 0.80,
          fmt("mean P_s fermion %.4f < boson %.4f, boson win rate %.3f over %zu instances", mean_f, mean_b,
              report.a_win_rate(), report.paired)};
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      for (std::size_t t = i; t <= j; ++t) r[order[t]] = 0.5 * static_cast<double>(i + j);
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

Outcome degeneracy_trend() {
  const auto table = aggregate_by_degeneracy(desk_sweep());
  bool pass = true;
  std::string detail;
  for (auto kind : kAll) {
    std::vector<double> d, p;
    for (const auto& row : table.rows) {
      const auto it = row.counts.find(kind);
      if (it == row.counts.end() || it->second < 5) continue;
      d.push_back(static_cast<double>(row.degeneracy));
      p.push_back(row.mean_p_s.at(kind));
    }
    const double rho = d.size() >= 2 ? spearman(d, p) : 0.0;
    pass = pass && d.size() >= 2 && rho > 0.0;
    detail += fmt("%s rho=%.3f over %zu bins; ", std::string(to_string(kind)).c_str(), rho, d.size());
  }
  detail += "bins D=";
  for (const auto& row : table.rows) detail += fmt("%zu(%zu) ", row.degeneracy, row.instances);
  detail.pop_back();
  return {pass, detail};
}

// ----------------------------------------------------------------------- 4

Outcome isospectrality() {
  const Graph g = gen_regular_graph(8, 3, 4);
  const auto sol = solve_partition_bruteforce(g);
  const LatticeGeometry row(1, 8);
  const auto f = build_atomic_parts(Statistics::fermion, g, row);
  const auto b = build_atomic_parts(Statistics::boson, g, row);
  const auto grid = uniform_grid(101);
  const auto tf = spectral_trace(f, grid, 12, sol.degeneracy());
  const auto tb = spectral_trace(b, grid, 12, sol.degeneracy());
  double level_diff = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (int l = 0; l < tf.k; ++l) level_diff = std::max(level_diff, std::abs(tf.levels[i][l] - tb.levels[i][l]));
  ObserverSpec observers;
  observers.samples = 1;
  const double pf = evolve(f, sol, AnnealSchedule{50.0}, 2000, observers).final_success();
  const double pb = evolve(b, sol, AnnealSchedule{50.0}, 2000, observers).final_success();
  return {level_diff <= 1e-9 && std::abs(pf - pb) <= 1e-6,
          fmt("max level difference %.2e, |dP_s| %.2e", level_diff, std::abs(pf - pb))};
}

// ----------------------------------------------------------------------- 5

Outcome unitarity_convergence() {
  const auto inst = fixture();
  const auto sol = solve_partition_bruteforce(inst.graph);
  double worst_norm = 0, worst_halving = 0;
  for (auto kind : kAll) {
    const auto parts = build_parts(kind, inst);
    ObserverSpec observers;
    const auto trace = evolve(parts, sol, AnnealSchedule{50.0}, 2000, observers);
    for (double e : trace.norm_error) worst_norm = std::max(worst_norm, e);
    observers.samples = 1;
    const double fine = evolve(parts, sol, AnnealSchedule{50.0}, 4000, observers).final_success();
    worst_halving = std::max(worst_halving, std::abs(trace.final_success() - fine));
  }
  // the 4x3 sizes used by the sweep
  const auto big = make_instance(3, 4, 2025, 0);
  const auto big_sol = solve_partition_bruteforce(big.graph);
  for (auto kind : kAll) {
    const auto trace = evolve(build_parts(kind, big), big_sol, AnnealSchedule{50.0}, 2000);
    for (double e : trace.norm_error) worst_norm = std::max(worst_norm, e);
  }
  return {worst_norm <= 1e-8 && worst_halving < 1e-6,
          fmt("max |norm-1| %.2e, max step-halving change %.2e", worst_norm, worst_halving)};
}

// ----------------------------------------------------------------------- 6

Outcome adiabatic_limit() {
  const auto inst = fixture();
  const auto sol = solve_partition_bruteforce(inst.graph);
  bool pass = true;
  std::string detail;
  for (auto kind : kAll) {
    const auto parts = build_parts(kind, inst);
    std::map<int, double> ps;
    for (int t : {10, 50, 200, 800}) {
      ObserverSpec observers;
      observers.samples = 1;
      const int steps = 2000 * std::max(1, t / 50);  // dt = 0.025 at the longer times
      ps[t] = evolve(parts, sol, AnnealSchedule{static_cast<double>(t)}, steps, observers).final_success();
    }
    pass = pass && ps[800] >= 0.99 && ps[800] > ps[10];
    if (!detail.empty()) detail += "; ";
    detail += fmt("%s P_s(10,50,200,800)=%.4f,%.4f,%.4f,%.4f", std::string(to_string(kind)).c_str(), ps[10],
                  ps[50], ps[200], ps[800]);
  }
  return {pass, detail};
}

// ----------------------------------------------------------------------- 7

Outcome eigensolver_oracle() {
  const auto inst = fixture();
  EigenOptions iterative;
  iterative.method = EigenMethod::iterative;
  double worst = 0;
  for (auto kind : kAll) {
    const auto parts = build_parts(kind, inst);
    for (double s : {0.1, 0.5, 0.9}) {
      const auto h = parts.schedule().at(s);
      const auto dense = oracle::dense_spectrum(h.to_dense());
      const auto p = lowest_eigs(h, 12, iterative);
      worst = std::max(worst, (p.values - dense.head(12)).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-10, fmt("max eigenvalue deviation %.2e over 9 Hamiltonians", worst)};
}

// ----------------------------------------------------------------------- 8

Outcome susceptibility() {
  const auto inst = fixture();
  const auto parts = build_parts(AnnealerKind::boson, inst);
  ScheduledHamiltonian constant(parts.dim(), parts.sites());
  constant.add_term(parts.h_driver, [](double) { return 1.0; });
  constant.add_term(parts.h_problem, [](double) { return 1.0; });
  double flat = 0;
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) flat = std::max(flat, fidelity_susceptibility(constant, s, 1e-3));

  ScheduledHamiltonian qubit(2, 1);
  qubit.add_term(std::make_shared<SparseOperator>(2, std::vector<double>{-1.0, 1.0}, std::vector<OffDiagonal>{}),
                 [](double s) { return 1.0 - s; });
  qubit.add_term(std::make_shared<SparseOperator>(2, std::vector<double>{}, std::vector<OffDiagonal>{{0, 1, 1.0}}),
                 [](double s) { return s; });
  double closed = 0;
  for (double s : {0.2, 0.5, 0.8}) {
    const double d = (1 - s) * (1 - s) + s * s;
    closed = std::max(closed, std::abs(fidelity_susceptibility(qubit, s, 1e-3) - 1.0 / (4 * d * d)));
  }

  double halving = 0;
  for (auto kind : kAll) {
    const auto h = build_parts(kind, inst).schedule();
    const double a = fidelity_susceptibility(h, 0.3, 1e-3);
    const double b = fidelity_susceptibility(h, 0.3, 5e-4);
    halving = std::max(halving, std::abs(a - b) / std::abs(b));
  }
  return {flat <= 1e-12 && closed <= 1e-6 && halving <= 0.01,
          fmt("constant H %.1e, two-level error %.1e, halving relative change %.2e", flat, closed, halving)};
}

// ----------------------------------------------------------------------- 9

Outcome glass_bounds() {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  const StateSpace sector(SectorBasis(8, 4));
  const StateSpace spins(FullBasis(8));
  double lo = 1, hi = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const StateSpace& space = trial % 2 ? spins : sector;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(space.dim()));
    for (auto& c : v) c = {gauss(rng), gauss(rng)};
    v.normalize();
    const double q = glass_order(v, space);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  bool basis_ok = true;
  for (const StateSpace* space : {&sector, &spins}) {
    for (std::size_t i = 0; i < space->dim(); ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space->dim()));
      e(static_cast<Eigen::Index>(i)) = 1.0;
      basis_ok = basis_ok && glass_order(e, *space) == 1.0;
    }
  }
  const double uniform = glass_order(Eigen::VectorXd(Eigen::VectorXd::Constant(70, 1.0 / std::sqrt(70.0))), sector);
  return {lo >= 0.0 && hi <= 1.0 && basis_ok && uniform <= 1e-12,
          fmt("random states q in [%.4f, %.4f], basis states %s, uniform sector %.1e", lo, hi,
              basis_ok ? "all 1" : "NOT all 1", uniform)};
}

// ---------------------------------------------------------------------- 10

// Local maxima of S holding at least a tenth of the largest value.
std::vector<double> susceptibility_peaks(const std::vector<double>& grid, const std::vector<double>& s_values) {
  double top = 0;
  for (double v : s_values)
    if (std::isfinite(v)) top = std::max(top, v);
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double v = s_values[i];
    if (!std::isfinite(v) || v < 0.1 * top) continue;
    const double left = s_values[i - 1], right = s_values[i + 1];
    if ((!std::isfinite(left) || v > left) && (!std::isfinite(right) || v >= right)) peaks.push_back(grid[i]);
  }
  return peaks;
}

std::vector<double> gap_minima(const std::vector<double>& grid, const std::vector<double>& gap) {
  std::vector<double> minima;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
    if (gap[i] <= gap[i - 1] && gap[i] <= gap[i + 1]) minima.push_back(grid[i]);
  return minima;
}

Outcome relevant_gap_consistency() {
  EigenOptions iterative;
  iterative.method = EigenMethod::iterative;
  TraceOptions trace_options;
  trace_options.track_levels = false;
  trace_options.eigen = iterative;
  const auto gap_grid = uniform_grid(201);
  const auto s_grid = uniform_grid(101);
  const double spacing = s_grid[1] - s_grid[0];

  int instances = 0, fermion_smaller = 0;
  int peaks_total = 0, peaks_matched = 0, profiles_ok = 0;
  for (std::size_t k = 0; instances < 20; ++k) {
    const auto inst = make_instance(3, 4, 2025, k);
    const auto sol = solve_partition_bruteforce(inst.graph);
    if (sol.degeneracy() != 2) continue;
    ++instances;
    double gap[2] = {};
    for (int a = 0; a < 2; ++a) {
      const auto parts = build_parts(a == 0 ? AnnealerKind::fermion : AnnealerKind::boson, inst);
      const auto h = parts.schedule();
      const auto trace = spectral_trace(h, gap_grid, 3, 2, trace_options);
      const auto report = relevant_gap(trace, 2, h, iterative);
      gap[a] = report.relevant_gap;
      const auto chi = susceptibility_profile(h, s_grid, 1e-3, iterative);
      const auto minima = gap_minima(gap_grid, report.per_s_gap);
      bool all = true;
      for (double p : susceptibility_peaks(s_grid, chi)) {
        ++peaks_total;
        const bool hit = std::any_of(minima.begin(), minima.end(),
                                     [&](double m) { return std::abs(m - p) <= spacing + 1e-12; });
        peaks_matched += hit;
        all = all && hit;
      }
      profiles_ok += all;
    }
    fermion_smaller += gap[0] < gap[1];
  }
  return {2 * fermion_smaller > instances && profiles_ok == 2 * instances,
          fmt("fermion gap smaller in %d/%d; susceptibility peaks on gap minima %d/%d "
              "(profiles fully matched %d/%d)",
              fermion_smaller, instances, peaks_matched, peaks_total, profiles_ok, 2 * instances)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence", oracle_equivalence},
      {2, "statistics ordering", statistics_ordering},
      {3, "degeneracy trend", degeneracy_trend},
      {4, "1D isospectrality", isospectrality},
      {5, "unitarity and convergence", unitarity_convergence},
      {6, "adiabatic limit", adiabatic_limit},
      {7, "eigensolver oracle", eigensolver_oracle},
      {8, "fidelity susceptibility", susceptibility},
      {9, "glass-order bounds", glass_bounds},
      {10, "relevant-gap consistency", relevant_gap_consistency},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--work" && i + 1 < argc) {
      g_work = argv[++i];
    } else {
      try {
        selected.insert(std::stoi(arg));
      } catch (const std::exception&) {
        std::fprintf(stderr, "usage: %s [--work DIR] [criterion ...]\n", argv[0]);
        return 1;
      }
    }
  }

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
