// Command-line front end: instance generation, exact solving, single
// anneals and spectra, sweeps and their aggregation.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 I/O error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qanneal/basis.hpp"
#include "qanneal/dynamics.hpp"
#include "qanneal/errors.hpp"
#include "qanneal/experiment.hpp"
#include "qanneal/instance.hpp"
#include "qanneal/spectral.hpp"

namespace fs = std::filesystem;
using namespace qanneal;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kNumerical = 2, kIo = 3 };

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

int cmd_gen(int rows, int cols, std::size_t count, std::uint64_t seed, const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  for (std::size_t k = 0; k < count; ++k) {
    const auto instance = make_instance(rows, cols, seed, k);
    const auto path = fs::path(out_dir) / (instance.id + ".json");
    write_instance(instance, path);
    std::cout << path.string() << '\n';
  }
  return kOk;
}

int cmd_solve(const std::string& file) {
  const auto instance = read_instance(file);
  const auto solution = solve_partition_bruteforce(instance.graph);
  std::cout << "min_cut " << solution.min_cut << '\n';
  std::cout << "D " << solution.degeneracy() << '\n';
  for (Bits b : solution.solutions) std::cout << format_ket(b, instance.graph.n()) << '\n';
  return kOk;
}

struct AnnealArgs {
  std::string instance;
  std::string annealer = "boson";
  double time = 50.0;
  int steps = 2000;
  double lambda = 3.0;
  double alpha = 1.0;
  std::string trace;
  int samples = 201;
};

int cmd_anneal(const AnnealArgs& args) {
  const auto instance = read_instance(args.instance);
  const auto kind = parse_annealer(args.annealer);
  const auto solution = solve_partition_bruteforce(instance.graph);
  const auto parts = build_parts(kind, instance, args.lambda, args.alpha);
  ObserverSpec observers;
  const bool tracing = !args.trace.empty();
  observers.samples = tracing ? args.samples : 1;
  observers.ground_probability = tracing;
  observers.effective_dimension = tracing;
  observers.glass_order = tracing;
  const auto trace = evolve(parts, solution, AnnealSchedule{args.time}, args.steps, observers);
  if (tracing) {
    auto out = open_output(args.trace);
    write_dynamics_csv(out, trace);
  }
  std::cout << final_summary_json(instance.id, kind, args.time, args.steps, trace.final_success(),
                                  solution.degeneracy(), solution.min_cut)
            << '\n';
  return kOk;
}

struct SpectrumArgs {
  std::string instance;
  std::string annealer = "boson";
  int levels = 12;
  int grid = 101;
  std::string out;
  double lambda = 3.0;
  double alpha = 1.0;
  bool glass = false;
  bool susceptibility = false;
  double delta_s = 1e-3;
  std::string eigensolver = "automatic";
};

int cmd_spectrum(const SpectrumArgs& args) {
  const auto instance = read_instance(args.instance);
  const auto kind = parse_annealer(args.annealer);
  const auto solution = solve_partition_bruteforce(instance.graph);
  const auto parts = build_parts(kind, instance, args.lambda, args.alpha);
  const auto h = parts.schedule();
  const auto grid = uniform_grid(args.grid);
  TraceOptions options;
  options.retain_vectors = args.glass;
  options.eigen.method = parse_eigen_method(args.eigensolver);
  const auto trace = spectral_trace(h, grid, args.levels, solution.degeneracy(), options);
  TraceColumns columns;
  if (args.glass) {
    for (const auto& v : trace.vectors) columns.q_gs.push_back(glass_order(Eigen::VectorXd(v.col(0)), parts.space));
    columns.q_low12 = glass_order_lowk(trace, parts.space, std::min(12, trace.k));
  }
  if (args.susceptibility) columns.susceptibility = susceptibility_profile(h, grid, args.delta_s, options.eigen);
  if (!args.out.empty()) {
    auto out = open_output(args.out);
    write_trace_csv(out, trace, columns);
  } else {
    write_trace_csv(std::cout, trace, columns);
  }
  const auto gap = relevant_gap(trace, solution.degeneracy(), h, options.eigen);
  std::cerr << "D " << solution.degeneracy() << " relevant_gap " << gap.relevant_gap << " at s "
            << gap.argmin_s << '\n';
  return kOk;
}

int cmd_sweep(const std::string& config_path) {
  const auto config = read_sweep_config(config_path);
  const auto summary = run_sweep(config);
  std::cout << "records " << summary.records_path.string() << '\n'
            << "executed " << summary.executed << " skipped " << summary.skipped << " failed "
            << summary.failed << '\n';
  return summary.failed > 0 ? kNumerical : kOk;
}

int cmd_aggregate(const std::string& records_path) {
  const auto records = read_records(records_path);
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  write_degeneracy_table(std::cout, aggregate_by_degeneracy(records));
  return kOk;
}

int cmd_compare(const std::string& records_path, const std::string& pair, const std::string& scatter) {
  const auto colon = pair.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("--pair expects A:B, e.g. boson:fermion");
  const auto a = parse_annealer(pair.substr(0, colon));
  const auto b = parse_annealer(pair.substr(colon + 1));
  const auto report = compare_annealers(read_records(records_path), a, b);
  std::cout << "pair " << to_string(a) << ':' << to_string(b) << '\n'
            << "paired " << report.paired << " unpaired " << report.unpaired << '\n'
            << to_string(a) << "_wins " << report.a_win_rate() << '\n'
            << to_string(b) << "_wins " << report.b_win_rate() << '\n'
            << "ties " << report.tie_rate() << '\n';
  if (!scatter.empty()) {
    auto out = open_output(scatter);
    write_scatter_csv(out, report);
  }
  return kOk;
}

int cmd_dump(const std::string& file, const std::string& annealer, double s, double lambda, double alpha) {
  const auto instance = read_instance(file);
  const auto parts = build_parts(parse_annealer(annealer), instance, lambda, alpha);
  assemble(parts, s).dump(std::cout);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fermionic, bosonic and Ising quantum annealers for graph partitioning"};
  app.require_subcommand(1);

  int rows = 3, cols = 4;
  std::size_t count = 1;
  std::uint64_t seed = 1;
  std::string out_dir;
  auto* gen = app.add_subcommand("gen", "Generate random 3-regular instances");
  gen->add_option("--rows", rows, "Lattice rows")->required();
  gen->add_option("--cols", cols, "Lattice columns")->required();
  gen->add_option("--count", count, "Number of instances")->required();
  gen->add_option("--seed", seed, "Ensemble seed")->required();
  gen->add_option("--out", out_dir, "Output directory")->required();

  std::string instance_file;
  auto* solve = app.add_subcommand("solve", "Exhaustive minimum bisection of an instance");
  solve->add_option("--instance", instance_file, "Instance JSON")->required();

  AnnealArgs anneal_args;
  auto* anneal = app.add_subcommand("anneal", "Simulate one anneal");
  anneal->add_option("--instance", anneal_args.instance, "Instance JSON")->required();
  anneal->add_option("--annealer", anneal_args.annealer, "fermion|boson|ising")
      ->check(CLI::IsMember({"fermion", "boson", "ising"}));
  anneal->add_option("--time", anneal_args.time, "Total annealing time T");
  anneal->add_option("--steps", anneal_args.steps, "Integration steps");
  anneal->add_option("--lambda", anneal_args.lambda, "Driving strength");
  anneal->add_option("--alpha", anneal_args.alpha, "Ising penalty factor");
  anneal->add_option("--trace", anneal_args.trace, "Write the dynamics CSV here");
  anneal->add_option("--samples", anneal_args.samples, "Trace sample count");

  SpectrumArgs spectrum_args;
  auto* spectrum = app.add_subcommand("spectrum", "Low-energy spectrum along the schedule");
  spectrum->add_option("--instance", spectrum_args.instance, "Instance JSON")->required();
  spectrum->add_option("--annealer", spectrum_args.annealer, "fermion|boson|ising")
      ->check(CLI::IsMember({"fermion", "boson", "ising"}));
  spectrum->add_option("--levels", spectrum_args.levels, "Number of levels");
  spectrum->add_option("--grid", spectrum_args.grid, "Number of s points");
  spectrum->add_option("--out", spectrum_args.out, "Output CSV (stdout if omitted)");
  spectrum->add_option("--lambda", spectrum_args.lambda, "Driving strength");
  spectrum->add_option("--alpha", spectrum_args.alpha, "Ising penalty factor");
  spectrum->add_flag("--glass", spectrum_args.glass, "Add q_gs and q_low12 columns");
  spectrum->add_flag("--susceptibility", spectrum_args.susceptibility, "Add the fidelity susceptibility column");
  spectrum->add_option("--delta-s", spectrum_args.delta_s, "Susceptibility stencil width");
  spectrum->add_option("--eigensolver", spectrum_args.eigensolver, "automatic|dense|iterative")
      ->check(CLI::IsMember({"automatic", "dense", "iterative"}));

  std::string config_file;
  auto* sweep = app.add_subcommand("sweep", "Run a sweep described by a key=value config");
  sweep->add_option("--config", config_file, "Config file")->required();

  std::string records_file;
  bool by_degeneracy = false;
  auto* aggregate = app.add_subcommand("aggregate", "Mean success probability per degeneracy");
  aggregate->add_option("--records", records_file, "records.csv")->required();
  aggregate->add_flag("--by-degeneracy", by_degeneracy, "Group by solution degeneracy D")->required();

  std::string pair = "boson:fermion";
  std::string scatter;
  auto* compare = app.add_subcommand("compare", "Pairwise win rates between two annealers");
  compare->add_option("--records", records_file, "records.csv")->required();
  compare->add_option("--pair", pair, "A:B");
  compare->add_option("--scatter", scatter, "Write per-instance scatter CSV here");

  double s = 0.5, lambda = 3.0, alpha = 1.0;
  std::string dump_annealer = "boson";
  auto* dump = app.add_subcommand("dump", "Print H(s) in coordinate format (debug)");
  dump->add_option("--instance", instance_file, "Instance JSON")->required();
  dump->add_option("--annealer", dump_annealer, "fermion|boson|ising");
  dump->add_option("--s", s, "Schedule point");
  dump->add_option("--lambda", lambda, "Driving strength");
  dump->add_option("--alpha", alpha, "Ising penalty factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_gen(rows, cols, count, seed, out_dir);
    if (*solve) return cmd_solve(instance_file);
    if (*anneal) return cmd_anneal(anneal_args);
    if (*spectrum) return cmd_spectrum(spectrum_args);
    if (*sweep) return cmd_sweep(config_file);
    if (*aggregate) return cmd_aggregate(records_file);
    if (*compare) return cmd_compare(records_file, pair, scatter);
    if (*dump) return cmd_dump(instance_file, dump_annealer, s, lambda, alpha);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::logic_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
