#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qanneal/eigensolver.hpp"
#include "qanneal/hamiltonian.hpp"

namespace qanneal {

enum class Task { anneal, spectrum, susceptibility, glass, dynamics_trace };

std::string_view to_string(Task task);
Task parse_task(std::string_view name);

struct SweepConfig {
  int rows = 3;
  int cols = 4;
  std::size_t instance_count = 1;
  std::uint64_t seed = 1;
  std::vector<AnnealerKind> annealers{AnnealerKind::fermion, AnnealerKind::boson, AnnealerKind::ising};
  double total_time = 50.0;
  double lambda = 3.0;
  double alpha = 1.0;
  int steps = 2000;
  int samples = 201;     // dynamics-trace sample count
  int trace_grid = 101;  // spectrum / susceptibility / glass grid
  int gap_grid = 201;    // relevant-gap scan grid
  int levels = 12;
  double delta_s = 1e-3;
  EigenMethod eigensolver = EigenMethod::automatic;
  std::filesystem::path output_dir = "sweep";
  std::vector<Task> tasks{Task::anneal};
  int threads = 0;  // 0: hardware concurrency

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

/// Flat "key = value" text, '#' comments. Keys mirror the SweepConfig fields;
/// list values (annealers, tasks) are comma separated.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig read_sweep_config(const std::filesystem::path& path);

struct ResultRecord {
  std::string instance_id;
  AnnealerKind annealer = AnnealerKind::boson;
  int n = 0;
  std::size_t degeneracy = 0;
  int min_cut = 0;
  double p_s_final = 0.0;                // NaN when the anneal task did not run
  std::optional<double> relevant_gap;
  double runtime_seconds = 0.0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

inline constexpr const char* kRecordHeader =
    "instance_id,annealer,n,D,min_cut,P_s_final,relevant_gap,runtime_seconds,status";

void write_records(std::ostream& out, const std::vector<ResultRecord>& records);
std::vector<ResultRecord> parse_records(std::istream& in);
std::vector<ResultRecord> read_records(const std::filesystem::path& path);

struct SweepSummary {
  std::vector<ResultRecord> records;  // every record in records.csv, merged
  std::size_t executed = 0;
  std::size_t skipped = 0;  // already complete from a previous run
  std::size_t failed = 0;
  std::filesystem::path records_path;
};

/// Generates instances into <out>/instances, runs every (instance, annealer)
/// task not already recorded, writes traces into <out>/traces and merges
/// records into <out>/records.csv in (instance, annealer) order.
SweepSummary run_sweep(const SweepConfig& config);

struct DegeneracyRow {
  std::size_t degeneracy = 0;
  std::size_t instances = 0;
  std::map<AnnealerKind, double> mean_p_s;
  std::map<AnnealerKind, std::size_t> counts;
};

struct DegeneracyTable {
  std::vector<DegeneracyRow> rows;  // ascending D; row.instances is the histogram
};

/// Groups successful records by D and averages P_s per annealer.
DegeneracyTable aggregate_by_degeneracy(const std::vector<ResultRecord>& records);
void write_degeneracy_table(std::ostream& out, const DegeneracyTable& table);

struct ScatterPoint {
  std::string instance_id;
  double p_a = 0.0;
  double p_b = 0.0;
  std::size_t degeneracy = 0;
};

struct WinRateReport {
  AnnealerKind a = AnnealerKind::boson;
  AnnealerKind b = AnnealerKind::fermion;
  std::size_t paired = 0;
  std::size_t unpaired = 0;
  std::size_t a_wins = 0;
  std::size_t b_wins = 0;
  std::size_t ties = 0;
  std::vector<ScatterPoint> scatter;

  double a_win_rate() const { return paired ? static_cast<double>(a_wins) / paired : 0.0; }
  double b_win_rate() const { return paired ? static_cast<double>(b_wins) / paired : 0.0; }
  double tie_rate() const { return paired ? static_cast<double>(ties) / paired : 0.0; }
};

/// Fraction of instances with P_s(a) > P_s(b) (strict), over instances that
/// have successful records for both annealers.
WinRateReport compare_annealers(const std::vector<ResultRecord>& records, AnnealerKind a, AnnealerKind b);
void write_scatter_csv(std::ostream& out, const WinRateReport& report);

}  // namespace qanneal
