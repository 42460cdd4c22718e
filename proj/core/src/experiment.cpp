#include "qanneal/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "qanneal/dynamics.hpp"
#include "qanneal/errors.hpp"
#include "qanneal/instance.hpp"
#include "qanneal/spectral.hpp"

namespace qanneal {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(std::string_view text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(begin, end - begin + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string sanitize(std::string text) {
  for (char& c : text)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return text;
}

// (n, seed, index) when the id follows the sweep convention.
std::tuple<long long, unsigned long long, long long, std::string> id_order(const std::string& id) {
  const auto parts = split(id, '_');
  try {
    if (parts.size() == 3)
      return {std::stoll(parts[0]), std::stoull(parts[1]), std::stoll(parts[2]), id};
  } catch (const std::exception&) {
  }
  return {std::numeric_limits<long long>::max(), 0, 0, id};
}

void sort_records(std::vector<ResultRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const ResultRecord& a, const ResultRecord& b) {
    const auto ka = id_order(a.instance_id);
    const auto kb = id_order(b.instance_id);
    if (ka != kb) return ka < kb;
    return static_cast<int>(a.annealer) < static_cast<int>(b.annealer);
  });
}

bool has_task(const SweepConfig& config, Task task) {
  return std::find(config.tasks.begin(), config.tasks.end(), task) != config.tasks.end();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

ResultRecord run_task(const ProblemInstance& instance, const PartitionSolution& solution,
                      AnnealerKind annealer, const SweepConfig& config, const fs::path& trace_dir) {
  const auto started = std::chrono::steady_clock::now();
  ResultRecord record;
  record.instance_id = instance.id;
  record.annealer = annealer;
  record.n = instance.graph.n();
  record.degeneracy = solution.degeneracy();
  record.min_cut = solution.min_cut;
  record.p_s_final = kNaN;

  const auto parts = build_parts(annealer, instance, config.lambda, config.alpha);
  const std::string stem = instance.id + "_" + std::string(to_string(annealer));

  const bool dynamics_trace = has_task(config, Task::dynamics_trace);
  if (has_task(config, Task::anneal) || dynamics_trace) {
    ObserverSpec observers;
    observers.samples = dynamics_trace ? config.samples : 1;
    observers.ground_probability = dynamics_trace;
    observers.effective_dimension = dynamics_trace;
    observers.glass_order = dynamics_trace;
    const auto trace = evolve(parts, solution, AnnealSchedule{config.total_time}, config.steps, observers);
    record.p_s_final = trace.final_success();
    if (dynamics_trace) {
      std::ostringstream csv;
      write_dynamics_csv(csv, trace);
      write_file(trace_dir / (stem + "_dynamics.csv"), csv.str());
      write_file(trace_dir / (stem + "_final.json"),
                 final_summary_json(instance.id, annealer, config.total_time, config.steps,
                                    record.p_s_final, solution.degeneracy(), solution.min_cut) + "\n");
    }
  }

  const bool spectrum = has_task(config, Task::spectrum);
  const bool glass = has_task(config, Task::glass);
  const bool susceptibility = has_task(config, Task::susceptibility);
  if (spectrum || glass || susceptibility) {
    const auto h = parts.schedule();
    const auto grid = uniform_grid(config.trace_grid);
    TraceOptions options;
    options.retain_vectors = glass;
    options.eigen.method = config.eigensolver;
    const auto trace = spectral_trace(h, grid, config.levels, solution.degeneracy(), options);
    TraceColumns columns;
    if (glass) {
      for (const auto& v : trace.vectors) columns.q_gs.push_back(glass_order(Eigen::VectorXd(v.col(0)), parts.space));
      columns.q_low12 = glass_order_lowk(trace, parts.space, std::min(12, trace.k));
    }
    if (susceptibility) columns.susceptibility = susceptibility_profile(h, grid, config.delta_s, options.eigen);
    std::ostringstream csv;
    write_trace_csv(csv, trace, columns);
    write_file(trace_dir / (stem + "_spectrum.csv"), csv.str());

    if (spectrum) {
      TraceOptions gap_options;
      gap_options.track_levels = false;
      gap_options.eigen = options.eigen;
      const auto gap_grid = uniform_grid(config.gap_grid);
      const auto gap_trace =
          spectral_trace(h, gap_grid, static_cast<int>(solution.degeneracy()) + 1, solution.degeneracy(), gap_options);
      record.relevant_gap = relevant_gap(gap_trace, solution.degeneracy(), h, options.eigen).relevant_gap;
    }
  }

  record.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return record;
}

std::string format_record(const ResultRecord& r) {
  std::ostringstream out;
  out.precision(17);
  out << r.instance_id << ',' << to_string(r.annealer) << ',' << r.n << ',' << r.degeneracy << ','
      << r.min_cut << ',' << r.p_s_final << ',';
  if (r.relevant_gap) out << *r.relevant_gap;
  out << ',' << r.runtime_seconds << ',' << sanitize(r.status);
  return out.str();
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t == "nan" || t == "-nan" || t == "NaN") return kNaN;
  return std::stod(t);
}

}  // namespace

// ------------------------------------------------------------------ config

std::string_view to_string(Task task) {
  switch (task) {
    case Task::anneal: return "anneal";
    case Task::spectrum: return "spectrum";
    case Task::susceptibility: return "susceptibility";
    case Task::glass: return "glass";
    case Task::dynamics_trace: return "dynamics-trace";
  }
  return "?";
}

Task parse_task(std::string_view name) {
  for (Task t : {Task::anneal, Task::spectrum, Task::susceptibility, Task::glass, Task::dynamics_trace})
    if (to_string(t) == name) return t;
  throw std::invalid_argument("unknown task \"" + std::string(name) + "\"");
}

void SweepConfig::validate() const {
  if (rows < 1 || cols < 1) throw std::invalid_argument("sweep config: rows and cols must be positive");
  if ((rows * cols) % 2 != 0) throw std::invalid_argument("sweep config: rows*cols must be even");
  if (rows * cols <= 3) throw std::invalid_argument("sweep config: need more than 3 sites for a 3-regular graph");
  if (instance_count < 1) throw std::invalid_argument("sweep config: instance_count must be at least 1");
  if (annealers.empty()) throw std::invalid_argument("sweep config: no annealers");
  if (tasks.empty()) throw std::invalid_argument("sweep config: no tasks");
  if (!(total_time > 0.0)) throw std::invalid_argument("sweep config: total_time must be positive");
  if (steps < 1 || samples < 1 || trace_grid < 2 || gap_grid < 2 || levels < 1)
    throw std::invalid_argument("sweep config: steps, samples, grids and levels must be positive");
  if (!(delta_s > 0.0 && delta_s < 0.5)) throw std::invalid_argument("sweep config: delta_s out of range");
}

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("sweep config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    try {
      if (key == "rows") config.rows = std::stoi(value);
      else if (key == "cols") config.cols = std::stoi(value);
      else if (key == "instance_count") config.instance_count = std::stoull(value);
      else if (key == "seed") config.seed = std::stoull(value);
      else if (key == "total_time" || key == "time") config.total_time = std::stod(value);
      else if (key == "lambda") config.lambda = std::stod(value);
      else if (key == "alpha") config.alpha = std::stod(value);
      else if (key == "steps") config.steps = std::stoi(value);
      else if (key == "samples") config.samples = std::stoi(value);
      else if (key == "trace_grid") config.trace_grid = std::stoi(value);
      else if (key == "gap_grid") config.gap_grid = std::stoi(value);
      else if (key == "levels") config.levels = std::stoi(value);
      else if (key == "delta_s") config.delta_s = std::stod(value);
      else if (key == "output_dir" || key == "out") config.output_dir = value;
      else if (key == "threads") config.threads = std::stoi(value);
      else if (key == "eigensolver") config.eigensolver = parse_eigen_method(value);
      else if (key == "annealers") {
        config.annealers.clear();
        for (const auto& name : split(value, ',')) config.annealers.push_back(parse_annealer(trim(name)));
      } else if (key == "tasks") {
        config.tasks.clear();
        for (const auto& name : split(value, ',')) config.tasks.push_back(parse_task(trim(name)));
      } else {
        throw std::invalid_argument("unknown key \"" + key + "\"");
      }
    } catch (const std::logic_error& e) {
      throw std::invalid_argument("sweep config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

SweepConfig read_sweep_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_sweep_config(in);
}

// ----------------------------------------------------------------- records

void write_records(std::ostream& out, const std::vector<ResultRecord>& records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) out << format_record(r) << '\n';
}

std::vector<ResultRecord> parse_records(std::istream& in) {
  std::vector<ResultRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == kRecordHeader) continue;
    const auto f = split(line, ',');
    if (f.size() != 9)
      throw std::invalid_argument("records line " + std::to_string(line_no) + ": expected 9 fields");
    try {
      ResultRecord r;
      r.instance_id = f[0];
      r.annealer = parse_annealer(f[1]);
      r.n = std::stoi(f[2]);
      r.degeneracy = std::stoull(f[3]);
      r.min_cut = std::stoi(f[4]);
      r.p_s_final = parse_double(f[5]);
      if (!trim(f[6]).empty()) r.relevant_gap = parse_double(f[6]);
      r.runtime_seconds = parse_double(f[7]);
      r.status = f[8];
      records.push_back(std::move(r));
    } catch (const std::logic_error& e) {
      throw std::invalid_argument("records line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::vector<ResultRecord> read_records(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_records(in);
}

// ------------------------------------------------------------------- sweep

SweepSummary run_sweep(const SweepConfig& config) {
  config.validate();
  const fs::path out = config.output_dir;
  const fs::path instance_dir = out / "instances";
  const fs::path trace_dir = out / "traces";
  const fs::path tmp_dir = out / "tmp";
  std::error_code ec;
  for (const auto& dir : {out, instance_dir, trace_dir, tmp_dir}) {
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  }

  SweepSummary summary;
  summary.records_path = out / "records.csv";

  // Completed work from earlier runs: merged records plus unmerged temp rows.
  std::vector<ResultRecord> existing;
  if (fs::exists(summary.records_path)) existing = read_records(summary.records_path);
  for (const auto& entry : fs::directory_iterator(tmp_dir)) {
    if (entry.path().extension() != ".csv") continue;
    for (auto& r : read_records(entry.path())) existing.push_back(std::move(r));
  }
  std::set<std::pair<std::string, AnnealerKind>> done;
  std::vector<ResultRecord> kept;
  for (auto& r : existing) {
    if (!r.ok()) continue;  // failed tasks are retried
    if (done.insert({r.instance_id, r.annealer}).second) kept.push_back(std::move(r));
  }

  std::vector<ProblemInstance> instances;
  std::vector<PartitionSolution> solutions;
  instances.reserve(config.instance_count);
  for (std::size_t k = 0; k < config.instance_count; ++k) {
    auto instance = make_instance(config.rows, config.cols, config.seed, k);
    write_instance(instance, instance_dir / (instance.id + ".json"));
    solutions.push_back(solve_partition_bruteforce(instance.graph));
    instances.push_back(std::move(instance));
  }

  struct Job {
    std::size_t instance;
    AnnealerKind annealer;
  };
  std::vector<Job> jobs;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    for (const auto annealer : config.annealers) {
      if (done.count({instances[k].id, annealer})) {
        ++summary.skipped;
        continue;
      }
      jobs.push_back({k, annealer});
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> failed{0};
  std::mutex error_mutex;
  std::exception_ptr io_failure;
  auto worker = [&] {
    while (true) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const auto& job = jobs[j];
      const auto& instance = instances[job.instance];
      ResultRecord record;
      try {
        record = run_task(instance, solutions[job.instance], job.annealer, config, trace_dir);
      } catch (const IoError&) {
        std::lock_guard lock(error_mutex);
        if (!io_failure) io_failure = std::current_exception();
        continue;
      } catch (const std::exception& e) {
        record.instance_id = instance.id;
        record.annealer = job.annealer;
        record.n = instance.graph.n();
        record.degeneracy = solutions[job.instance].degeneracy();
        record.min_cut = solutions[job.instance].min_cut;
        record.p_s_final = kNaN;
        record.status = std::string("error: ") + e.what();
        ++failed;
      }
      try {
        std::ostringstream row;
        write_records(row, {record});
        write_file(tmp_dir / (instance.id + "_" + std::string(to_string(job.annealer)) + ".csv"), row.str());
      } catch (const IoError&) {
        std::lock_guard lock(error_mutex);
        if (!io_failure) io_failure = std::current_exception();
      }
    }
  };

  unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (io_failure) std::rethrow_exception(io_failure);

  // Merge single-threaded: previous records, then this run's temp rows.
  std::vector<ResultRecord> merged = std::move(kept);
  std::vector<fs::path> temp_files;
  for (const auto& entry : fs::directory_iterator(tmp_dir))
    if (entry.path().extension() == ".csv") temp_files.push_back(entry.path());
  std::sort(temp_files.begin(), temp_files.end());
  for (const auto& path : temp_files) {
    for (auto& r : read_records(path)) {
      if (r.ok() && done.count({r.instance_id, r.annealer})) continue;
      merged.push_back(std::move(r));
    }
  }
  sort_records(merged);
  std::ostringstream csv;
  write_records(csv, merged);
  const fs::path partial = out / "records.csv.partial";
  write_file(partial, csv.str());
  fs::rename(partial, summary.records_path, ec);
  if (ec) throw IoError("cannot replace " + summary.records_path.string() + ": " + ec.message());
  for (const auto& path : temp_files) fs::remove(path, ec);
  fs::remove(tmp_dir, ec);

  summary.executed = jobs.size();
  summary.failed = failed.load();
  summary.records = std::move(merged);
  return summary;
}

// ------------------------------------------------------------- aggregation

DegeneracyTable aggregate_by_degeneracy(const std::vector<ResultRecord>& records) {
  std::map<std::size_t, std::set<std::string>> instances_by_d;
  std::map<std::size_t, std::map<AnnealerKind, std::vector<double>>> values;
  for (const auto& r : records) {
    if (!r.ok() || std::isnan(r.p_s_final)) continue;
    instances_by_d[r.degeneracy].insert(r.instance_id);
    values[r.degeneracy][r.annealer].push_back(r.p_s_final);
  }
  DegeneracyTable table;
  for (auto& [d, ids] : instances_by_d) {
    DegeneracyRow row;
    row.degeneracy = d;
    row.instances = ids.size();
    for (auto& [annealer, ps] : values[d]) {
      std::sort(ps.begin(), ps.end());  // order-independent summation
      double sum = 0.0;
      for (double p : ps) sum += p;
      row.mean_p_s[annealer] = sum / static_cast<double>(ps.size());
      row.counts[annealer] = ps.size();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_degeneracy_table(std::ostream& out, const DegeneracyTable& table) {
  std::set<AnnealerKind> annealers;
  for (const auto& row : table.rows)
    for (const auto& [a, m] : row.mean_p_s) annealers.insert(a);
  const auto old = out.precision(17);
  out << "D,instances";
  for (auto a : annealers) out << ",mean_P_s_" << to_string(a) << ",count_" << to_string(a);
  out << '\n';
  for (const auto& row : table.rows) {
    out << row.degeneracy << ',' << row.instances;
    for (auto a : annealers) {
      const auto it = row.mean_p_s.find(a);
      if (it == row.mean_p_s.end())
        out << ",,0";
      else
        out << ',' << it->second << ',' << row.counts.at(a);
    }
    out << '\n';
  }
  out.precision(old);
}

WinRateReport compare_annealers(const std::vector<ResultRecord>& records, AnnealerKind a, AnnealerKind b) {
  std::map<std::string, const ResultRecord*> by_a;
  std::map<std::string, const ResultRecord*> by_b;
  std::set<std::string> ids;
  for (const auto& r : records) {
    if (!r.ok() || std::isnan(r.p_s_final)) continue;
    if (r.annealer == a) by_a[r.instance_id] = &r;
    if (r.annealer == b) by_b[r.instance_id] = &r;
    if (r.annealer == a || r.annealer == b) ids.insert(r.instance_id);
  }
  WinRateReport report;
  report.a = a;
  report.b = b;
  std::vector<std::string> ordered(ids.begin(), ids.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const std::string& x, const std::string& y) { return id_order(x) < id_order(y); });
  for (const auto& id : ordered) {
    const auto ia = by_a.find(id);
    const auto ib = by_b.find(id);
    if (ia == by_a.end() || ib == by_b.end()) {
      ++report.unpaired;
      continue;
    }
    ++report.paired;
    const double pa = ia->second->p_s_final;
    const double pb = ib->second->p_s_final;
    if (pa > pb)
      ++report.a_wins;
    else if (pb > pa)
      ++report.b_wins;
    else
      ++report.ties;
    report.scatter.push_back({id, pa, pb, ia->second->degeneracy});
  }
  return report;
}

void write_scatter_csv(std::ostream& out, const WinRateReport& report) {
  const auto old = out.precision(17);
  out << "instance_id,P_s_" << to_string(report.a) << ",P_s_" << to_string(report.b) << ",D\n";
  for (const auto& p : report.scatter)
    out << p.instance_id << ',' << p.p_a << ',' << p.p_b << ',' << p.degeneracy << '\n';
  out.precision(old);
}

}  // namespace qanneal
