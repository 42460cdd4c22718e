#include "qanneal/instance.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qanneal/errors.hpp"

namespace qanneal {

namespace {

constexpr int kFormatVersion = 1;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string instance_id(int n, std::uint64_t sweep_seed, std::size_t index) {
  return std::to_string(n) + "_" + std::to_string(sweep_seed) + "_" + std::to_string(index);
}

std::uint64_t instance_seed(std::uint64_t sweep_seed, std::size_t index) {
  // k-th output of a splitmix64 stream started at sweep_seed.
  return splitmix64(sweep_seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index));
}

ProblemInstance make_instance(int rows, int cols, std::uint64_t sweep_seed, std::size_t index) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("make_instance: rows and cols must be positive");
  const int n = rows * cols;
  return {instance_id(n, sweep_seed, index), rows, cols,
          gen_regular_graph(n, 3, instance_seed(sweep_seed, index))};
}

std::string instance_to_json(const ProblemInstance& instance) {
  nlohmann::ordered_json j;
  j["version"] = kFormatVersion;
  j["n"] = instance.graph.n();
  j["rows"] = instance.rows;
  j["cols"] = instance.cols;
  j["degree"] = instance.graph.degree();
  j["seed"] = instance.graph.seed();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : instance.graph.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  return j.dump();
}

ProblemInstance instance_from_json(const std::string& text, std::string id) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != kFormatVersion)
      throw std::invalid_argument("instance: unsupported version");
    const int n = j.at("n").get<int>();
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    if (rows * cols != n) throw std::invalid_argument("instance: rows*cols != n");
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    return {std::move(id), rows, cols,
            Graph(n, j.at("degree").get<int>(), j.at("seed").get<std::uint64_t>(), std::move(edges))};
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("instance: malformed JSON: ") + e.what());
  }
}

void write_instance(const ProblemInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << instance_to_json(instance) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

ProblemInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json(buffer.str(), path.stem().string());
}

}  // namespace qanneal
