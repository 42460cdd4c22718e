#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "qanneal/graph.hpp"

namespace qanneal {

/// A graph-partitioning instance together with the lattice it is annealed
/// on. Sites are numbered row-major, site i = (r-1)*cols + c.
struct ProblemInstance {
  std::string id;
  int rows = 0;
  int cols = 0;
  Graph graph;
};

/// "{n}_{sweep_seed}_{index}"
std::string instance_id(int n, std::uint64_t sweep_seed, std::size_t index);

/// Seed of instance `index` in a sweep; independent of the instance count.
std::uint64_t instance_seed(std::uint64_t sweep_seed, std::size_t index);

/// Instance `index` of the ensemble defined by (rows, cols, sweep_seed).
ProblemInstance make_instance(int rows, int cols, std::uint64_t sweep_seed, std::size_t index);

/// JSON text: {"version":1,"n":..,"rows":..,"cols":..,"degree":3,"seed":..,"edges":[[u,v],..]}
std::string instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const std::string& text, std::string id = {});

void write_instance(const ProblemInstance& instance, const std::filesystem::path& path);
/// The id defaults to the file stem.
ProblemInstance read_instance(const std::filesystem::path& path);

}  // namespace qanneal
