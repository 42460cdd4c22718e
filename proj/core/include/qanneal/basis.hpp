#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qanneal/graph.hpp"

namespace qanneal {

/// Binomial coefficient C(n, k) for 0 <= n <= 64; zero outside 0 <= k <= n.
std::uint64_t binomial(int n, int k);

/// Fixed-particle-number occupation basis: all n-bit integers with popcount
/// k, in ascending order. Ranking uses the combinadic formula, which agrees
/// with ascending position.
class SectorBasis {
 public:
  SectorBasis(int n, int k);

  int sites() const noexcept { return n_; }
  int particles() const noexcept { return k_; }
  std::size_t dim() const noexcept { return states_.size(); }
  std::span<const Bits> states() const noexcept { return states_; }

  std::size_t rank(Bits state) const;
  Bits unrank(std::size_t index) const;
  bool contains(Bits state) const noexcept;

 private:
  int n_;
  int k_;
  std::vector<Bits> states_;
};

SectorBasis build_sector_basis(int n, int k);

/// All 2^n spin configurations; index and configuration coincide.
class FullBasis {
 public:
  explicit FullBasis(int n);

  int sites() const noexcept { return n_; }
  std::size_t dim() const noexcept { return std::size_t{1} << n_; }
  std::size_t rank(Bits state) const;
  Bits unrank(std::size_t index) const;

 private:
  int n_;
};

/// Computational basis of one annealer: a particle-number sector for the
/// atomic annealers, the full spin basis for the Ising annealer.
class StateSpace {
 public:
  StateSpace(SectorBasis basis) : basis_(std::move(basis)) {}  // NOLINT
  StateSpace(FullBasis basis) : basis_(basis) {}               // NOLINT

  int sites() const;
  std::size_t dim() const;
  Bits state(std::size_t index) const;
  /// Index of `config`, or nullopt if it lies outside this space.
  std::optional<std::size_t> index(Bits config) const;
  bool is_sector() const noexcept { return basis_.index() == 0; }

 private:
  std::variant<SectorBasis, FullBasis> basis_;
};

/// "|b_1 b_2 ... b_N>" with no separators, site 1 leftmost.
std::string format_ket(Bits state, int n);

}  // namespace qanneal
