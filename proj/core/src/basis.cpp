#include "qanneal/basis.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>

namespace qanneal {

namespace {

struct BinomialTable {
  std::array<std::array<std::uint64_t, 65>, 65> c{};
  constexpr BinomialTable() {
    for (int n = 0; n <= 64; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
};

constexpr BinomialTable kBinomials{};

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > 64) throw std::out_of_range("binomial: n out of range");
  if (k < 0 || k > n) return 0;
  return kBinomials.c[n][k];
}

SectorBasis::SectorBasis(int n, int k) : n_(n), k_(k) {
  if (n < 0 || n > 63) throw std::invalid_argument("SectorBasis: n must be in [0, 63]");
  if (k < 0 || k > n) throw std::invalid_argument("SectorBasis: k must be in [0, n]");
  states_.reserve(binomial(n, k));
  if (k == 0) {
    states_.push_back(0);
    return;
  }
  // Gosper's hack: next larger integer with the same popcount.
  const Bits last = ((Bits{1} << k) - 1) << (n - k);
  Bits x = (Bits{1} << k) - 1;
  while (true) {
    states_.push_back(x);
    if (x == last) break;
    const Bits c = x & (~x + 1);
    const Bits r = x + c;
    x = (((r ^ x) >> 2) / c) | r;
  }
}

std::size_t SectorBasis::rank(Bits state) const {
  if (std::popcount(state) != k_ || (n_ < 64 && (state >> n_) != 0))
    throw std::invalid_argument("SectorBasis::rank: state is not in the sector");
  std::size_t r = 0;
  int j = 1;
  while (state) {
    const int p = std::countr_zero(state);
    r += binomial(p, j++);
    state &= state - 1;
  }
  return r;
}

Bits SectorBasis::unrank(std::size_t index) const {
  if (index >= states_.size()) throw std::out_of_range("SectorBasis::unrank: index out of range");
  return states_[index];
}

bool SectorBasis::contains(Bits state) const noexcept {
  return std::popcount(state) == k_ && (state >> n_) == 0;
}

SectorBasis build_sector_basis(int n, int k) { return SectorBasis(n, k); }

FullBasis::FullBasis(int n) : n_(n) {
  if (n < 0 || n > 30) throw std::invalid_argument("FullBasis: n must be in [0, 30]");
}

std::size_t FullBasis::rank(Bits state) const {
  if ((state >> n_) != 0) throw std::invalid_argument("FullBasis::rank: state has too many bits");
  return static_cast<std::size_t>(state);
}

Bits FullBasis::unrank(std::size_t index) const {
  if (index >= dim()) throw std::out_of_range("FullBasis::unrank: index out of range");
  return static_cast<Bits>(index);
}

int StateSpace::sites() const {
  return std::visit([](const auto& b) { return b.sites(); }, basis_);
}

std::size_t StateSpace::dim() const {
  return std::visit([](const auto& b) { return b.dim(); }, basis_);
}

Bits StateSpace::state(std::size_t index) const {
  return std::visit([index](const auto& b) { return b.unrank(index); }, basis_);
}

std::optional<std::size_t> StateSpace::index(Bits config) const {
  if (const auto* sector = std::get_if<SectorBasis>(&basis_)) {
    if (!sector->contains(config)) return std::nullopt;
    return sector->rank(config);
  }
  const auto& full = std::get<FullBasis>(basis_);
  if ((config >> full.sites()) != 0) return std::nullopt;
  return full.rank(config);
}

std::string format_ket(Bits state, int n) { return "|" + format_bits(state, n) + "⟩"; }

}  // namespace qanneal
