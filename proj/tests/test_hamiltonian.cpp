#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "qanneal/hamiltonian.hpp"
#include "qanneal/instance.hpp"

using namespace qanneal;

namespace {

double element(const SparseOperator& op, std::size_t r, std::size_t c) { return op.to_dense()(r, c); }

double diagonal_at(const SparseOperator& op, const SectorBasis& basis, std::string_view sites) {
  return op.diagonal()[basis.rank(parse_bits(sites))];
}

}  // namespace

TEST_SUITE("hamiltonian") {

TEST_CASE("open-boundary lattice bonds") {
  for (auto [rows, cols] : {std::pair{1, 8}, {2, 4}, {3, 4}, {4, 4}, {4, 5}}) {
    const LatticeGeometry g(rows, cols);
    CHECK(g.bonds().size() == static_cast<std::size_t>(rows * (cols - 1) + (rows - 1) * cols));
    std::set<std::pair<int, int>> seen;
    for (auto [i, j] : g.bonds()) {
      CHECK(i < j);
      CHECK(seen.insert({i, j}).second);
      const bool horizontal = j == i + 1 && (i - 1) / cols == (j - 1) / cols;
      const bool vertical = j == i + cols;
      CHECK((horizontal || vertical));
    }
  }
  CHECK_THROWS_AS(LatticeGeometry(0, 3), std::invalid_argument);
}

TEST_CASE("onsite potential on a four-site chain") {
  const LatticeGeometry chain(1, 4);
  const SectorBasis basis(4, 2);
  const auto hv = build_onsite(chain, basis);
  CHECK(diagonal_at(hv, basis, "0101") == -4.0);
  CHECK(diagonal_at(hv, basis, "1010") == 0.0);
  auto values = hv.diagonal();
  std::sort(values.begin(), values.end());
  CHECK(values == std::vector<double>{-4, -2, -2, -2, -2, 0});
  CHECK_FALSE(hv.has_offdiag());
  CHECK_THROWS_AS(build_onsite(LatticeGeometry(2, 3), basis), std::invalid_argument);
}

TEST_CASE("Jordan-Wigner string parity") {
  CHECK(jw_sign(0b1111, 3, 4) == 1);
  CHECK(jw_sign(parse_bits("0100"), 1, 3) == -1);
  CHECK(jw_sign(parse_bits("0110"), 1, 4) == 1);
  CHECK(jw_sign(parse_bits("1001"), 1, 4) == 1);
  CHECK(jw_sign(parse_bits("01110"), 1, 5) == -1);
  CHECK(jw_sign(parse_bits("01110"), 5, 1) == -1);
}

TEST_CASE("two-site hop is the same for both statistics") {
  const LatticeGeometry pair(1, 2);
  const SectorBasis basis(2, 1);
  for (auto stats : {Statistics::fermion, Statistics::boson}) {
    const auto ht = build_tunneling(pair, basis, stats);
    Eigen::Matrix2d expected;
    expected << 0, -1, -1, 0;
    CHECK(ht.to_dense() == expected);
  }
}

TEST_CASE("vertical bond on a 2x2 plaquette carries the fermion string") {
  const LatticeGeometry plaquette(2, 2);
  const SectorBasis basis(4, 2);
  const auto r = basis.rank(parse_bits("1100"));
  const auto c = basis.rank(parse_bits("0110"));
  CHECK(element(build_tunneling(plaquette, basis, Statistics::fermion), r, c) == 1.0);
  CHECK(element(build_tunneling(plaquette, basis, Statistics::boson), r, c) == -1.0);
}

TEST_CASE("fermion tunneling matches second-quantized matrix elements") {
  for (auto [rows, cols] : {std::pair{2, 2}, {2, 3}, {3, 2}, {2, 4}, {1, 6}}) {
    const LatticeGeometry g(rows, cols);
    const int n = g.sites();
    for (int k = 0; k <= n; ++k) {
      const SectorBasis basis(n, k);
      const auto states = oracle::sector_states(n, k);
      const Eigen::MatrixXd reference = oracle::fermion_tunneling(g.bonds(), states);
      CHECK((build_tunneling(g, basis, Statistics::fermion).to_dense() - reference).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("boson tunneling equals the half-normalized XY spin form") {
  for (auto [rows, cols] : {std::pair{2, 2}, {2, 3}, {2, 4}}) {
    const LatticeGeometry g(rows, cols);
    const int n = g.sites();
    const auto states = oracle::sector_states(n, n / 2);
    const auto dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd xy = Eigen::MatrixXcd::Zero(dim, dim);
    for (auto [i, j] : g.bonds())
      xy -= 0.5 * (oracle::pauli(n, i, 'x') * oracle::pauli(n, j, 'x') +
                   oracle::pauli(n, i, 'y') * oracle::pauli(n, j, 'y'));
    const Eigen::MatrixXcd reference = oracle::restrict_to(xy, states);
    const Eigen::MatrixXd boson = build_tunneling(g, SectorBasis(n, n / 2), Statistics::boson).to_dense();
    CHECK((boson.cast<std::complex<double>>() - reference).cwiseAbs().maxCoeff() < 1e-14);
    // S_z commutes with the spin form: no element leaves the sector.
    Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 1; i <= n; ++i) sz += oracle::pauli(n, i, 'z');
    CHECK((xy * sz - sz * xy).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("statistics change only signs; bosons are stoquastic, fermions are not") {
  const LatticeGeometry g(2, 4);
  const SectorBasis basis(8, 4);
  const auto fermion = build_tunneling(g, basis, Statistics::fermion);
  const auto boson = build_tunneling(g, basis, Statistics::boson);
  REQUIRE(fermion.offdiag().size() == boson.offdiag().size());
  int negative = 0, positive = 0;
  for (std::size_t e = 0; e < boson.offdiag().size(); ++e) {
    const auto& f = fermion.offdiag()[e];
    const auto& b = boson.offdiag()[e];
    CHECK(f.row == b.row);
    CHECK(f.col == b.col);
    CHECK(b.value == -1.0);
    CHECK(std::abs(f.value) == 1.0);
    (f.value < 0 ? negative : positive)++;
    // particle number conserved
    CHECK(__builtin_popcountll(basis.unrank(b.row)) == __builtin_popcountll(basis.unrank(b.col)));
  }
  CHECK(negative > 0);
  CHECK(positive > 0);
  CHECK_FALSE(fermion.has_diagonal());
}

TEST_CASE("atomic problem diagonal is the cut size") {
  const SectorBasis b4(4, 2);
  CHECK(diagonal_at(build_problem_atomic(complete_graph_k4(), b4), b4, "0011") == 4.0);
  const SectorBasis b6(6, 3);
  const auto hp = build_problem_atomic(prism_graph(), b6);
  CHECK(diagonal_at(hp, b6, "000111") == 3.0);
  for (std::size_t r = 0; r < b6.dim(); ++r) CHECK(hp.diagonal()[r] == cut_size(prism_graph(), b6.unrank(r)));
  CHECK_THROWS_AS(build_problem_atomic(prism_graph(), b4), std::invalid_argument);
}

TEST_CASE("problem ground states equal the brute-force solution set at n=12") {
  for (std::size_t k = 0; k < 20; ++k) {
    const auto inst = make_instance(3, 4, 99, k);
    const auto sol = oracle::enumerate_bisections(inst.graph);
    const SectorBasis basis(12, 6);
    const auto atomic = build_problem_atomic(inst.graph, basis);
    const double lowest = *std::min_element(atomic.diagonal().begin(), atomic.diagonal().end());
    std::vector<Bits> argmin;
    for (std::size_t r = 0; r < basis.dim(); ++r)
      if (atomic.diagonal()[r] == lowest) argmin.push_back(basis.unrank(r));
    CHECK(argmin == sol.solutions);

    const auto ising = build_ising_problem(inst.graph, 1.0);
    const double lowest_spin = *std::min_element(ising.diagonal().begin(), ising.diagonal().end());
    std::vector<Bits> spin_argmin;
    for (std::size_t b = 0; b < ising.dim(); ++b)
      if (ising.diagonal()[b] == lowest_spin) spin_argmin.push_back(b);
    CHECK(spin_argmin == sol.solutions);
    CHECK(lowest_spin == sol.min_cut);
  }
}

TEST_CASE("Ising penalty encoding") {
  const auto hp = build_ising_problem(complete_graph_k4(), 1.0);
  CHECK(hp.diagonal()[parse_bits("0011")] == 4.0);
  CHECK(hp.diagonal()[parse_bits("1111")] == 16.0);
  CHECK(alpha_lower_bound(complete_graph_k4()) == doctest::Approx(0.5));
  CHECK(alpha_lower_bound(gen_regular_graph(12, 3, 1)) == doctest::Approx(0.75));
  CHECK_THROWS_AS(build_ising_problem(gen_regular_graph(12, 3, 1), 0.5), std::invalid_argument);
  CHECK_NOTHROW(build_ising_problem(gen_regular_graph(12, 3, 1), 0.5, AlphaCheck::warn));
}

TEST_CASE("Ising drivers on two spins") {
  const auto [hz, hx] = build_ising_drivers(2);
  CHECK(hz.diagonal()[parse_bits("01")] == -2.0);
  CHECK(*std::min_element(hz.diagonal().begin(), hz.diagonal().end()) == -2.0);
  CHECK(std::count(hz.diagonal().begin(), hz.diagonal().end(), -2.0) == 1);
  Eigen::Matrix4d expected;
  expected << 0, -1, -1, 0,  //
      -1, 0, 0, -1,          //
      -1, 0, 0, -1,          //
      0, -1, -1, 0;
  CHECK(hx.to_dense() == expected);
  CHECK_THROWS(build_ising_drivers(0));
}

TEST_CASE("assemble interpolates the three components") {
  const auto inst = make_instance(2, 4, 3, 0);
  for (auto kind : {AnnealerKind::fermion, AnnealerKind::boson, AnnealerKind::ising}) {
    const auto parts = build_parts(kind, inst);
    CHECK(assemble(parts, 0.0).to_dense() == parts.h_initial->to_dense());
    CHECK(assemble(parts, 1.0).to_dense() == parts.h_problem->to_dense());
    const Eigen::MatrixXd mid = 0.5 * parts.h_initial->to_dense() + 0.75 * parts.h_driver->to_dense() +
                                0.5 * parts.h_problem->to_dense();
    CHECK((assemble(parts, 0.5).to_dense() - mid).cwiseAbs().maxCoeff() < 1e-15);
    const Eigen::MatrixXd h = assemble(parts, 0.37).to_dense();
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(assemble(parts, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(assemble(parts, -0.1), std::invalid_argument);
  }
}

TEST_CASE("instant Hamiltonian matvec matches the materialized matrix") {
  const auto inst = make_instance(2, 4, 5, 1);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto kind : {AnnealerKind::fermion, AnnealerKind::boson, AnnealerKind::ising}) {
    const auto parts = build_parts(kind, inst);
    const auto h = parts.schedule();
    for (double s : {0.0, 0.2, 0.5, 0.9, 1.0}) {
      Eigen::VectorXcd x(parts.dim());
      for (auto& v : x) v = {u(rng), u(rng)};
      Eigen::VectorXcd y(parts.dim());
      h.at(s).apply(x, y);
      const Eigen::VectorXcd ref = assemble(parts, s).to_dense().cast<std::complex<double>>() * x;
      CHECK((y - ref).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((h.at(s).to_dense() - assemble(parts, s).to_dense()).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("single-row lattices make fermions and bosons isospectral") {
  const Graph g = gen_regular_graph(8, 3, 17);
  const LatticeGeometry row(1, 8);
  const auto fermion = build_atomic_parts(Statistics::fermion, g, row);
  const auto boson = build_atomic_parts(Statistics::boson, g, row);
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto ef = oracle::dense_spectrum(assemble(fermion, s).to_dense());
    const auto eb = oracle::dense_spectrum(assemble(boson, s).to_dense());
    CHECK((ef - eb).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("SparseOperator normalizes its storage") {
  const SparseOperator op(3, {}, {{2, 0, 1.0}, {0, 2, 0.5}, {0, 1, 0.0}, {1, 2, -1.0}});
  REQUIRE(op.offdiag().size() == 2);
  CHECK(op.offdiag()[0].row == 0);
  CHECK(op.offdiag()[0].col == 2);
  CHECK(op.offdiag()[0].value == 1.5);
  CHECK(op.offdiag()[1].row == 1);
  CHECK_THROWS_AS(SparseOperator(3, {}, {{1, 1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(SparseOperator(3, {}, {{0, 3, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(SparseOperator(3, {1.0, 2.0}, {}), std::invalid_argument);

  std::ostringstream out;
  SparseOperator(2, {0.1, 0.0}, {{0, 1, -1.0}}).dump(out);
  CHECK(out.str() == "0 0 0.10000000000000001\n0 1 -1\n");
}

TEST_CASE("make_parts checks component structure") {
  const SectorBasis basis(4, 2);
  const LatticeGeometry g(2, 2);
  const auto hv = build_onsite(g, basis);
  const auto ht = build_tunneling(g, basis, Statistics::boson);
  CHECK_THROWS_AS(make_parts(AnnealerKind::boson, StateSpace(basis), ht, ht, hv, 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_parts(AnnealerKind::boson, StateSpace(basis), hv, hv, hv, 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_parts(AnnealerKind::boson, StateSpace(SectorBasis(4, 1)), hv, ht, hv, 3, 0),
                  std::invalid_argument);
  CHECK_NOTHROW(make_parts(AnnealerKind::boson, StateSpace(basis), hv, ht, hv, 3, 0));
}

}  // TEST_SUITE
