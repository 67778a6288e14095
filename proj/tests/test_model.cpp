#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "polariton/error.hpp"
#include "polariton/model.hpp"

using namespace polariton;

namespace {

oracle::Matrix to_oracle(const SymmetricMatrix& m) {
  auto out = oracle::zeros(m.dimension());
  for (std::size_t i = 0; i < m.dimension(); ++i)
    for (std::size_t j = 0; j < m.dimension(); ++j) out[i][j] = m(i, j);
  return out;
}

SystemParams resonant(int big_n, double delta = 0.0) {
  return SystemParams::from_detuning(1000.0, delta, 1.0, big_n);
}

}  // namespace

TEST_CASE("system params reject invalid input") {
  CHECK_THROWS_AS(SystemParams(1.0, 1.0, 0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(SystemParams(1.0, 1.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(SystemParams(-1.0, 1.0, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(SystemParams(1.0, 1.0, 1.0, 3, 0), std::invalid_argument);
  const auto p = SystemParams(2.0e15, 1.9e15, 2.0e11, 3).in_units_of_g();
  CHECK(p.g() == 1.0);
  CHECK(p.detuning() == doctest::Approx(500.0).epsilon(1e-9));
}

TEST_CASE("basis dimensions") {
  CHECK(build_basis(0, 1).size() == 2);
  CHECK(build_basis(8, 8).size() == 81);
  CHECK(build_basis(10, 50).size() == 561);
  CHECK_THROWS_AS(build_basis(200, 200), NumericalError);

  const auto b = build_basis(3, 2);
  CHECK(b[0] == BasisState{0, 0});
  CHECK(b[1] == BasisState{0, 1});
  CHECK(b[3] == BasisState{1, 0});
  CHECK(b.index_of(2, 1) == 7);
  CHECK(b.index_of(4, 0) == -1);

  const auto tb = build_truncated_basis(2, 5);
  CHECK(tb.size() == 6);
  CHECK(tb.index_of(1, 2) == -1);
}

TEST_CASE("Dicke coupling element") {
  const auto p = resonant(8);
  const auto b = build_basis(2, 8);
  const auto h = build_site_hamiltonian_rotating(p, b, 0.0, 0.0, 0.0);
  const auto i = static_cast<std::size_t>(b.index_of(1, 0));
  const auto j = static_cast<std::size_t>(b.index_of(0, 1));
  CHECK(h(i, j) == doctest::Approx(2.8284271247).epsilon(1e-9));
  CHECK(h(j, i) == h(i, j));
}

TEST_CASE("absolute and rotating chemical potential agree") {
  const auto p = SystemParams::from_detuning(1.0e4, 3.0, 1.0, 4);
  const auto b = build_basis(5, 4);
  const auto a = build_site_hamiltonian(p, b, 0.02, 1.0e4 - 1.3, 0.4);
  const auto r = build_site_hamiltonian_rotating(p, b, 0.02, -1.3, 0.4);
  CHECK((a.dense() - r.dense()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("lowest eigenpair matches the Jacobi oracle on random matrices") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    SymmetricMatrix m(6);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i; j < 6; ++j) m.set(i, j, dist(gen));
    const auto ref = oracle::jacobi(to_oracle(m));
    const auto got = lowest_eigenpair(m);
    CHECK(got.value == doctest::Approx(ref.values[0]).epsilon(1e-9));
    // Same eigenvector up to sign; library picks the largest component positive.
    double overlap = 0.0;
    for (std::size_t k = 0; k < 6; ++k) overlap += got.vector(k) * ref.vectors[0][k];
    CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-9));
    Eigen::Index arg;
    got.vector.cwiseAbs().maxCoeff(&arg);
    CHECK(got.vector(arg) > 0.0);
  }
}

TEST_CASE("site Hamiltonian ground energy matches the oracle") {
  const auto p = resonant(3, 1.5);
  const auto b = build_basis(6, 3);
  const auto h = build_site_hamiltonian_rotating(p, b, 0.05, -0.8, 0.3);
  CHECK(lowest_eigenvalue(h) ==
        doctest::Approx(oracle::jacobi(to_oracle(h)).values[0]).epsilon(1e-10));
}

TEST_CASE("spectrum is even in psi") {
  const auto p = resonant(3, 2.0);
  const auto b = build_basis(8, 3);
  const double plus = lowest_eigenvalue(build_site_hamiltonian_rotating(p, b, 0.1, -1.0, 0.35));
  const double minus = lowest_eigenvalue(build_site_hamiltonian_rotating(p, b, 0.1, -1.0, -0.35));
  CHECK(plus == doctest::Approx(minus).epsilon(1e-12));
}

TEST_CASE("manifold blocks") {
  SUBCASE("three-by-three block at resonance") {
    const auto blk = manifold_block(resonant(8), 2);
    REQUIRE(blk.dimension() == 3);
    CHECK(manifold_energy(resonant(8), 2) == doctest::Approx(-std::sqrt(30.0)).epsilon(1e-12));
  }
  SUBCASE("match the characteristic-polynomial oracle") {
    for (int big_n : {1, 2, 5}) {
      for (double delta : {-3.0, 0.0, 2.5}) {
        for (int n = 1; n <= 4; ++n) {
          const double ref = oracle::smallest_root(oracle::manifold(big_n, delta, n));
          CHECK(manifold_energy(resonant(big_n, delta), n) ==
                doctest::Approx(ref).epsilon(1e-8));
        }
      }
    }
  }
  SUBCASE("psi = 0 site spectrum decomposes into manifolds") {
    // The lowest eigenvalue with mu_rel = 0 over states with n + e = k
    // equals E(k); read it off the full basis by shifting mu.
    const auto p = resonant(4, 1.0);
    const auto b = build_truncated_basis(3, 4);
    const auto full = oracle::jacobi(to_oracle(build_site_hamiltonian_rotating(p, b, 0.0, 0.0, 0.0)));
    std::vector<double> want;
    for (int n = 0; n <= 3; ++n) {
      const auto sp = manifold_spectrum(p, n);
      for (Eigen::Index i = 0; i < sp.values.size(); ++i) want.push_back(sp.values(i));
    }
    std::sort(want.begin(), want.end());
    REQUIRE(want.size() == full.values.size());
    for (std::size_t i = 0; i < want.size(); ++i)
      CHECK(full.values[i] == doctest::Approx(want[i]).epsilon(1e-9));
  }
  SUBCASE("one-excitation closed form") {
    for (double delta : {-4.0, 0.0, 12.0}) {
      const double want = 0.5 * (delta - std::sqrt(delta * delta + 4.0 * 3.0));
      CHECK(manifold_energy(resonant(3, delta), 1) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("symmetric matrix guards") {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  CHECK_THROWS_AS(SymmetricMatrix{a}, std::invalid_argument);
  SymmetricMatrix m(3);
  m.add(0, 2, 1.5);
  m.add(2, 0, 0.5);
  CHECK(m(0, 2) == 2.0);
  CHECK(m(2, 0) == 2.0);
}
