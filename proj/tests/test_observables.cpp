#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "polariton/meanfield.hpp"
#include "polariton/observables.hpp"

using namespace polariton;

namespace {

constexpr double kWavelength = 817.0;

SystemParams gunits(int big_n, double delta = 0.0) {
  return SystemParams::from_detuning(1000.0, delta, 1.0, big_n);
}

// Physical system: w_ex at 817 nm, g = 2 pi x 33.3 GHz.
SystemParams physical(int big_n, double delta_in_g) {
  const double g = coupling_from_ghz(33.3, FrequencyConvention::kOrdinary);
  const double w_ex = angular_frequency_from_wavelength(kWavelength);
  return SystemParams::from_detuning(w_ex, delta_in_g * g, g, big_n);
}

}  // namespace

TEST_CASE("unit conversions") {
  CHECK(angular_frequency_from_wavelength(817.0) == doctest::Approx(2.30557e15).epsilon(1e-5));
  CHECK(coupling_from_ghz(33.3, FrequencyConvention::kOrdinary) ==
        doctest::Approx(2.0923e11).epsilon(1e-4));
  CHECK(coupling_from_ghz(33.3, FrequencyConvention::kAngular) == doctest::Approx(3.33e10));
}

TEST_CASE("interaction energy") {
  CHECK(interaction_energy(gunits(1)) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(interaction_energy(gunits(8)) == doctest::Approx(0.179629).epsilon(1e-5));
  CHECK(interaction_energy(gunits(3)) == doctest::Approx(0.301824).epsilon(1e-5));
  for (int big_n = 1; big_n <= 50; ++big_n) {
    const double want = oracle::smallest_root(oracle::manifold(big_n, 0.0, 2)) -
                        2.0 * oracle::smallest_root(oracle::manifold(big_n, 0.0, 1));
    CHECK(interaction_energy(gunits(big_n)) == doctest::Approx(want).epsilon(1e-9));
    CHECK(interaction_energy(gunits(big_n)) ==
          doctest::Approx(oracle::u_closed_form(big_n)).epsilon(1e-9));
  }
}

TEST_CASE("interaction energy monotonicity and sign") {
  double last = 1e9;
  for (int big_n = 1; big_n <= 50; ++big_n) {
    const double u = interaction_energy(gunits(big_n));
    CHECK(u < last);
    last = u;
    for (double delta = -12.0; delta <= 12.0; delta += 3.0)
      CHECK(interaction_energy(gunits(big_n, delta)) > 0.0);
  }
  // U rises with small blue detuning, peaks (near 2 g at N = 3) and then
  // falls back toward the exciton-like limit.
  for (int big_n : {3, 8}) {
    last = 0.0;
    for (double delta = 0.0; delta <= 1.0; delta += 0.25) {
      const double u = interaction_energy(gunits(big_n, delta));
      CHECK(u > last);
      last = u;
    }
    for (double delta = -12.0; delta <= 12.0; delta += 2.0) {
      const double want = oracle::smallest_root(oracle::manifold(big_n, delta, 2)) -
                          2.0 * oracle::smallest_root(oracle::manifold(big_n, delta, 1));
      CHECK(interaction_energy(gunits(big_n, delta)) == doctest::Approx(want).epsilon(1e-8));
    }
  }
  CHECK(interaction_energy(gunits(3, 12.0)) == doctest::Approx(0.158991).epsilon(1e-5));
  // U is unit-agnostic: scaling every energy scales U.
  const auto p = physical(3, 12.0);
  CHECK(interaction_energy(p) / p.g() ==
        doctest::Approx(interaction_energy(p.in_units_of_g())).epsilon(1e-6));
}

TEST_CASE("first lobe width equals U") {
  for (int big_n : {1, 3, 8, 20})
    CHECK(lobe_width(gunits(big_n), 1) ==
          doctest::Approx(interaction_energy(gunits(big_n))).epsilon(1e-12));
}

TEST_CASE("polariton fractions") {
  const auto res = polariton_fractions(gunits(8));
  CHECK(res.c_ph_sq == doctest::Approx(0.5));
  CHECK(res.c_ex_sq == doctest::Approx(0.5));
  const auto blue = polariton_fractions(gunits(3, 12.0));
  CHECK(blue.c_ph_sq == doctest::Approx(0.5 * (1.0 - 12.0 / std::sqrt(156.0))).epsilon(1e-12));
  CHECK(blue.c_ph_sq == doctest::Approx(0.019616).epsilon(1e-4));
  CHECK(polariton_fractions(gunits(3, 1e6)).c_ph_sq < 1e-11);
  for (double delta : {-7.0, 0.3, 12.0}) {
    const auto c = polariton_fractions(gunits(5, delta));
    CHECK(c.c_ph_sq + c.c_ex_sq == doctest::Approx(1.0).epsilon(1e-12));
    // Photon weight of the lowest one-excitation eigenvector.
    const auto sp = manifold_spectrum(gunits(5, delta), 1);
    CHECK(c.c_ph_sq == doctest::Approx(sp.vectors(0, 0) * sp.vectors(0, 0)).epsilon(1e-10));
  }
}

TEST_CASE("loss rate") {
  const LossParams loss;  // tau 1 ns, F 0.2, Q 1e6
  // Far blue detuning: pure exciton.
  CHECK(polariton_loss_rate(physical(3, 1e7), loss) == doctest::Approx(2.0e8).epsilon(1e-4));
  // Far red detuning: pure photon at w_ph ~ 2.3056e15.
  const auto red = physical(3, -1e3);
  CHECK(polariton_loss_rate(red, loss) ==
        doctest::Approx(red.omega_ph() / 1e6).epsilon(1e-5));
  CHECK(polariton_loss_rate(physical(8, 0.0), loss) == doctest::Approx(1.2528e9).epsilon(1e-4));
  LossParams bad;
  bad.tau_e = 0.0;
  CHECK_THROWS_AS(polariton_loss_rate(red, bad), std::invalid_argument);
}

TEST_CASE("required Q") {
  const LossParams loss;
  SUBCASE("pure photon limit") {
    const auto red = physical(3, -1e3);
    const double rate = 1e10;
    const auto q = required_q(red, loss, rate);
    REQUIRE(q.reachable);
    const double c = polariton_fractions(red).c_ph_sq;
    CHECK(q.value == doctest::Approx(c * red.omega_ph() /
                                     (c * rate - (1.0 - c) * loss.purcell_f / loss.tau_e))
                         .epsilon(1e-12));
    CHECK(q.value == doctest::Approx(red.omega_ph() / rate).epsilon(1e-5));
  }
  SUBCASE("unreachable") {
    const auto q = required_q(physical(3, 12.0), loss, 1e3);
    CHECK_FALSE(q.reachable);
    CHECK(std::isinf(q.value));
  }
  SUBCASE("monotone in rate and eta") {
    const auto p = physical(3, 0.0);
    double last = std::numeric_limits<double>::infinity();
    for (double rate : {1e9, 3e9, 1e10, 1e11}) {
      const auto q = required_q(p, loss, rate);
      REQUIRE(q.reachable);
      CHECK(q.value < last);
      last = q.value;
    }
    last = 0.0;
    for (double eta : {1.0, 2.0, 5.0, 10.0}) {
      LossParams l;
      l.eta = eta;
      const auto q = required_q(p, l, 1e11);
      REQUIRE(q.reachable);
      CHECK(q.value > last);
      last = q.value;
    }
  }
  SUBCASE("solver-derived tunneling") {
    const auto p = physical(3, 12.0);
    const double t_c = critical_tunneling(p.in_units_of_g(), 1).t_c * p.g();
    const auto q = required_q(p, loss, t_c);
    REQUIRE(q.reachable);
    CHECK(q.value > 1e4);
    CHECK(q.value < 1e6);
  }
}

TEST_CASE("ratio to the Bose-Hubbard limit") {
  // With the Bose-Hubbard tip substituted for the solver the ratio is exact.
  const auto p = gunits(8);
  const double u = interaction_energy(p);
  const double c = polariton_fractions(p).c_ph_sq;
  const double t_tip = bhm_lobe_tip(u, 4, 1).t_c / c;
  CHECK(bhm_ratio(p, t_tip) == doctest::Approx(4.0 * (3.0 + 2.0 * std::sqrt(2.0))).epsilon(1e-9));
  // Unit-agnostic: physical and g-scaled parameters give the same ratio.
  const double r1 = bhm_ratio(gunits(3));
  const double r2 = bhm_ratio(physical(3, 0.0));
  CHECK(r1 == doctest::Approx(r2).epsilon(1e-6));
  CHECK(r1 > 4.0 * (3.0 + 2.0 * std::sqrt(2.0)));
}

TEST_CASE("doping density") {
  CHECK(mode_volume(817.0, 3.6) == doctest::Approx(std::pow(817.0 / 3.6, 3)).epsilon(1e-14));
  CHECK(doping_density(8, 817.0, 3.6) == doctest::Approx(6.84e14).epsilon(1e-3));
  CHECK(doping_density(1, 817.0, 3.6) == doctest::Approx(8.55e13).epsilon(1e-3));
  CHECK(doping_density(0, 817.0, 3.6) == 0.0);
  for (double n : {1.0, 3.0, 8.0, 50.0})
    CHECK(doping_density(n, 817.0, 3.6) * mode_volume(817.0, 3.6) * 1e-21 ==
          doctest::Approx(n).epsilon(1e-14));
}
