#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "polariton/disorder.hpp"
#include "polariton/error.hpp"

using namespace polariton;

namespace {

SystemParams gunits(int big_n, double delta = 0.0) {
  return SystemParams::from_detuning(1000.0, delta, 1.0, big_n);
}

SiteSample homogeneous(int big_n, double delta, double g = 1.0) {
  return {1000.0 + delta, std::vector<double>(static_cast<std::size_t>(big_n), g), big_n};
}

DisorderSpec quiet(double n_mean = 3.0) {
  DisorderSpec s;
  s.n_mean = n_mean;
  s.sample_count = 2000;
  return s;
}

}  // namespace

TEST_CASE("spec validation") {
  auto s = quiet();
  s.delta_g = 1.5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = quiet();
  s.n_dist = NumberDistribution::kSubPoisson;
  s.n_sigma = 2.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = quiet();
  s.sample_count = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("impurity count distributions") {
  SUBCASE("Poisson") {
    auto s = quiet(3.0);
    s.n_sigma = 2.0;  // sigma^2 >= mean selects Poisson
    ImpurityCountDistribution d(s);
    CHECK(d.poisson());
    CHECK(d.mean() == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(d.variance() == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(d.probability(0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
    CHECK(d.probability(2) == doctest::Approx(4.5 * std::exp(-3.0)).epsilon(1e-12));
  }
  SUBCASE("sub-Poisson matches both moments") {
    for (double sigma : {0.1, 0.3, 0.54, 1.0, 1.7}) {
      auto s = quiet(3.0);
      s.n_sigma = sigma;
      ImpurityCountDistribution d(s);
      CHECK_FALSE(d.poisson());
      CHECK(d.mean() == doctest::Approx(3.0).epsilon(1e-8));
      CHECK(d.variance() == doctest::Approx(sigma * sigma).epsilon(1e-6));
    }
  }
  SUBCASE("zero width is a point mass") {
    ImpurityCountDistribution d(quiet(3.0));
    CHECK(d.probability(3) == 1.0);
    for (double u : {1e-9, 0.3, 0.999999}) CHECK(d.sample(u) == 3);
  }
  SUBCASE("inversion is monotone") {
    auto s = quiet(3.0);
    s.n_sigma = 1.0;
    ImpurityCountDistribution d(s);
    int last = 0;
    for (int i = 1; i < 1000; ++i) {
      const int k = d.sample(i / 1000.0);
      CHECK(k >= last);
      last = k;
    }
  }
}

TEST_CASE("site sampling") {
  const auto base = gunits(3, 12.0);
  auto s = quiet(3.0);
  s.delta_g = 0.4;
  s.n_sigma = 1.0;
  s.sigma_omega = 0.7;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto x = sample_site(s, base, i);
    REQUIRE(x.g_list.size() == static_cast<std::size_t>(x.n_site));
    for (double gk : x.g_list) {
      CHECK(gk <= 1.0);
      CHECK(gk >= 0.6);
    }
    const auto y = sample_site(s, base, i);
    CHECK(x.omega_ph == y.omega_ph);
    CHECK(x.g_list == y.g_list);
  }
  // N is drawn first and the couplings last, so N and g_k do not depend on
  // sigma_omega.
  auto t = s;
  t.sigma_omega = 0.0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto x = sample_site(s, base, i);
    const auto y = sample_site(t, base, i);
    CHECK(x.n_site == y.n_site);
    CHECK(x.g_list == y.g_list);
    CHECK(y.omega_ph == base.omega_ph());
  }
}

TEST_CASE("exact site energies reduce to the homogeneous ladder") {
  for (int big_n = 1; big_n <= 8; ++big_n) {
    for (double delta : {-5.0, 0.0, 12.0}) {
      const auto e = site_energies_exact(homogeneous(big_n, delta), 1000.0);
      const auto p = gunits(big_n, delta);
      CHECK(e.e1 == doctest::Approx(manifold_energy(p, 1)).epsilon(1e-10));
      CHECK(e.e2 == doctest::Approx(manifold_energy(p, 2)).epsilon(1e-10));
      CHECK(e.u == doctest::Approx(interaction_energy(p)).epsilon(1e-9));
      const auto c = site_energies_collective(homogeneous(big_n, delta), 1000.0);
      CHECK(c.u == doctest::Approx(e.u).epsilon(1e-9));
    }
  }
}

TEST_CASE("one-excitation energy depends only on the bright-mode coupling") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> dist(0.2, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int big_n = 1 + trial % 7;
    SiteSample s{1000.0 + 3.0 * dist(gen), {}, big_n};
    double sum = 0.0;
    for (int k = 0; k < big_n; ++k) {
      s.g_list.push_back(dist(gen));
      sum += s.g_list.back() * s.g_list.back();
    }
    const double delta = s.omega_ph - 1000.0;
    const double closed = 0.5 * (delta - std::sqrt(delta * delta + 4.0 * sum));
    const auto exact = site_energies_exact(s, 1000.0);
    const auto coll = site_energies_collective(s, 1000.0);
    CHECK(exact.e1 == doctest::Approx(closed).epsilon(1e-10));
    CHECK(coll.e1 == doctest::Approx(exact.e1).epsilon(1e-10));
  }
}

TEST_CASE("two-excitation sector against the oracle") {
  // N = 2 with unequal couplings: 1 + 2 + 1 states built by hand.
  const double g1 = 0.7, g2 = 1.1, delta = 1.3;
  oracle::Matrix h = oracle::zeros(4);
  // |2 ph>, |1 ph, 1>, |1 ph, 2>, |flip 1, flip 2>
  h[0][0] = 2 * delta;
  h[1][1] = h[2][2] = delta;
  h[0][1] = h[1][0] = std::sqrt(2.0) * g1;
  h[0][2] = h[2][0] = std::sqrt(2.0) * g2;
  h[1][3] = h[3][1] = g2;
  h[2][3] = h[3][2] = g1;
  const auto e = site_energies_exact({1000.0 + delta, {g1, g2}, 2}, 1000.0);
  CHECK(e.e2 == doctest::Approx(oracle::jacobi(h).values[0]).epsilon(1e-10));

  // The collective model is an approximation for e2; stays close for a
  // moderate coupling spread.
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> dist(0.7, 1.0);
  SiteSample s{1000.0 + 2.0, {}, 6};
  for (int k = 0; k < 6; ++k) s.g_list.push_back(dist(gen));
  const auto exact = site_energies_exact(s, 1000.0);
  const auto coll = site_energies_collective(s, 1000.0);
  CHECK(std::abs(coll.u - exact.u) < 0.05 * exact.u);
  CHECK_THROWS_AS(site_energies_exact(homogeneous(120, 0.0), 1000.0), NumericalError);
}

TEST_CASE("zero-width disorder reproduces the clean site") {
  const auto base = gunits(3, 12.0);
  const auto st = disorder_stats(quiet(3.0), base);
  CHECK(st.delta_e == 0.0);
  CHECK(st.delta_u == 0.0);
  CHECK(st.std_e == 0.0);
  CHECK(st.quantile_u == 0.0);
  CHECK(st.u_mean == doctest::Approx(interaction_energy(base)).epsilon(1e-10));
  CHECK(st.empty_fraction == 0.0);

  const auto clean = clean_lobe(base, 1);
  CHECK(bg_mi_tunneling(clean, st) == doctest::Approx(clean.t_c).epsilon(1e-9));
  CHECK(clean.u == doctest::Approx(interaction_energy(base)).epsilon(1e-12));
}

TEST_CASE("photon-frequency disorder to first order") {
  const auto base = gunits(3, 12.0);
  const double sigma = 0.02;
  auto s = quiet(3.0);
  s.sigma_omega = sigma;
  s.sample_count = 20000;
  const auto st = disorder_stats(s, base);
  // dE1/dDelta is the photon fraction; dU/dDelta by central differences.
  const double h = 1e-4;
  const double de = (manifold_energy(gunits(3, 12.0 + h), 1) -
                     manifold_energy(gunits(3, 12.0 - h), 1)) / (2 * h);
  const double du = (interaction_energy(gunits(3, 12.0 + h)) -
                     interaction_energy(gunits(3, 12.0 - h))) / (2 * h);
  CHECK(de == doctest::Approx(polariton_fractions(base).c_ph_sq).epsilon(1e-6));
  CHECK(st.std_e == doctest::Approx(de * sigma).epsilon(0.03));
  CHECK(st.std_u == doctest::Approx(std::abs(du) * sigma).epsilon(0.03));
  CHECK(st.delta_e == st.std_e);
}

TEST_CASE("Monte-Carlo estimates are stable across seeds") {
  const auto base = gunits(3, 12.0);
  auto s = quiet(3.0);
  // No spread in N here: rare N = 1 sites have U close to the detuning and
  // make the U spread heavy-tailed.
  s.delta_g = 0.3;
  s.sigma_omega = 0.5;
  s.sample_count = 10000;
  const auto a = disorder_stats(s, base);
  s.seed = 99;
  const auto b = disorder_stats(s, base);
  CHECK(a.std_e == doctest::Approx(b.std_e).epsilon(0.02));
  CHECK(a.std_u == doctest::Approx(b.std_u).epsilon(0.02));
  CHECK(a.e_mean == doctest::Approx(b.e_mean).epsilon(0.02));
}

TEST_CASE("statistics do not depend on the worker count") {
  const auto base = gunits(3, 12.0);
  auto s = quiet(3.0);
  s.delta_g = 0.3;
  s.n_sigma = 0.8;
  s.sigma_omega = 0.1;
  s.statistic = FluctuationStatistic::kQuantile;
  const auto a = disorder_stats(s, base, {SiteModel::kExact, 1});
  const auto b = disorder_stats(s, base, {SiteModel::kExact, 4});
  CHECK(a.delta_e == b.delta_e);
  CHECK(a.delta_u == b.delta_u);
  CHECK(a.std_e == b.std_e);
  CHECK(a.e_mean == b.e_mean);
  CHECK(a.delta_e == a.quantile_e);
}

TEST_CASE("empty sites are excluded") {
  auto s = quiet(0.5);
  s.n_sigma = 1.0;  // Poisson with mean 0.5
  const auto st = disorder_stats(s, gunits(1, 12.0));
  CHECK(st.empty_fraction == doctest::Approx(std::exp(-0.5)).epsilon(0.05));
  CHECK(st.valid_count + static_cast<std::size_t>(std::lround(st.empty_fraction * 2000)) == 2000);
}

TEST_CASE("lobe survival arithmetic") {
  CHECK_FALSE(lobe_survival(1.0, 0.25, 0.5, 1).survives);
  CHECK(lobe_survival(1.0, 0.25, 0.4999, 1).survives);
  CHECK_FALSE(lobe_survival(1.0, 0.125, 0.25, 2).survives);
  CHECK(lobe_survival(1.0, 0.125, 0.2499, 2).survives);
  CHECK(lobe_survival(1.0, 0.1, 0.1, 1).effective_width == doctest::Approx(0.7));
  CHECK(lobe_survival(1.0, 2.0, 0.0, 1).effective_width == 0.0);
  CHECK_THROWS_AS(lobe_survival(0.0, 0.1, 0.1, 1), std::invalid_argument);
}

TEST_CASE("Bose-glass boundary scales linearly with the surviving width") {
  const CleanLobe clean{1, 0.2, 0.05, -1.0};
  DisorderStats st;
  for (double de : {0.0, 0.01, 0.02, 0.05, 0.09}) {
    st.delta_e = de;
    st.delta_u = 0.0;
    CHECK(bg_mi_tunneling(clean, st) == doctest::Approx(0.05 * (0.2 - 2 * de) / 0.2));
  }
  st.delta_e = 0.1;
  CHECK(bg_mi_tunneling(clean, st) == 0.0);
}

TEST_CASE("iso-surface on a coarse grid") {
  const auto base = gunits(3, 12.0);
  const double g_phys = coupling_from_ghz(33.3, FrequencyConvention::kOrdinary);
  const double w_ex = angular_frequency_from_wavelength(817.0) / g_phys;
  const auto params = SystemParams::from_detuning(w_ex, 12.0, 1.0, 3);
  IsoSurfaceConfig cfg;
  cfg.sigma_omega = {0.0, 1.0, 3.0};
  cfg.g_sigma = {0.0, 0.15, 0.28};
  cfg.n_sigma = {0.0, 0.4, 1.0};
  cfg.sample_count = 400;
  cfg.refine_steps = 8;
  const LossParams loss;
  const auto a = iso_surface(cfg, params, g_phys, loss, 1);
  const auto b = iso_surface(cfg, params, g_phys, loss, 3);
  REQUIRE(a.points.size() == 27);
  CHECK(a.clean_marker > 0.0);
  CHECK(a.points[0].marker == doctest::Approx(a.clean_marker).epsilon(1e-9));
  CHECK(a.boundary_found);
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].marker == b.points[i].marker);
  for (int axis = 0; axis < 3; ++axis) {
    CHECK(a.intercepts[axis].observable_at_zero);
    CHECK(a.intercepts[axis].value == b.intercepts[axis].value);
  }
  // Marker decreases away from the clean corner along each axis.
  CHECK(a.points[(2 * 3 + 0) * 3 + 0].marker < a.clean_marker);
  CHECK(a.points[(0 * 3 + 2) * 3 + 0].marker < a.clean_marker);
  CHECK(a.points[(0 * 3 + 0) * 3 + 2].marker < a.clean_marker);
  (void)base;
}
