#pragma once

// Quenched site disorder in (w_ph, g_k, N): Monte-Carlo statistics of the
// first-polariton energy and the on-site interaction, the lobe-survival
// criterion 2 dE + (2n - 1) dU >= U, and the disorder-space surface on which
// the Bose-glass / Mott-insulator transition stops being observable.
//
// Energies are in the units of the base SystemParams (normally g = 1).

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "polariton/meanfield.hpp"
#include "polariton/model.hpp"
#include "polariton/observables.hpp"

namespace polariton {

enum class NumberDistribution {
  kAuto,        // Poisson when n_sigma^2 >= n_mean, sub-Poisson otherwise
  kPoisson,
  kSubPoisson,  // discrete Gaussian matched to (n_mean, n_sigma)
};

enum class FluctuationStatistic { kStdDev, kQuantile };

enum class SiteModel { kExact, kCollective };

struct DisorderSpec {
  double sigma_omega = 0.0;  // std-dev of w_ph
  double delta_g = 0.0;      // g_k uniform on [g (1 - delta_g), g]
  double n_mean = 3.0;
  double n_sigma = 0.0;
  NumberDistribution n_dist = NumberDistribution::kAuto;
  std::size_t sample_count = 10000;
  std::uint64_t seed = 1;
  FluctuationStatistic statistic = FluctuationStatistic::kStdDev;
  double quantile_q = 0.005;

  void validate() const;  // throws std::invalid_argument
};

// Tabulated distribution of the impurity count, sampled by inversion so one
// uniform draw maps monotonically onto N.
class ImpurityCountDistribution {
 public:
  explicit ImpurityCountDistribution(const DisorderSpec& spec);

  int sample(double u) const;
  double mean() const;
  double variance() const;
  double probability(int k) const;
  bool poisson() const { return poisson_; }

 private:
  std::vector<double> pmf_;
  std::vector<double> cdf_;
  bool poisson_ = false;
};

struct SiteSample {
  double omega_ph;
  std::vector<double> g_list;
  int n_site;
};

// Deterministic in (spec.seed, stream_index). Draw order within the stream:
// N, then w_ph (two draws), then one draw per g_k.
SiteSample sample_site(const DisorderSpec& spec, const SystemParams& base,
                       std::uint64_t stream_index);
SiteSample sample_site(const DisorderSpec& spec, const SystemParams& base,
                       const ImpurityCountDistribution& counts,
                       std::uint64_t stream_index);

struct SiteEnergies {
  double e1;  // lowest one-excitation energy, relative to w_ex
  double e2;  // lowest two-excitation energy, relative to 2 w_ex
  double u;   // e2 - 2 e1
};

inline constexpr std::size_t kSiteDimensionBudget = 5100;

// Exact diagonalization with individual couplings in the one-excitation
// (1 + N states) and two-excitation (1 + N + N(N-1)/2 states) sectors.
SiteEnergies site_energies_exact(const SiteSample& sample, double omega_ex,
                                 std::size_t dimension_budget = kSiteDimensionBudget);

// Homogeneous model with g_eff = sqrt(sum g_k^2 / N). Exact for e1.
SiteEnergies site_energies_collective(const SiteSample& sample, double omega_ex);

struct DisorderStats {
  double delta_e = 0.0;  // according to `statistic`
  double delta_u = 0.0;
  double std_e = 0.0;
  double std_u = 0.0;
  double quantile_e = 0.0;  // central-quantile half-widths
  double quantile_u = 0.0;
  double e_mean = 0.0;
  double u_mean = 0.0;
  std::size_t sample_count = 0;
  std::size_t valid_count = 0;  // samples with n_site >= 1
  double empty_fraction = 0.0;
  double quantile_q = 0.0;
  FluctuationStatistic statistic = FluctuationStatistic::kStdDev;
};

struct DisorderOptions {
  SiteModel site_model = SiteModel::kExact;
  unsigned workers = 1;
};

DisorderStats disorder_stats(const DisorderSpec& spec, const SystemParams& base,
                             const DisorderOptions& options = {});
DisorderStats disorder_stats(const DisorderSpec& spec, const SystemParams& base,
                             const ImpurityCountDistribution& counts,
                             const DisorderOptions& options = {});

struct LobeSurvival {
  bool survives;
  double effective_width;
};

LobeSurvival lobe_survival(double u, double delta_e, double delta_u, int n);

struct CleanLobe {
  int n;
  double u;    // lobe width at t = 0
  double t_c;
  double mu_tip;
};

CleanLobe clean_lobe(const SystemParams& params, int n,
                     const SolverOptions& options = {});

// Linear lobe-shrinkage model: t_c * effective_width / U, zero when the lobe
// is destroyed.
double bg_mi_tunneling(const CleanLobe& clean, const DisorderStats& stats);
double bg_mi_tunneling(const SystemParams& params, const DisorderStats& stats,
                       int n, const SolverOptions& options = {});

enum class TunnelingRate { kPerSite, kPerBond };

struct IsoSurfaceConfig {
  std::vector<double> sigma_omega;  // std-dev of w_ph, units of g
  std::vector<double> g_sigma;      // std-dev of g_k, units of g
  std::vector<double> n_sigma;      // std-dev of N, counts
  double n_mean = 3.0;
  NumberDistribution n_dist = NumberDistribution::kAuto;
  std::size_t sample_count = 10000;
  std::uint64_t seed = 1;
  FluctuationStatistic statistic = FluctuationStatistic::kStdDev;
  double quantile_q = 0.005;
  SiteModel site_model = SiteModel::kExact;
  int filling = 1;
  double safety_factor = 10.0;
  TunnelingRate rate = TunnelingRate::kPerSite;
  int refine_steps = 16;
  SolverOptions solver{};
};

// Full width of a uniform distribution with the given standard deviation.
inline double uniform_width_from_sigma(double g_sigma) { return g_sigma * 3.4641016151377544; }

struct IsoPoint {
  std::array<std::size_t, 3> index;
  std::array<double, 3> coords;  // (sigma_omega, g_sigma, n_sigma)
  DisorderStats stats;
  double t_c_dis;  // units of g
  double marker;   // 1/s
};

struct Intercept {
  bool observable_at_zero = false;  // marker >= 0 with no disorder on any axis
  bool bracketed = false;           // crossing lies inside the axis range
  double value = 0.0;               // largest width with marker >= 0
};

struct IsoSurfaceResult {
  CleanLobe clean;
  PolaritonComposition composition;
  double loss_rate = 0.0;   // 1/s
  double clean_marker = 0.0;
  std::vector<IsoPoint> points;  // index = (i * n_g + j) * n_n + k
  std::vector<std::array<double, 3>> boundary;
  std::array<Intercept, 3> intercepts;
  bool boundary_found = false;
};

// `base` is in units of g with N = round(n_mean); `g_physical` (rad/s) and
// `loss` convert the marker f = |c_ph|^2 rate(t_c_dis) - safety * Gamma to 1/s.
IsoSurfaceResult iso_surface(const IsoSurfaceConfig& config, const SystemParams& base,
                             double g_physical, const LossParams& loss,
                             unsigned workers = 1);

}  // namespace polariton
