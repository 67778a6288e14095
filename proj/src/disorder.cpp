#include "polariton/disorder.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "polariton/error.hpp"
#include "polariton/parallel.hpp"
#include "polariton/random.hpp"

namespace polariton {

void DisorderSpec::validate() const {
  if (!(sigma_omega >= 0.0) || !std::isfinite(sigma_omega))
    throw std::invalid_argument("sigma_omega must be finite and >= 0");
  if (!(delta_g >= 0.0 && delta_g <= 1.0))
    throw std::invalid_argument("delta_g must lie in [0, 1] (units of g)");
  if (!(n_mean > 0.0) || !std::isfinite(n_mean))
    throw std::invalid_argument("n_mean must be positive");
  if (!(n_sigma >= 0.0) || !std::isfinite(n_sigma))
    throw std::invalid_argument("n_sigma must be finite and >= 0");
  if (n_dist == NumberDistribution::kSubPoisson && n_sigma * n_sigma > n_mean)
    throw std::invalid_argument("sub-Poisson N requires n_sigma^2 <= n_mean");
  if (sample_count == 0) throw std::invalid_argument("sample_count must be positive");
  if (!(quantile_q > 0.0 && quantile_q < 0.5))
    throw std::invalid_argument("quantile_q must lie in (0, 0.5)");
}

namespace {

struct Moments {
  double mean;
  double variance;
};

Moments moments_of(const std::vector<double>& pmf) {
  double m = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) m += k * pmf[k];
  double v = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) v += (k - m) * (k - m) * pmf[k];
  return {m, v};
}

std::vector<double> discrete_gaussian(double centre, double width, std::size_t size) {
  std::vector<double> logw(size);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < size; ++k) {
    const double d = (static_cast<double>(k) - centre) / width;
    logw[k] = -0.5 * d * d;
    top = std::max(top, logw[k]);
  }
  std::vector<double> pmf(size);
  double total = 0.0;
  for (std::size_t k = 0; k < size; ++k) total += pmf[k] = std::exp(logw[k] - top);
  for (auto& p : pmf) p /= total;
  return pmf;
}

// Discrete Gaussian on k >= 0 whose mean and variance equal the targets.
std::vector<double> sub_poisson_pmf(double mean, double sigma) {
  const double frac = mean - std::floor(mean);
  const double variance_floor = frac * (1.0 - frac);
  const auto size = static_cast<std::size_t>(std::ceil(mean + 12.0 * (sigma + 1.0) + 12.0));
  if (sigma * sigma <= variance_floor + 1e-14) {
    // Narrowest distribution with this mean: the two neighbouring integers.
    std::vector<double> pmf(size, 0.0);
    const auto lo = static_cast<std::size_t>(std::floor(mean));
    pmf[lo] = 1.0 - frac;
    if (frac > 0.0) pmf[lo + 1] = frac;
    return pmf;
  }
  auto fitted = [&](double width) {
    double lo = -static_cast<double>(size);
    double hi = 2.0 * static_cast<double>(size);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      const double c = 0.5 * (lo + hi);
      (moments_of(discrete_gaussian(c, width, size)).mean < mean ? lo : hi) = c;
    }
    return discrete_gaussian(0.5 * (lo + hi), width, size);
  };
  double lo = 1e-3;
  double hi = 10.0 * (sigma + 1.0);
  const double target = sigma * sigma;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double w = 0.5 * (lo + hi);
    (moments_of(fitted(w)).variance < target ? lo : hi) = w;
  }
  return fitted(0.5 * (lo + hi));
}

std::vector<double> poisson_pmf(double lambda) {
  const auto size =
      static_cast<std::size_t>(std::ceil(lambda + 12.0 * std::sqrt(lambda) + 20.0));
  std::vector<double> pmf(size);
  for (std::size_t k = 0; k < size; ++k)
    pmf[k] = std::exp(-lambda + static_cast<double>(k) * std::log(lambda) -
                      std::lgamma(static_cast<double>(k) + 1.0));
  return pmf;
}

}  // namespace

ImpurityCountDistribution::ImpurityCountDistribution(const DisorderSpec& spec) {
  spec.validate();
  poisson_ = spec.n_dist == NumberDistribution::kPoisson ||
             (spec.n_dist == NumberDistribution::kAuto &&
              spec.n_sigma * spec.n_sigma >= spec.n_mean);
  pmf_ = poisson_ ? poisson_pmf(spec.n_mean) : sub_poisson_pmf(spec.n_mean, spec.n_sigma);
  cdf_.resize(pmf_.size());
  double running = 0.0;
  for (std::size_t k = 0; k < pmf_.size(); ++k) cdf_[k] = running += pmf_[k];
  cdf_.back() = 1.0;
}

int ImpurityCountDistribution::sample(double u) const {
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                                   static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
}

double ImpurityCountDistribution::mean() const { return moments_of(pmf_).mean; }
double ImpurityCountDistribution::variance() const { return moments_of(pmf_).variance; }

double ImpurityCountDistribution::probability(int k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= pmf_.size()) return 0.0;
  return pmf_[static_cast<std::size_t>(k)];
}

SiteSample sample_site(const DisorderSpec& spec, const SystemParams& base,
                       const ImpurityCountDistribution& counts,
                       std::uint64_t stream_index) {
  CounterStream stream(spec.seed, stream_index);
  SiteSample s;
  s.n_site = counts.sample(stream.next_open01());
  s.omega_ph = base.omega_ph() + spec.sigma_omega * stream.next_normal();
  s.g_list.resize(static_cast<std::size_t>(s.n_site));
  for (auto& gk : s.g_list) gk = base.g() * (1.0 - spec.delta_g * stream.next_open01());
  return s;
}

SiteSample sample_site(const DisorderSpec& spec, const SystemParams& base,
                       std::uint64_t stream_index) {
  return sample_site(spec, base, ImpurityCountDistribution(spec), stream_index);
}

namespace {

double lowest(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError(fmt::format("site eigensolver failed on a {}x{} block",
                                     h.rows(), h.cols()));
  return solver.eigenvalues()(0);
}

void check_sample(const SiteSample& sample) {
  if (sample.n_site < 1)
    throw std::invalid_argument("site energies need at least one impurity");
  if (sample.g_list.size() != static_cast<std::size_t>(sample.n_site))
    throw std::invalid_argument("coupling list length differs from n_site");
}

}  // namespace

SiteEnergies site_energies_exact(const SiteSample& sample, double omega_ex,
                                 std::size_t dimension_budget) {
  check_sample(sample);
  const auto n = static_cast<Eigen::Index>(sample.n_site);
  const Eigen::Index pairs = n * (n - 1) / 2;
  const Eigen::Index dim2 = 1 + n + pairs;
  if (static_cast<std::size_t>(dim2) > dimension_budget)
    throw NumericalError(fmt::format(
        "two-excitation sector for N={} has {} states, over the budget of {}",
        sample.n_site, dim2, dimension_budget));
  const double delta = sample.omega_ph - omega_ex;
  const auto& g = sample.g_list;

  // One photon, or one flipped impurity i (index 1 + i).
  Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(n + 1, n + 1);
  h1(0, 0) = delta;
  for (Eigen::Index i = 0; i < n; ++i) h1(0, 1 + i) = h1(1 + i, 0) = g[i];

  // Two photons; one photon + flip i; flips {i, j}.
  Eigen::MatrixXd h2 = Eigen::MatrixXd::Zero(dim2, dim2);
  h2(0, 0) = 2.0 * delta;
  const double root2 = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    h2(1 + i, 1 + i) = delta;
    h2(0, 1 + i) = h2(1 + i, 0) = root2 * g[i];
  }
  Eigen::Index p = 1 + n;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j, ++p) {
      h2(1 + i, p) = h2(p, 1 + i) = g[j];
      h2(1 + j, p) = h2(p, 1 + j) = g[i];
    }
  }
  const double e1 = lowest(h1);
  const double e2 = lowest(h2);
  return {e1, e2, e2 - 2.0 * e1};
}

SiteEnergies site_energies_collective(const SiteSample& sample, double omega_ex) {
  check_sample(sample);
  double sum = 0.0;
  for (double gk : sample.g_list) sum += gk * gk;
  const double g_eff = std::sqrt(sum / sample.n_site);
  const SystemParams homogeneous(sample.omega_ph, omega_ex, g_eff, sample.n_site, 1);
  const double e1 = manifold_energy(homogeneous, 1);
  const double e2 = manifold_energy(homogeneous, 2);
  return {e1, e2, e2 - 2.0 * e1};
}

namespace {

double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double std_of(const std::vector<double>& x, double mean) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*lo == *hi) return 0.0;
  double s = 0.0;
  for (double v : x) s += (v - mean) * (v - mean);
  return std::sqrt(s / static_cast<double>(x.size()));
}

// Linear-interpolation quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

double quantile_half_width(std::vector<double> x, double q) {
  std::sort(x.begin(), x.end());
  return 0.5 * (quantile(x, 1.0 - q) - quantile(x, q));
}

}  // namespace

DisorderStats disorder_stats(const DisorderSpec& spec, const SystemParams& base,
                             const ImpurityCountDistribution& counts,
                             const DisorderOptions& options) {
  spec.validate();
  const std::size_t count = spec.sample_count;
  std::vector<double> e(count), u(count);
  std::vector<char> valid(count, 0);
  parallel_for(count, options.workers, [&](std::size_t i) {
    const auto s = sample_site(spec, base, counts, i);
    if (s.n_site < 1) return;
    const auto energies = options.site_model == SiteModel::kExact
                              ? site_energies_exact(s, base.omega_ex())
                              : site_energies_collective(s, base.omega_ex());
    e[i] = energies.e1;
    u[i] = energies.u;
    valid[i] = 1;
  });

  std::vector<double> ev, uv;
  ev.reserve(count);
  uv.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!valid[i]) continue;
    ev.push_back(e[i]);
    uv.push_back(u[i]);
  }
  if (ev.empty())
    throw NumericalError(fmt::format(
        "all {} disorder samples have no impurity; nothing to average", count));

  DisorderStats st;
  st.sample_count = count;
  st.valid_count = ev.size();
  st.empty_fraction = 1.0 - static_cast<double>(ev.size()) / static_cast<double>(count);
  st.e_mean = mean_of(ev);
  st.u_mean = mean_of(uv);
  st.std_e = std_of(ev, st.e_mean);
  st.std_u = std_of(uv, st.u_mean);
  st.quantile_e = quantile_half_width(ev, spec.quantile_q);
  st.quantile_u = quantile_half_width(uv, spec.quantile_q);
  st.quantile_q = spec.quantile_q;
  st.statistic = spec.statistic;
  const bool use_std = spec.statistic == FluctuationStatistic::kStdDev;
  st.delta_e = use_std ? st.std_e : st.quantile_e;
  st.delta_u = use_std ? st.std_u : st.quantile_u;
  return st;
}

DisorderStats disorder_stats(const DisorderSpec& spec, const SystemParams& base,
                             const DisorderOptions& options) {
  return disorder_stats(spec, base, ImpurityCountDistribution(spec), options);
}

LobeSurvival lobe_survival(double u, double delta_e, double delta_u, int n) {
  if (!(u > 0.0)) throw std::invalid_argument("clean interaction energy must be positive");
  if (n < 1) throw std::invalid_argument("lobe filling must be >= 1");
  if (!(delta_e >= 0.0) || !(delta_u >= 0.0))
    throw std::invalid_argument("fluctuation widths must be >= 0");
  const double width = std::max(0.0, u - 2.0 * delta_e - (2.0 * n - 1.0) * delta_u);
  return {width > 0.0, width};
}

CleanLobe clean_lobe(const SystemParams& params, int n, const SolverOptions& options) {
  const double u = lobe_width(params, n);
  const auto cp = critical_tunneling(params, n, options);
  return {n, u, cp.t_c, cp.mu_tip};
}

double bg_mi_tunneling(const CleanLobe& clean, const DisorderStats& stats) {
  const auto s = lobe_survival(clean.u, stats.delta_e, stats.delta_u, clean.n);
  if (!s.survives) return 0.0;
  return clean.t_c * (s.effective_width / clean.u);
}

double bg_mi_tunneling(const SystemParams& params, const DisorderStats& stats, int n,
                       const SolverOptions& options) {
  return bg_mi_tunneling(clean_lobe(params, n, options), stats);
}

namespace {

void check_disorder_axis(const std::vector<double>& axis, const char* name,
                         double upper) {
  if (axis.empty()) throw std::invalid_argument(fmt::format("{} axis is empty", name));
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!(axis[i] >= 0.0 && axis[i] <= upper))
      throw std::invalid_argument(
          fmt::format("{} axis entries must lie in [0, {:.6g}]", name, upper));
    if (i > 0 && !(axis[i] > axis[i - 1]))
      throw std::invalid_argument(fmt::format("{} axis must be strictly increasing", name));
  }
}

}  // namespace

IsoSurfaceResult iso_surface(const IsoSurfaceConfig& config, const SystemParams& base_in,
                             double g_physical, const LossParams& loss,
                             unsigned workers) {
  check_disorder_axis(config.sigma_omega, "sigma_omega",
                      std::numeric_limits<double>::max());
  check_disorder_axis(config.g_sigma, "g_sigma", 1.0 / uniform_width_from_sigma(1.0));
  check_disorder_axis(config.n_sigma, "n_sigma", std::numeric_limits<double>::max());
  if (!(g_physical > 0.0)) throw std::invalid_argument("physical g must be positive");
  if (!(config.safety_factor > 0.0))
    throw std::invalid_argument("safety factor must be positive");
  loss.validate();

  const int big_n = static_cast<int>(std::lround(config.n_mean));
  if (big_n < 1) throw std::invalid_argument("mean impurity count must round to >= 1");
  const SystemParams base = base_in.with_big_n(big_n);
  const double to_physical = g_physical / base.g();
  const SystemParams physical(base.omega_ph() * to_physical, base.omega_ex() * to_physical,
                              g_physical, big_n, base.z());

  IsoSurfaceResult out;
  out.clean = clean_lobe(base, config.filling, config.solver);
  out.composition = polariton_fractions(base);
  out.loss_rate = polariton_loss_rate(physical, loss);
  const double rate_factor = config.rate == TunnelingRate::kPerSite ? base.z() : 1.0;
  auto marker = [&](double t_dis) {
    return out.composition.c_ph_sq * rate_factor * t_dis * to_physical -
           config.safety_factor * out.loss_rate;
  };
  out.clean_marker = marker(out.clean.t_c);

  auto spec_for = [&](double sw, double gs, double ns) {
    DisorderSpec spec;
    spec.sigma_omega = sw;
    spec.delta_g = uniform_width_from_sigma(gs);
    spec.n_mean = config.n_mean;
    spec.n_sigma = ns;
    spec.n_dist = config.n_dist;
    spec.sample_count = config.sample_count;
    spec.seed = config.seed;
    spec.statistic = config.statistic;
    spec.quantile_q = config.quantile_q;
    return spec;
  };

  const std::size_t n_w = config.sigma_omega.size();
  const std::size_t n_g = config.g_sigma.size();
  const std::size_t n_n = config.n_sigma.size();
  std::vector<ImpurityCountDistribution> counts;
  counts.reserve(n_n);
  for (double ns : config.n_sigma) counts.emplace_back(spec_for(0.0, 0.0, ns));

  const DisorderOptions serial{config.site_model, 1};
  out.points.resize(n_w * n_g * n_n);
  parallel_for(out.points.size(), workers, [&](std::size_t idx) {
    const std::size_t k = idx % n_n;
    const std::size_t j = (idx / n_n) % n_g;
    const std::size_t i = idx / (n_n * n_g);
    IsoPoint& p = out.points[idx];
    p.index = {i, j, k};
    p.coords = {config.sigma_omega[i], config.g_sigma[j], config.n_sigma[k]};
    p.stats = disorder_stats(spec_for(p.coords[0], p.coords[1], p.coords[2]), base,
                             counts[k], serial);
    p.t_c_dis = bg_mi_tunneling(out.clean, p.stats);
    p.marker = marker(p.t_c_dis);
  });

  auto at = [&](std::size_t i, std::size_t j, std::size_t k) -> const IsoPoint& {
    return out.points[(i * n_g + j) * n_n + k];
  };
  const std::array<std::size_t, 3> extent{n_w, n_g, n_n};
  for (const auto& a : out.points) {
    for (int axis = 0; axis < 3; ++axis) {
      auto nb = a.index;
      if (++nb[axis] >= extent[axis]) continue;
      const auto& b = at(nb[0], nb[1], nb[2]);
      if ((a.marker >= 0.0) == (b.marker >= 0.0)) continue;
      const double frac = a.marker / (a.marker - b.marker);
      std::array<double, 3> c = a.coords;
      c[axis] += frac * (b.coords[axis] - a.coords[axis]);
      out.boundary.push_back(c);
    }
  }
  out.boundary_found = !out.boundary.empty();

  const std::array<const std::vector<double>*, 3> axes{&config.sigma_omega, &config.g_sigma,
                                                       &config.n_sigma};
  const DisorderOptions parallel_opts{config.site_model, workers};
  for (int axis = 0; axis < 3; ++axis) {
    Intercept& ic = out.intercepts[axis];
    const auto& values = *axes[axis];
    auto point_on_axis = [&](std::size_t m) -> const IsoPoint& {
      std::array<std::size_t, 3> id{0, 0, 0};
      id[axis] = m;
      return at(id[0], id[1], id[2]);
    };
    ic.observable_at_zero = point_on_axis(0).marker >= 0.0;
    if (!ic.observable_at_zero) continue;
    std::size_t last = 0;
    while (last + 1 < values.size() && point_on_axis(last + 1).marker >= 0.0) ++last;
    if (last + 1 == values.size()) {
      ic.value = values[last];
      continue;
    }
    ic.bracketed = true;
    double lo = values[last];
    double hi = values[last + 1];
    std::array<double, 3> origin{config.sigma_omega[0], config.g_sigma[0], config.n_sigma[0]};
    for (int step = 0; step < config.refine_steps; ++step) {
      const double mid = 0.5 * (lo + hi);
      auto c = origin;
      c[axis] = mid;
      const auto stats = disorder_stats(spec_for(c[0], c[1], c[2]), base, parallel_opts);
      (marker(bg_mi_tunneling(out.clean, stats)) >= 0.0 ? lo : hi) = mid;
    }
    ic.value = 0.5 * (lo + hi);
  }
  return out;
}

}  // namespace polariton
