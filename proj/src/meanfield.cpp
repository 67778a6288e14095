#include "polariton/meanfield.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "polariton/error.hpp"
#include "polariton/parallel.hpp"

namespace polariton {

namespace {

constexpr double kInvGolden = 0.6180339887498949;

// Site Hamiltonian at fixed (t, mu) split as H(psi) = H0 - z t psi (a + a^dag)
// + z t psi^2, rebuilt whenever the excitation cutoff changes.
class SiteProblem {
 public:
  SiteProblem(const SystemParams& params, double t, double mu_rel,
              const SolverOptions& options)
      : params_(params), t_(t), mu_rel_(mu_rel), options_(options) {
    if (!(t >= 0.0) || !std::isfinite(t))
      throw std::invalid_argument("tunneling t must be finite and >= 0");
    if (!std::isfinite(mu_rel)) throw std::invalid_argument("mu must be finite");
    int start = options.n_max_initial;
    if (start <= 0) start = zero_hopping_filling(params, mu_rel) + 6;
    rebuild(std::min(start, options.n_max_limit));
  }

  int cutoff() const { return cutoff_; }

  double energy(double psi) const { return energy_at(matrices_, psi); }

  EigenPair ground_state(double psi) const {
    return lowest_eigenpair(SymmetricMatrix(assemble(matrices_, psi)));
  }

  const FockDickeBasis& basis() const { return matrices_.basis; }

  // Grows the cutoff by 2 until the energy at psi is stable. Returns true if
  // the cutoff changed.
  bool ensure_converged(double psi) {
    bool changed = false;
    for (;;) {
      const Matrices bigger = make(cutoff_ + 2);
      const double e_small = energy_at(matrices_, psi);
      const double e_big = energy_at(bigger, psi);
      const double scale = std::max(std::abs(e_big), params_.g());
      if (std::abs(e_big - e_small) <= options_.cutoff_rel_tol * scale)
        return changed;
      if (cutoff_ + 2 > options_.n_max_limit)
        throw NumericalError(fmt::format(
            "ground energy not converged at psi={:.6g} (t={:.6g}, mu={:.6g}) "
            "with excitation cutoff {} (limit {})",
            psi, t_, mu_rel_, cutoff_ + 2, options_.n_max_limit));
      matrices_ = bigger;
      cutoff_ += 2;
      changed = true;
    }
  }

 private:
  struct Matrices {
    FockDickeBasis basis;
    Eigen::MatrixXd h0;     // psi = 0 part
    Eigen::MatrixXd drive;  // a + a^dag
  };

  Matrices make(int cutoff) const {
    auto basis = build_truncated_basis(cutoff, params_.big_n());
    Eigen::MatrixXd h0 =
        build_site_hamiltonian_rotating(params_, basis, 0.0, mu_rel_, 0.0).dense();
    Eigen::MatrixXd drive = Eigen::MatrixXd::Zero(h0.rows(), h0.cols());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const int j = basis.index_of(basis[i].photons + 1, basis[i].excitations);
      if (j < 0) continue;
      const double amp = std::sqrt(basis[i].photons + 1.0);
      drive(static_cast<Eigen::Index>(i), j) = amp;
      drive(j, static_cast<Eigen::Index>(i)) = amp;
    }
    return {std::move(basis), std::move(h0), std::move(drive)};
  }

  void rebuild(int cutoff) {
    cutoff_ = cutoff;
    matrices_ = make(cutoff);
  }

  Eigen::MatrixXd assemble(const Matrices& m, double psi) const {
    const double ztpsi = params_.z() * t_ * psi;
    Eigen::MatrixXd h = m.h0 - ztpsi * m.drive;
    h.diagonal().array() += ztpsi * psi;
    return h;
  }

  double energy_at(const Matrices& m, double psi) const {
    const double ztpsi = params_.z() * t_ * psi;
    if (ztpsi == 0.0) return eigen_min(m.h0);
    Eigen::MatrixXd h = m.h0 - ztpsi * m.drive;
    return eigen_min(h) + ztpsi * psi;
  }

  static double eigen_min(const Eigen::MatrixXd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw NumericalError(fmt::format(
          "site eigensolver did not converge ({}x{}, budget {} iterations per "
          "eigenvalue)",
          h.rows(), h.cols(),
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>::m_maxIterations));
    return solver.eigenvalues()(0);
  }

  SystemParams params_;
  double t_;
  double mu_rel_;
  SolverOptions options_;
  int cutoff_ = 0;
  Matrices matrices_{FockDickeBasis(0, 1, 0), {}, {}};
};

struct GoldenResult {
  double x;
  double f;
};

// Minimizes f on [a, b] until the bracket is narrower than tol.
template <class F>
GoldenResult golden_minimize(F&& f, double a, double b, double tol) {
  double c = b - kInvGolden * (b - a);
  double d = a + kInvGolden * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvGolden * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? GoldenResult{c, fc} : GoldenResult{d, fd};
}

// With `bounded`, psi stays within the initial window and an edge hit is
// returned as is; callers that only need psi_star > 0 use this to avoid
// chasing deep-superfluid minima.
Minimum minimize(SiteProblem& site, double t, const SolverOptions& options,
                 bool bounded = false, bool* edge_hit = nullptr) {
  if (edge_hit) *edge_hit = false;
  if (t == 0.0) {
    site.ensure_converged(0.0);
    return {0.0, site.energy(0.0), site.cutoff()};
  }
  const int points = std::max(options.coarse_points, 3);
  double psi_max = std::sqrt(static_cast<double>(site.cutoff())) / 2.0;
  for (;;) {
    const double step = psi_max / (points - 1);
    int best = 0;
    double best_e = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
      const double e = site.energy(i * step);
      if (e < best_e) {
        best_e = e;
        best = i;
      }
    }
    if (best == points - 1) {
      if (bounded) {
        if (edge_hit) *edge_hit = true;
        site.ensure_converged(psi_max);
        return {psi_max, site.energy(psi_max), site.cutoff()};
      }
      psi_max *= 2.0;
      if (psi_max > options.psi_max_limit)
        throw NumericalError(fmt::format(
            "order parameter minimum runs past psi_max={:.4g}; the energy is "
            "unbounded in the truncated basis (cutoff {})",
            options.psi_max_limit, site.cutoff()));
      continue;
    }
    if (site.ensure_converged(best * step)) continue;

    const double lo = std::max(0, best - 1) * step;
    const double hi = (best + 1) * step;
    const auto refined = golden_minimize(
        [&](double psi) { return site.energy(psi); }, lo, hi, options.psi_tol);
    if (site.ensure_converged(refined.x)) continue;

    const double e0 = site.energy(0.0);
    if (e0 <= refined.f || refined.x <= options.psi_tol) return {0.0, e0, site.cutoff()};
    return {refined.x, refined.f, site.cutoff()};
  }
}

double density_of(const SiteProblem& site, double psi) {
  const auto state = site.ground_state(psi);
  double n = 0.0;
  for (std::size_t i = 0; i < site.basis().size(); ++i) {
    const auto& s = site.basis()[i];
    const double w = state.vector(static_cast<Eigen::Index>(i));
    n += w * w * (s.photons + s.excitations);
  }
  return n;
}

void check_filling(int n) {
  if (n < 1) throw std::invalid_argument("lobe filling must be >= 1");
}

}  // namespace

double ground_energy_at_psi(const SystemParams& params, double t, double mu,
                            double psi, const SolverOptions& options) {
  if (!(psi >= 0.0)) throw std::invalid_argument("psi must be >= 0");
  SiteProblem site(params, t, mu, options);
  site.ensure_converged(psi);
  return site.energy(psi);
}

Minimum minimize_order_parameter(const SystemParams& params, double t,
                                 double mu, const SolverOptions& options) {
  SiteProblem site(params, t, mu, options);
  return minimize(site, t, options);
}

int zero_hopping_filling(const SystemParams& params, double mu, int n_limit) {
  if (n_limit <= 0) n_limit = 100000;
  double previous = 0.0;  // E(0)
  for (int n = 0; n < n_limit; ++n) {
    const double next = manifold_energy(params, n + 1);
    // Adding one more excitation must strictly lower E(n) - mu n.
    if (!(next - previous - mu < 0.0)) return n;
    previous = next;
  }
  throw NumericalError(fmt::format(
      "chemical potential {:.6g} lies above every injection energy up to "
      "filling {}; the grand-canonical ground state runs away",
      mu, n_limit));
}

ScanPoint classify_phase(const SystemParams& params, double t, double mu,
                         const SolverOptions& options) {
  SiteProblem site(params, t, mu, options);
  Minimum m;
  try {
    m = minimize(site, t, options);
  } catch (const NumericalError&) {
    // Either a genuine failure or a runaway superfluid; a bounded search
    // that keeps descending at its window edge tells them apart.
    SiteProblem probe(params, t, mu, options);
    bool edge = false;
    const auto b = minimize(probe, t, options, true, &edge);
    if (!edge) throw;
    const double inf = std::numeric_limits<double>::infinity();
    return {t, mu, b.psi_star, b.e_star, Phase::kSuperfluid, -1, inf, b.n_max, true};
  }
  ScanPoint p{t, mu, m.psi_star, m.e_star, Phase::kSuperfluid, 0, 0.0, m.n_max, false};
  if (m.psi_star < options.psi_zero_tol) {
    p.phase = Phase::kMottInsulator;
    p.filling = zero_hopping_filling(params, mu);
    p.density = p.filling;
  } else {
    p.density = density_of(site, m.psi_star);
    p.filling = static_cast<int>(std::lround(p.density));
  }
  return p;
}

namespace {

void check_axis(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw std::invalid_argument(fmt::format("{} axis is empty", name));
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!std::isfinite(axis[i]))
      throw std::invalid_argument(fmt::format("{} axis has a non-finite entry", name));
    if (i > 0 && !(axis[i] > axis[i - 1]))
      throw std::invalid_argument(
          fmt::format("{} axis must be strictly increasing", name));
  }
}

}  // namespace

PhaseGrid phase_diagram(const SystemParams& params, std::vector<double> t_axis,
                        std::vector<double> mu_axis, const SolverOptions& options,
                        unsigned workers) {
  check_axis(t_axis, "t");
  check_axis(mu_axis, "mu");
  if (t_axis.front() < 0.0) throw std::invalid_argument("t axis must be >= 0");

  const std::size_t nt = t_axis.size();
  const std::size_t count = nt * mu_axis.size();
  std::vector<std::optional<ScanPoint>> cells(count);
  std::vector<std::string> errors(count);
  parallel_for(count, workers, [&](std::size_t idx) {
    const double t = t_axis[idx % nt];
    const double mu = mu_axis[idx / nt];
    try {
      cells[idx] = classify_phase(params, t, mu, options);
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  });

  std::string report;
  std::size_t failures = 0;
  for (std::size_t idx = 0; idx < count; ++idx) {
    if (errors[idx].empty()) continue;
    ++failures;
    report += fmt::format("\n  cell (t={:.6g}, mu={:.6g}): {}", t_axis[idx % nt],
                          mu_axis[idx / nt], errors[idx]);
  }
  if (failures > 0)
    throw NumericalError(
        fmt::format("{} of {} phase-diagram cells failed:{}", failures, count, report));

  PhaseGrid grid{std::move(t_axis), std::move(mu_axis), {}, params, 0};
  grid.cells.reserve(count);
  for (auto& c : cells) {
    grid.max_n_max = std::max(grid.max_n_max, c->n_max);
    grid.cells.push_back(*c);
  }
  return grid;
}

MuRange mott_lobe_mu_range(const SystemParams& params, int n) {
  check_filling(n);
  const double below = manifold_energy(params, n - 1);
  const double here = manifold_energy(params, n);
  const double above = manifold_energy(params, n + 1);
  return {here - below, above - here};
}

double boundary_tunneling(const SystemParams& params, int n, double mu,
                          const SolverOptions& options) {
  const auto lobe = mott_lobe_mu_range(params, n);
  if (lobe.empty())
    throw BoundaryError(BoundaryError::Kind::kEmptyLobe,
                        fmt::format("Mott lobe {} is empty", n));
  if (!(mu > lobe.lower && mu < lobe.upper))
    throw BoundaryError(
        BoundaryError::Kind::kOutsideLobe,
        fmt::format("mu={:.8g} is outside Mott lobe {} ({:.8g}, {:.8g})", mu, n,
                    lobe.lower, lobe.upper));

  auto superfluid = [&](double t) {
    SiteProblem site(params, t, mu, options);
    return minimize(site, t, options, true).psi_star > options.psi_zero_tol;
  };

  double t_lo = 0.0;
  double t_hi = lobe.width() / params.z();
  int doublings = 0;
  while (!superfluid(t_hi)) {
    t_lo = t_hi;
    t_hi *= 2.0;
    if (++doublings > 60)
      throw BoundaryError(BoundaryError::Kind::kNotBracketed,
                          fmt::format("no superfluid onset found below t={:.6g} "
                                      "at mu={:.8g}",
                                      t_hi, mu));
  }
  while (t_hi - t_lo > options.boundary_rel_tol * t_hi) {
    const double mid = 0.5 * (t_lo + t_hi);
    (superfluid(mid) ? t_hi : t_lo) = mid;
  }
  if (!superfluid(1.5 * t_hi))
    throw BoundaryError(
        BoundaryError::Kind::kNotBracketed,
        fmt::format("superfluid onset at mu={:.8g} is not monotone in t near "
                    "t={:.6g}",
                    mu, t_hi));
  return 0.5 * (t_lo + t_hi);
}

namespace {

template <class F>
CriticalPoint maximize_over_lobe(const MuRange& lobe, double tol, F&& boundary) {
  const auto best = golden_minimize([&](double mu) { return -boundary(mu); },
                                    lobe.lower, lobe.upper, tol);
  return {-best.f, best.x};
}

}  // namespace

CriticalPoint critical_tunneling(const SystemParams& params, int n,
                                 const SolverOptions& options) {
  const auto lobe = mott_lobe_mu_range(params, n);
  if (lobe.empty())
    throw BoundaryError(BoundaryError::Kind::kEmptyLobe,
                        fmt::format("Mott lobe {} is empty", n));
  return maximize_over_lobe(lobe, options.mu_tol * params.g(), [&](double mu) {
    return boundary_tunneling(params, n, mu, options);
  });
}

double perturbative_boundary_tunneling(const SystemParams& params, int n,
                                       double mu) {
  const auto lobe = mott_lobe_mu_range(params, n);
  if (!(mu > lobe.lower && mu < lobe.upper))
    throw BoundaryError(
        BoundaryError::Kind::kOutsideLobe,
        fmt::format("mu={:.8g} is outside Mott lobe {} ({:.8g}, {:.8g})", mu, n,
                    lobe.lower, lobe.upper));

  const auto here = manifold_spectrum(params, n);
  const Eigen::VectorXd ground = here.vectors.col(0);
  const double e_ground = here.values(0) - mu * n;

  // Particle branch: a^dag maps (n - k photons, k) to state k of manifold n+1.
  double chi = 0.0;
  const auto up = manifold_spectrum(params, n + 1);
  for (Eigen::Index m = 0; m < up.values.size(); ++m) {
    double amp = 0.0;
    for (Eigen::Index k = 0; k < ground.size(); ++k)
      amp += up.vectors(k, m) * ground(k) * std::sqrt(static_cast<double>(n - k + 1));
    chi += amp * amp / (up.values(m) - mu * (n + 1) - e_ground);
  }
  // Hole branch: a maps (n - k photons, k) to state k of manifold n-1.
  const auto down = manifold_spectrum(params, n - 1);
  for (Eigen::Index m = 0; m < down.values.size(); ++m) {
    double amp = 0.0;
    for (Eigen::Index k = 0; k < ground.size() && k < down.values.size(); ++k) {
      if (n - k < 1) continue;
      amp += down.vectors(k, m) * ground(k) * std::sqrt(static_cast<double>(n - k));
    }
    chi += amp * amp / (down.values(m) - mu * (n - 1) - e_ground);
  }
  return 1.0 / (params.z() * chi);
}

CriticalPoint perturbative_critical_tunneling(const SystemParams& params, int n,
                                              double mu_tol) {
  const auto lobe = mott_lobe_mu_range(params, n);
  if (lobe.empty())
    throw BoundaryError(BoundaryError::Kind::kEmptyLobe,
                        fmt::format("Mott lobe {} is empty", n));
  return maximize_over_lobe(lobe, mu_tol * params.g(), [&](double mu) {
    return perturbative_boundary_tunneling(params, n, mu);
  });
}

double bhm_boundary_oracle(double u, int z, int n, double mu) {
  if (!(u > 0.0)) throw std::invalid_argument("u must be positive");
  if (z < 1) throw std::invalid_argument("z must be >= 1");
  check_filling(n);
  const double particle = u * n - mu;
  const double hole = mu - u * (n - 1);
  if (!(particle > 0.0 && hole > 0.0))
    throw BoundaryError(BoundaryError::Kind::kOutsideLobe,
                        fmt::format("mu={:.8g} outside Bose-Hubbard lobe {} "
                                    "({:.8g}, {:.8g})",
                                    mu, n, u * (n - 1), u * n));
  return particle * hole / ((n + 1) * hole + n * particle) / z;
}

CriticalPoint bhm_lobe_tip(double u, int z, int n) {
  check_filling(n);
  const double x = std::sqrt(static_cast<double>(n) * n + n) - n;
  const double mu = u * (n - 1 + x);
  return {u * x * (1.0 - x) / (n + x) / z, mu};
}

}  // namespace polariton
