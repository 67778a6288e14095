#include "polariton/model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polariton/error.hpp"

namespace polariton {

SystemParams::SystemParams(double omega_ph, double omega_ex, double g,
                           int big_n, int z)
    : omega_ph_(omega_ph), omega_ex_(omega_ex), g_(g), big_n_(big_n), z_(z) {
  if (!(omega_ph > 0.0) || !std::isfinite(omega_ph))
    throw std::invalid_argument("omega_ph must be positive and finite");
  if (!(omega_ex > 0.0) || !std::isfinite(omega_ex))
    throw std::invalid_argument("omega_ex must be positive and finite");
  if (!(g > 0.0) || !std::isfinite(g))
    throw std::invalid_argument("g must be positive and finite");
  if (big_n < 1) throw std::invalid_argument("impurity count N must be >= 1");
  if (z < 1) throw std::invalid_argument("coordination number z must be >= 1");
}

SystemParams SystemParams::from_detuning(double omega_ex, double detuning,
                                         double g, int big_n, int z) {
  return SystemParams(omega_ex + detuning, omega_ex, g, big_n, z);
}

SystemParams SystemParams::in_units_of_g() const {
  return SystemParams(omega_ph_ / g_, omega_ex_ / g_, 1.0, big_n_, z_);
}

SystemParams SystemParams::with_big_n(int big_n) const {
  return SystemParams(omega_ph_, omega_ex_, g_, big_n, z_);
}

SystemParams SystemParams::with_detuning(double detuning) const {
  return SystemParams(omega_ex_ + detuning, omega_ex_, g_, big_n_, z_);
}

SystemParams SystemParams::with_g(double g) const {
  return SystemParams(omega_ph_, omega_ex_, g, big_n_, z_);
}

FockDickeBasis::FockDickeBasis(int n_max, int big_n, int excitation_cap)
    : n_max_(n_max), big_n_(big_n), excitation_cap_(excitation_cap) {
  lookup_.assign(static_cast<std::size_t>(n_max + 1) * (big_n + 1), -1);
  for (int n = 0; n <= n_max; ++n) {
    for (int e = 0; e <= big_n; ++e) {
      if (n + e > excitation_cap) break;
      lookup_[static_cast<std::size_t>(n) * (big_n + 1) + e] =
          static_cast<int>(states_.size());
      states_.push_back({n, e});
    }
  }
}

int FockDickeBasis::index_of(int photons, int excitations) const {
  if (photons < 0 || photons > n_max_ || excitations < 0 || excitations > big_n_)
    return -1;
  return lookup_[static_cast<std::size_t>(photons) * (big_n_ + 1) + excitations];
}

namespace {

void check_basis_args(int n_max, int big_n, std::size_t budget,
                      std::size_t dimension) {
  if (n_max < 0) throw std::invalid_argument("photon cutoff n_max must be >= 0");
  if (big_n < 1) throw std::invalid_argument("impurity count N must be >= 1");
  if (dimension > budget)
    throw NumericalError(fmt::format(
        "basis with n_max={} N={} has {} states, over the budget of {}", n_max,
        big_n, dimension, budget));
}

}  // namespace

FockDickeBasis build_basis(int n_max, int big_n, std::size_t dimension_budget) {
  const auto dim = static_cast<std::size_t>(std::max(n_max, 0) + 1) *
                   static_cast<std::size_t>(std::max(big_n, 0) + 1);
  check_basis_args(n_max, big_n, dimension_budget, dim);
  return FockDickeBasis(n_max, big_n, n_max + big_n);
}

FockDickeBasis build_truncated_basis(int n_max, int big_n,
                                     std::size_t dimension_budget) {
  std::size_t dim = 0;
  for (int k = 0; k <= n_max; ++k) dim += static_cast<std::size_t>(std::min(k, big_n) + 1);
  check_basis_args(n_max, big_n, dimension_budget, dim);
  return FockDickeBasis(n_max, big_n, n_max);
}

SymmetricMatrix::SymmetricMatrix(std::size_t dimension)
    : m_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dimension),
                               static_cast<Eigen::Index>(dimension))) {}

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd dense) : m_(std::move(dense)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("matrix is not square");
  for (Eigen::Index i = 0; i < m_.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (m_(i, j) != m_(j, i))
        throw std::invalid_argument("matrix is not exactly symmetric");
}

void SymmetricMatrix::set(std::size_t i, std::size_t j, double value) {
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  m_(a, b) = value;
  m_(b, a) = value;
}

void SymmetricMatrix::add(std::size_t i, std::size_t j, double value) {
  set(i, j, m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) + value);
}

namespace {

// <e+1| L_+ |e> in the L = N/2 ladder: sqrt((N - e)(e + 1)).
double dicke_raise(int big_n, int e) {
  return std::sqrt(static_cast<double>(big_n - e) * (e + 1));
}

}  // namespace

SymmetricMatrix build_site_hamiltonian_rotating(const SystemParams& params,
                                                const FockDickeBasis& basis,
                                                double t, double mu_rel,
                                                double psi) {
  if (basis.big_n() != params.big_n())
    throw std::invalid_argument(fmt::format(
        "basis built for N={} but parameters have N={}", basis.big_n(),
        params.big_n()));
  if (!(t >= 0.0)) throw std::invalid_argument("tunneling t must be >= 0");
  if (!std::isfinite(psi)) throw std::invalid_argument("psi must be finite");

  const double delta = params.detuning();
  const double g = params.g();
  const double ztpsi = params.z() * t * psi;
  const double penalty = ztpsi * psi;
  const int big_n = params.big_n();

  SymmetricMatrix h(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto [n, e] = basis[i];
    h.set(i, i, n * delta - mu_rel * (n + e) + penalty);

    // g a^dag L_- : (n, e) -> (n + 1, e - 1)
    if (e > 0) {
      const int j = basis.index_of(n + 1, e - 1);
      if (j >= 0)
        h.set(i, static_cast<std::size_t>(j),
              g * std::sqrt(n + 1.0) * dicke_raise(big_n, e - 1));
    }
    // -z t psi a^dag : (n, e) -> (n + 1, e)
    if (ztpsi != 0.0) {
      const int j = basis.index_of(n + 1, e);
      if (j >= 0) h.set(i, static_cast<std::size_t>(j), -ztpsi * std::sqrt(n + 1.0));
    }
  }
  return h;
}

SymmetricMatrix build_site_hamiltonian(const SystemParams& params,
                                       const FockDickeBasis& basis, double t,
                                       double mu, double psi) {
  return build_site_hamiltonian_rotating(params, basis, t, mu - params.omega_ex(),
                                         psi);
}

namespace {

void check_finite(const SymmetricMatrix& m) {
  if (!m.dense().allFinite())
    throw std::invalid_argument("matrix has non-finite entries");
}

}  // namespace

EigenPair lowest_eigenpair(const SymmetricMatrix& m) {
  check_finite(m);
  if (m.dimension() == 0) throw std::invalid_argument("empty matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.dense());
  if (solver.info() != Eigen::Success)
    throw NumericalError(fmt::format(
        "symmetric eigensolver did not converge on a {}x{} matrix within its "
        "budget of {} QR iterations per eigenvalue",
        m.dimension(), m.dimension(),
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>::m_maxIterations));
  Eigen::VectorXd v = solver.eigenvectors().col(0);
  Eigen::Index largest = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v(i)) > std::abs(v(largest))) largest = i;
  if (v(largest) < 0.0) v = -v;
  v /= v.norm();
  return {solver.eigenvalues()(0), std::move(v)};
}

double lowest_eigenvalue(const SymmetricMatrix& m) {
  check_finite(m);
  if (m.dimension() == 0) throw std::invalid_argument("empty matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.dense(),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError(fmt::format(
        "symmetric eigensolver did not converge on a {}x{} matrix within its "
        "budget of {} QR iterations per eigenvalue",
        m.dimension(), m.dimension(),
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>::m_maxIterations));
  return solver.eigenvalues()(0);
}

ManifoldBlock manifold_block(const SystemParams& params, int n) {
  if (n < 0) throw std::invalid_argument("excitation number must be >= 0");
  const int big_n = params.big_n();
  const int dim = std::min(n, big_n) + 1;
  SymmetricMatrix block(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    block.set(k, k, (n - k) * params.detuning());
    if (k + 1 < dim)
      block.set(k, k + 1,
                params.g() * std::sqrt(static_cast<double>(n - k)) *
                    dicke_raise(big_n, k));
  }
  return {n, big_n, std::move(block)};
}

double manifold_energy(const SystemParams& params, int n) {
  if (n == 0) return 0.0;
  return lowest_eigenvalue(manifold_block(params, n).matrix);
}

ManifoldSpectrum manifold_spectrum(const SystemParams& params, int n) {
  const auto block = manifold_block(params, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block.matrix.dense());
  if (solver.info() != Eigen::Success)
    throw NumericalError(fmt::format("manifold {} spectrum did not converge", n));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace polariton
