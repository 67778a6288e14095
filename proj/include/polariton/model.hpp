#pragma once

// Single-site Tavis-Cummings model in the symmetric Dicke subspace.
//
// Energies are angular frequencies with hbar = 1. Every function here is
// unit-agnostic: results come out in whatever unit the SystemParams were
// built in (the phase-diagram code uses units of g).

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace polariton {

class SystemParams {
 public:
  // Throws std::invalid_argument when an invariant is violated.
  SystemParams(double omega_ph, double omega_ex, double g, int big_n, int z = 4);

  static SystemParams from_detuning(double omega_ex, double detuning, double g,
                                    int big_n, int z = 4);

  double omega_ph() const { return omega_ph_; }
  double omega_ex() const { return omega_ex_; }
  double g() const { return g_; }
  int big_n() const { return big_n_; }
  int z() const { return z_; }
  double detuning() const { return omega_ph_ - omega_ex_; }

  // Same physics with every energy divided by g (so g() == 1).
  SystemParams in_units_of_g() const;

  SystemParams with_big_n(int big_n) const;
  SystemParams with_detuning(double detuning) const;
  SystemParams with_g(double g) const;

 private:
  double omega_ph_;
  double omega_ex_;
  double g_;
  int big_n_;
  int z_;
};

struct BasisState {
  int photons;
  int excitations;  // excited impurities e; L_z eigenvalue is e - N/2

  bool operator==(const BasisState&) const = default;
};

// Photon Fock states times symmetric Dicke states, ordered lexicographically
// in (photons, excitations). The full product basis keeps every pair with
// photons <= n_max; the excitation-capped variant additionally requires
// photons + excitations <= excitation_cap.
class FockDickeBasis {
 public:
  FockDickeBasis(int n_max, int big_n, int excitation_cap);

  int n_max() const { return n_max_; }
  int big_n() const { return big_n_; }
  int excitation_cap() const { return excitation_cap_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<BasisState>& states() const { return states_; }
  const BasisState& operator[](std::size_t i) const { return states_[i]; }

  // Position of a state, or -1 if it lies outside the truncation.
  int index_of(int photons, int excitations) const;

 private:
  int n_max_;
  int big_n_;
  int excitation_cap_;
  std::vector<BasisState> states_;
  std::vector<int> lookup_;  // (photons, excitations) -> position
};

inline constexpr std::size_t kDefaultDimensionBudget = 20000;

// Full product basis: (n_max + 1) * (big_n + 1) states.
FockDickeBasis build_basis(int n_max, int big_n,
                           std::size_t dimension_budget = kDefaultDimensionBudget);

// Product basis restricted to photons + excitations <= n_max.
FockDickeBasis build_truncated_basis(
    int n_max, int big_n, std::size_t dimension_budget = kDefaultDimensionBudget);

// Dense real symmetric matrix; off-diagonal entries are always written to
// both triangles at once.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t dimension);
  explicit SymmetricMatrix(Eigen::MatrixXd dense);  // throws if not symmetric

  std::size_t dimension() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double value);
  void add(std::size_t i, std::size_t j, double value);
  const Eigen::MatrixXd& dense() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

// Site Hamiltonian on a truncated basis. mu is the absolute chemical
// potential; internally the rotating-frame identity
//   n w_ph + e w_ex - mu (n + e) = n Delta - (mu - w_ex)(n + e)
// is used so that w_ex never has to cancel against mu numerically.
SymmetricMatrix build_site_hamiltonian(const SystemParams& params,
                                       const FockDickeBasis& basis, double t,
                                       double mu, double psi);

// Same, with the chemical potential measured from w_ex.
SymmetricMatrix build_site_hamiltonian_rotating(const SystemParams& params,
                                                const FockDickeBasis& basis,
                                                double t, double mu_rel,
                                                double psi);

struct EigenPair {
  double value;
  Eigen::VectorXd vector;
};

// Lowest eigenvalue and unit eigenvector. Sign convention: the component of
// largest magnitude is positive (first such component on ties).
EigenPair lowest_eigenpair(const SymmetricMatrix& m);
double lowest_eigenvalue(const SymmetricMatrix& m);

// Excitation manifold n at psi = 0: states (n - k photons, k excitations),
// k = 0..min(n, N). Energies are relative to n * w_ex.
struct ManifoldBlock {
  int n;
  int big_n;
  SymmetricMatrix matrix;

  std::size_t dimension() const { return matrix.dimension(); }
};

ManifoldBlock manifold_block(const SystemParams& params, int n);

// Lowest eigenvalue of manifold_block(params, n); E(0) = 0.
double manifold_energy(const SystemParams& params, int n);

struct ManifoldSpectrum {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, component k = k excitations
};

ManifoldSpectrum manifold_spectrum(const SystemParams& params, int n);

}  // namespace polariton
