#pragma once

// Decoupled mean-field treatment of the cavity array: minimize the single-site
// ground energy over the real photon order parameter psi, classify Mott vs
// superfluid cells and locate Mott-lobe boundaries.
//
// Chemical potentials here are measured from w_ex; energies are in the units
// of the SystemParams passed in (callers normally use in_units_of_g()).

#include <cstddef>
#include <utility>
#include <vector>

#include "polariton/model.hpp"

namespace polariton {

struct SolverOptions {
  // Starting cutoff on photons + excitations; <= 0 means
  // (filling of the psi = 0 ground state) + 6.
  int n_max_initial = 0;
  int n_max_limit = 120;
  // Energy change allowed when the cutoff grows by 2, relative to
  // max(|E|, g).
  double cutoff_rel_tol = 1e-8;
  int coarse_points = 64;
  double psi_tol = 1e-6;
  double psi_zero_tol = 1e-4;
  // psi_max starts at sqrt(n_max)/2 and doubles on edge hits up to this.
  double psi_max_limit = 64.0;
  double boundary_rel_tol = 1e-4;
  // Absolute tolerance on the lobe-tip chemical potential, in units of g.
  double mu_tol = 1e-4;
};

// Converged lowest eigenvalue of the site Hamiltonian at fixed psi.
double ground_energy_at_psi(const SystemParams& params, double t, double mu,
                            double psi, const SolverOptions& options = {});

struct Minimum {
  double psi_star;
  double e_star;
  int n_max;  // cutoff at which the result was verified
};

Minimum minimize_order_parameter(const SystemParams& params, double t,
                                 double mu, const SolverOptions& options = {});

enum class Phase { kMottInsulator, kSuperfluid };

struct ScanPoint {
  double t;
  double mu;
  double psi_star;
  double e_star;
  Phase phase;
  int filling;     // Mott filling, or nearest integer density for SF
  double density;  // <a^dag a + L_z + N/2> in the ground state
  int n_max;
  // Superfluid whose energy keeps falling with psi up to the largest cutoff (hopping
  // gain exceeds the cost of adding photons). psi_star and e_star are then
  // the values at the edge of the search window, filling is -1 and density
  // is +inf.
  bool unbounded = false;
};

ScanPoint classify_phase(const SystemParams& params, double t, double mu,
                         const SolverOptions& options = {});

struct PhaseGrid {
  std::vector<double> t_axis;
  std::vector<double> mu_axis;
  std::vector<ScanPoint> cells;  // row-major: index = i_mu * t_axis.size() + i_t
  SystemParams params;
  int max_n_max = 0;

  const ScanPoint& at(std::size_t i_t, std::size_t i_mu) const {
    return cells[i_mu * t_axis.size() + i_t];
  }
};

// Cells are independent; results do not depend on the worker count.
PhaseGrid phase_diagram(const SystemParams& params, std::vector<double> t_axis,
                        std::vector<double> mu_axis,
                        const SolverOptions& options = {},
                        unsigned workers = 1);

// Filling of the psi = 0 ground state at chemical potential mu; ties go to
// the lower filling.
int zero_hopping_filling(const SystemParams& params, double mu, int n_limit = 0);

struct MuRange {
  double lower;
  double upper;

  double width() const { return upper - lower; }
  bool empty() const { return !(upper > lower); }
};

MuRange mott_lobe_mu_range(const SystemParams& params, int n);

// Smallest t with psi_star > psi_zero_tol at fixed mu inside lobe n,
// found by bisection.
double boundary_tunneling(const SystemParams& params, int n, double mu,
                          const SolverOptions& options = {});

struct CriticalPoint {
  double t_c;
  double mu_tip;
};

CriticalPoint critical_tunneling(const SystemParams& params, int n,
                                 const SolverOptions& options = {});

// Second-order (Landau) estimate of the boundary: the psi^2 coefficient of
// the ground energy vanishes at t = 1 / (z chi), where chi is the
// particle/hole susceptibility of the manifold-n ground state.
double perturbative_boundary_tunneling(const SystemParams& params, int n,
                                       double mu);
CriticalPoint perturbative_critical_tunneling(const SystemParams& params, int n,
                                              double mu_tol = 1e-10);

// Mean-field Bose-Hubbard boundary t(mu) for lobe n with on-site energy u.
double bhm_boundary_oracle(double u, int z, int n, double mu);

// Lobe-tip chemical potential and tunneling of the same closed form.
CriticalPoint bhm_lobe_tip(double u, int z, int n);

}  // namespace polariton
