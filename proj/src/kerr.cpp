#include "polariton/kerr.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

#include "polariton/observables.hpp"
#include "polariton/parallel.hpp"

namespace polariton {

void GridGeometry::validate() const {
  for (int a = 0; a < 3; ++a) {
    if (dims[a] < 2)
      throw std::invalid_argument("field grids need at least 2 nodes per axis");
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
      throw std::invalid_argument("grid spacing must be positive");
    if (!std::isfinite(origin[a])) throw std::invalid_argument("grid origin must be finite");
  }
}

ScalarField3D::ScalarField3D(GridGeometry geometry, std::vector<double> values)
    : geometry_(geometry), values_(std::move(values)) {
  geometry_.validate();
  if (values_.size() != geometry_.size())
    throw std::invalid_argument(fmt::format("field has {} values for a {}x{}x{} grid",
                                            values_.size(), geometry_.dims[0],
                                            geometry_.dims[1], geometry_.dims[2]));
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("field values must be finite");
}

ScalarField3D ScalarField3D::uniform(const GridGeometry& geometry, double value) {
  return ScalarField3D(geometry, std::vector<double>(geometry.size(), value));
}

ScalarField3D ScalarField3D::from_function(
    const GridGeometry& geometry, const std::function<double(double, double, double)>& f) {
  geometry.validate();
  std::vector<double> values(geometry.size());
  std::size_t idx = 0;
  for (std::size_t k = 0; k < geometry.dims[2]; ++k)
    for (std::size_t j = 0; j < geometry.dims[1]; ++j)
      for (std::size_t i = 0; i < geometry.dims[0]; ++i)
        values[idx++] = f(geometry.origin[0] + geometry.spacing[0] * static_cast<double>(i),
                          geometry.origin[1] + geometry.spacing[1] * static_cast<double>(j),
                          geometry.origin[2] + geometry.spacing[2] * static_cast<double>(k));
  return ScalarField3D(geometry, std::move(values));
}

double ScalarField3D::sample_index(double fx, double fy, double fz) const {
  const std::array<double, 3> f{fx, fy, fz};
  std::array<std::size_t, 3> base{};
  std::array<double, 3> w{};
  for (int a = 0; a < 3; ++a) {
    const auto top = static_cast<double>(geometry_.dims[a] - 1);
    if (!(f[a] >= 0.0 && f[a] <= top)) return 0.0;
    const double fl = std::min(std::floor(f[a]), top - 1.0);
    base[a] = static_cast<std::size_t>(fl);
    w[a] = f[a] - fl;
  }
  double acc = 0.0;
  for (int c = 0; c < 8; ++c) {
    const std::size_t di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
    const double wc = (di ? w[0] : 1.0 - w[0]) * (dj ? w[1] : 1.0 - w[1]) *
                      (dk ? w[2] : 1.0 - w[2]);
    if (wc == 0.0) continue;
    acc += wc * at(base[0] + di, base[1] + dj, base[2] + dk);
  }
  return acc;
}

double ScalarField3D::sample(double x, double y, double z) const {
  return sample_index((x - geometry_.origin[0]) / geometry_.spacing[0],
                      (y - geometry_.origin[1]) / geometry_.spacing[1],
                      (z - geometry_.origin[2]) / geometry_.spacing[2]);
}

ScalarField3D ScalarField3D::coarsened() const {
  GridGeometry g = geometry_;
  for (int a = 0; a < 3; ++a) {
    g.dims[a] = (geometry_.dims[a] + 1) / 2;
    g.spacing[a] *= 2.0;
  }
  std::vector<double> values;
  values.reserve(g.size());
  for (std::size_t k = 0; k < g.dims[2]; ++k)
    for (std::size_t j = 0; j < g.dims[1]; ++j)
      for (std::size_t i = 0; i < g.dims[0]; ++i) values.push_back(at(2 * i, 2 * j, 2 * k));
  return ScalarField3D(g, std::move(values));
}

namespace {

// Neumaier-compensated accumulator.
struct Sum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

double trapezoid_weight(std::size_t i, std::size_t n, double h) {
  return (i == 0 || i + 1 == n) ? 0.5 * h : h;
}

// Trapezoidal integral of integrand(i, j, k) over the grid. Each z slice is
// summed serially and slices are combined in order, so the result does not
// depend on the worker count.
template <class F>
double integrate(const GridGeometry& g, unsigned workers, F&& integrand) {
  std::vector<double> slices(g.dims[2]);
  parallel_for(g.dims[2], workers, [&](std::size_t k) {
    Sum acc;
    const double wk = trapezoid_weight(k, g.dims[2], g.spacing[2]);
    for (std::size_t j = 0; j < g.dims[1]; ++j) {
      const double wjk = wk * trapezoid_weight(j, g.dims[1], g.spacing[1]);
      for (std::size_t i = 0; i < g.dims[0]; ++i)
        acc.add(wjk * trapezoid_weight(i, g.dims[0], g.spacing[0]) * integrand(i, j, k));
    }
    slices[k] = acc.value();
  });
  Sum total;
  for (double s : slices) total.add(s);
  return total.value();
}

void check_congruent(const ScalarField3D& a, const ScalarField3D& b, const char* what) {
  if (!(a.geometry() == b.geometry()))
    throw std::invalid_argument(fmt::format("{} grid is not congruent with the mode grid", what));
}

}  // namespace

NormalizedMode normalize_mode(const ScalarField3D& phi, const ScalarField3D& k_c,
                              unsigned workers) {
  check_congruent(k_c, phi, "dielectric");
  const double norm =
      2.0 * constants::kVacuumPermittivity *
      integrate(phi.geometry(), workers, [&](std::size_t i, std::size_t j, std::size_t k) {
        const double v = phi.at(i, j, k);
        return k_c.at(i, j, k) * v * v;
      });
  if (!(norm > 0.0))
    throw std::invalid_argument("mode has zero (or negative) dielectric-weighted norm");
  const double scale = 1.0 / std::sqrt(norm);
  std::vector<double> values = phi.values();
  for (auto& v : values) v *= scale;
  return {ScalarField3D(phi.geometry(), std::move(values)), scale, norm};
}

HoppingResult hopping_integral(const ScalarField3D& k_c, const ScalarField3D& phi,
                               const std::array<double, 3>& d, unsigned workers) {
  check_congruent(k_c, phi, "dielectric");
  const auto& g = phi.geometry();
  for (int a = 0; a < 3; ++a) {
    if (!std::isfinite(d[a])) throw std::invalid_argument("displacement must be finite");
    const double extent = g.spacing[a] * static_cast<double>(g.dims[a] - 1);
    if (std::abs(d[a]) > extent) return {0.0, true};
  }
  std::array<double, 3> shift{};
  for (int a = 0; a < 3; ++a) {
    shift[a] = d[a] / g.spacing[a];
    // Whole-node shifts must not lose the boundary layer to round-off.
    if (std::abs(shift[a] - std::round(shift[a])) < 1e-9) shift[a] = std::round(shift[a]);
  }
  const double integral =
      integrate(g, workers, [&](std::size_t i, std::size_t j, std::size_t k) {
        const double here = phi.at(i, j, k);
        if (here == 0.0) return 0.0;
        const double moved = phi.sample_index(static_cast<double>(i) - shift[0],
                                              static_cast<double>(j) - shift[1],
                                              static_cast<double>(k) - shift[2]);
        return k_c.at(i, j, k) * here * moved;
      });
  return {2.0 * constants::kVacuumPermittivity * integral, false};
}

double kerr_u(const ScalarField3D& chi3, const ScalarField3D& phi, unsigned workers) {
  check_congruent(chi3, phi, "Kerr");
  const double integral =
      integrate(phi.geometry(), workers, [&](std::size_t i, std::size_t j, std::size_t k) {
        const double v = phi.at(i, j, k);
        const double v2 = v * v;
        return chi3.at(i, j, k) * v2 * v2;
      });
  return -6.0 * constants::kVacuumPermittivity * integral;
}

EffectiveBoseHubbard effective_bhm(const ScalarField3D& k_c, const ScalarField3D& chi3,
                                   const ScalarField3D& phi,
                                   const std::array<double, 3>& d, unsigned workers) {
  const auto mode = normalize_mode(phi, k_c, workers);
  const auto hop = hopping_integral(k_c, mode.field, d, workers);
  return {hop.t, kerr_u(chi3, mode.field, workers), mode.scale, hop.outside};
}

}  // namespace polariton
