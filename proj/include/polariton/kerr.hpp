#pragma once

// Dispersive-limit Bose-Hubbard parameters from mode-overlap quadrature on
// rectilinear 3-D grids (SI units: meters, F/m, m^2/V^2).

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace polariton {

struct GridGeometry {
  std::array<std::size_t, 3> dims{};
  std::array<double, 3> spacing{};
  std::array<double, 3> origin{};

  std::size_t size() const { return dims[0] * dims[1] * dims[2]; }
  bool operator==(const GridGeometry&) const = default;
  void validate() const;  // throws std::invalid_argument
};

class ScalarField3D {
 public:
  ScalarField3D() = default;
  ScalarField3D(GridGeometry geometry, std::vector<double> values);

  static ScalarField3D uniform(const GridGeometry& geometry, double value);
  static ScalarField3D from_function(
      const GridGeometry& geometry,
      const std::function<double(double, double, double)>& f);

  const GridGeometry& geometry() const { return geometry_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  // Node (i, j, k); x index fastest in storage.
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return values_[i + geometry_.dims[0] * (j + geometry_.dims[1] * k)];
  }
  double position(int axis, std::size_t index) const {
    return geometry_.origin[axis] + geometry_.spacing[axis] * static_cast<double>(index);
  }

  // Trilinear interpolation at a point; zero outside the bounding box.
  double sample(double x, double y, double z) const;
  // Same, at fractional node coordinates.
  double sample_index(double fx, double fy, double fz) const;

  // Every other node along each axis (dims become (n + 1) / 2).
  ScalarField3D coarsened() const;

 private:
  GridGeometry geometry_;
  std::vector<double> values_;
};

struct MaterialMaps {
  ScalarField3D k_c;   // relative permittivity K_C(r)
  ScalarField3D chi3;  // Kerr coefficient chi^(3)(r), m^2/V^2
};

struct NormalizedMode {
  ScalarField3D field;
  double scale;       // factor applied to the input field
  double input_norm;  // 2 eps0 int K phi^2 of the input
};

// Rescales phi so that 2 eps0 int K phi^2 d^3r = 1.
NormalizedMode normalize_mode(const ScalarField3D& phi, const ScalarField3D& k_c,
                              unsigned workers = 1);

struct HoppingResult {
  double t;
  bool outside;  // shifted grid does not overlap the original box
};

// t = 2 eps0 int K(r) phi(r) phi(r - d) d^3r, with phi(r - d) sampled
// trilinearly.
HoppingResult hopping_integral(const ScalarField3D& k_c, const ScalarField3D& phi,
                               const std::array<double, 3>& d, unsigned workers = 1);

// U = -6 eps0 int chi3(r) phi^4(r) d^3r.
double kerr_u(const ScalarField3D& chi3, const ScalarField3D& phi, unsigned workers = 1);

struct EffectiveBoseHubbard {
  double t;
  double u;
  double scale;
  bool outside;
};

EffectiveBoseHubbard effective_bhm(const ScalarField3D& k_c, const ScalarField3D& chi3,
                                   const ScalarField3D& phi,
                                   const std::array<double, 3>& d, unsigned workers = 1);

}  // namespace polariton
