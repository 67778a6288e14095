#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polariton/disorder.hpp"
#include "polariton/error.hpp"
#include "polariton/field_io.hpp"
#include "polariton/kerr.hpp"
#include "polariton/meanfield.hpp"
#include "polariton/model.hpp"
#include "polariton/observables.hpp"
#include "polariton/version.hpp"

namespace py = pybind11;
using namespace polariton;

namespace {

ScalarField3D field_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> values,
                               const std::array<double, 3>& spacing, const std::array<double, 3>& origin) {
  if (values.ndim() != 3) throw std::invalid_argument("field values must be a 3-D array");
  // Arrays are indexed [ix, iy, iz]; storage is x fastest.
  const std::array<std::size_t, 3> dims{static_cast<std::size_t>(values.shape(0)),
                                        static_cast<std::size_t>(values.shape(1)),
                                        static_cast<std::size_t>(values.shape(2))};
  std::vector<double> data(dims[0] * dims[1] * dims[2]);
  auto v = values.unchecked<3>();
  for (std::size_t k = 0; k < dims[2]; ++k)
    for (std::size_t j = 0; j < dims[1]; ++j)
      for (std::size_t i = 0; i < dims[0]; ++i) data[i + dims[0] * (j + dims[1] * k)] = v(i, j, k);
  return ScalarField3D({dims, spacing, origin}, std::move(data));
}

py::array_t<double> field_to_array(const ScalarField3D& f) {
  const auto& d = f.geometry().dims;
  py::array_t<double> out({d[0], d[1], d[2]});
  auto o = out.mutable_unchecked<3>();
  for (std::size_t k = 0; k < d[2]; ++k)
    for (std::size_t j = 0; j < d[1]; ++j)
      for (std::size_t i = 0; i < d[0]; ++i) o(i, j, k) = f.at(i, j, k);
  return out;
}

}  // namespace

PYBIND11_MODULE(_polariton, m) {
  m.doc() = "Mean-field phase diagrams of polariton lattices";
  m.attr("__version__") = version();

  auto config_error = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  auto numerical_error = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  (void)config_error;
  (void)numerical_error;

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<double, double, double, int, int>(), py::arg("omega_ph"), py::arg("omega_ex"),
           py::arg("g"), py::arg("big_n"), py::arg("z") = 4)
      .def_static("from_detuning", &SystemParams::from_detuning, py::arg("omega_ex"), py::arg("detuning"),
                  py::arg("g"), py::arg("big_n"), py::arg("z") = 4)
      .def_property_readonly("omega_ph", &SystemParams::omega_ph)
      .def_property_readonly("omega_ex", &SystemParams::omega_ex)
      .def_property_readonly("g", &SystemParams::g)
      .def_property_readonly("big_n", &SystemParams::big_n)
      .def_property_readonly("z", &SystemParams::z)
      .def_property_readonly("detuning", &SystemParams::detuning)
      .def("in_units_of_g", &SystemParams::in_units_of_g)
      .def("with_big_n", &SystemParams::with_big_n)
      .def("with_detuning", &SystemParams::with_detuning)
      .def("__repr__", [](const SystemParams& p) {
        return "SystemParams(omega_ph=" + std::to_string(p.omega_ph()) + ", omega_ex=" +
               std::to_string(p.omega_ex()) + ", g=" + std::to_string(p.g()) +
               ", big_n=" + std::to_string(p.big_n()) + ", z=" + std::to_string(p.z()) + ")";
      });

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("n_max_initial", &SolverOptions::n_max_initial)
      .def_readwrite("n_max_limit", &SolverOptions::n_max_limit)
      .def_readwrite("cutoff_rel_tol", &SolverOptions::cutoff_rel_tol)
      .def_readwrite("coarse_points", &SolverOptions::coarse_points)
      .def_readwrite("psi_tol", &SolverOptions::psi_tol)
      .def_readwrite("psi_zero_tol", &SolverOptions::psi_zero_tol)
      .def_readwrite("psi_max_limit", &SolverOptions::psi_max_limit)
      .def_readwrite("boundary_rel_tol", &SolverOptions::boundary_rel_tol)
      .def_readwrite("mu_tol", &SolverOptions::mu_tol);

  m.def("manifold_energy", &manifold_energy, py::arg("params"), py::arg("n"));
  m.def("ground_energy_at_psi", &ground_energy_at_psi, py::arg("params"), py::arg("t"), py::arg("mu"),
        py::arg("psi"), py::arg("options") = SolverOptions{});

  py::class_<Minimum>(m, "Minimum")
      .def_readonly("psi_star", &Minimum::psi_star)
      .def_readonly("e_star", &Minimum::e_star)
      .def_readonly("n_max", &Minimum::n_max);
  m.def("minimize_order_parameter", &minimize_order_parameter, py::arg("params"), py::arg("t"), py::arg("mu"),
        py::arg("options") = SolverOptions{});

  py::enum_<Phase>(m, "Phase")
      .value("MOTT_INSULATOR", Phase::kMottInsulator)
      .value("SUPERFLUID", Phase::kSuperfluid);

  py::class_<ScanPoint>(m, "ScanPoint")
      .def_readonly("t", &ScanPoint::t)
      .def_readonly("mu", &ScanPoint::mu)
      .def_readonly("psi_star", &ScanPoint::psi_star)
      .def_readonly("e_star", &ScanPoint::e_star)
      .def_readonly("phase", &ScanPoint::phase)
      .def_readonly("filling", &ScanPoint::filling)
      .def_readonly("density", &ScanPoint::density)
      .def_readonly("n_max", &ScanPoint::n_max)
      .def_readonly("unbounded", &ScanPoint::unbounded);
  m.def("classify_phase", &classify_phase, py::arg("params"), py::arg("t"), py::arg("mu"),
        py::arg("options") = SolverOptions{});

  // Returns a dict of (n_mu, n_t) arrays.
  m.def(
      "phase_diagram",
      [](const SystemParams& p, std::vector<double> t_axis, std::vector<double> mu_axis,
         const SolverOptions& options, unsigned workers) {
        const PhaseGrid grid = [&] {
          py::gil_scoped_release release;
          return phase_diagram(p, std::move(t_axis), std::move(mu_axis), options, workers);
        }();
        const std::size_t nt = grid.t_axis.size(), nm = grid.mu_axis.size();
        py::array_t<double> psi({nm, nt});
        py::array_t<int> filling({nm, nt});
        py::array_t<bool> mott({nm, nt});
        auto ps = psi.mutable_unchecked<2>();
        auto fi = filling.mutable_unchecked<2>();
        auto mo = mott.mutable_unchecked<2>();
        for (std::size_t j = 0; j < nm; ++j)
          for (std::size_t i = 0; i < nt; ++i) {
            const auto& c = grid.at(i, j);
            ps(j, i) = c.psi_star;
            fi(j, i) = c.filling;
            mo(j, i) = c.phase == Phase::kMottInsulator;
          }
        py::dict out;
        out["t"] = grid.t_axis;
        out["mu"] = grid.mu_axis;
        out["psi"] = psi;
        out["filling"] = filling;
        out["mott"] = mott;
        out["max_n_max"] = grid.max_n_max;
        return out;
      },
      py::arg("params"), py::arg("t_axis"), py::arg("mu_axis"), py::arg("options") = SolverOptions{},
      py::arg("workers") = 1u);

  py::class_<MuRange>(m, "MuRange")
      .def_readonly("lower", &MuRange::lower)
      .def_readonly("upper", &MuRange::upper)
      .def_property_readonly("width", &MuRange::width);
  m.def("mott_lobe_mu_range", &mott_lobe_mu_range, py::arg("params"), py::arg("n"));
  m.def("zero_hopping_filling", &zero_hopping_filling, py::arg("params"), py::arg("mu"), py::arg("n_limit") = 0);
  m.def("boundary_tunneling", &boundary_tunneling, py::arg("params"), py::arg("n"), py::arg("mu"),
        py::arg("options") = SolverOptions{});
  m.def("perturbative_boundary_tunneling", &perturbative_boundary_tunneling, py::arg("params"), py::arg("n"),
        py::arg("mu"));

  py::class_<CriticalPoint>(m, "CriticalPoint")
      .def_readonly("t_c", &CriticalPoint::t_c)
      .def_readonly("mu_tip", &CriticalPoint::mu_tip);
  m.def("critical_tunneling", &critical_tunneling, py::arg("params"), py::arg("n") = 1,
        py::arg("options") = SolverOptions{});
  m.def("bhm_lobe_tip", &bhm_lobe_tip, py::arg("u"), py::arg("z"), py::arg("n"));

  m.def("interaction_energy", &interaction_energy, py::arg("params"));
  m.def("lobe_width", &lobe_width, py::arg("params"), py::arg("n"));
  py::class_<PolaritonComposition>(m, "PolaritonComposition")
      .def_readonly("c_ph_sq", &PolaritonComposition::c_ph_sq)
      .def_readonly("c_ex_sq", &PolaritonComposition::c_ex_sq);
  m.def("polariton_fractions", &polariton_fractions, py::arg("params"));

  py::class_<LossParams>(m, "LossParams")
      .def(py::init<>())
      .def_readwrite("tau_e", &LossParams::tau_e)
      .def_readwrite("purcell_f", &LossParams::purcell_f)
      .def_readwrite("q_cavity", &LossParams::q_cavity)
      .def_readwrite("eta", &LossParams::eta);
  m.def("polariton_loss_rate", &polariton_loss_rate, py::arg("params"), py::arg("loss"));
  py::class_<RequiredQ>(m, "RequiredQ")
      .def_readonly("reachable", &RequiredQ::reachable)
      .def_readonly("value", &RequiredQ::value);
  m.def("required_q", &required_q, py::arg("params"), py::arg("loss"), py::arg("tunneling_rate"));
  m.def("bhm_ratio", py::overload_cast<const SystemParams&, double>(&bhm_ratio), py::arg("params"),
        py::arg("t_c"));
  m.def("angular_frequency_from_wavelength", &angular_frequency_from_wavelength, py::arg("wavelength_nm"));
  m.def(
      "coupling_from_ghz",
      [](double ghz, bool angular) {
        return coupling_from_ghz(ghz, angular ? FrequencyConvention::kAngular : FrequencyConvention::kOrdinary);
      },
      py::arg("ghz"), py::arg("angular") = false);
  m.def("doping_density", &doping_density, py::arg("big_n"), py::arg("wavelength_nm"),
        py::arg("refractive_index"));

  py::class_<DisorderSpec>(m, "DisorderSpec")
      .def(py::init<>())
      .def_readwrite("sigma_omega", &DisorderSpec::sigma_omega)
      .def_readwrite("delta_g", &DisorderSpec::delta_g)
      .def_readwrite("n_mean", &DisorderSpec::n_mean)
      .def_readwrite("n_sigma", &DisorderSpec::n_sigma)
      .def_readwrite("sample_count", &DisorderSpec::sample_count)
      .def_readwrite("seed", &DisorderSpec::seed);
  py::class_<DisorderStats>(m, "DisorderStats")
      .def_readonly("delta_e", &DisorderStats::delta_e)
      .def_readonly("delta_u", &DisorderStats::delta_u)
      .def_readonly("e_mean", &DisorderStats::e_mean)
      .def_readonly("u_mean", &DisorderStats::u_mean)
      .def_readonly("valid_count", &DisorderStats::valid_count)
      .def_readonly("empty_fraction", &DisorderStats::empty_fraction);
  m.def(
      "disorder_stats",
      [](const DisorderSpec& spec, const SystemParams& base, unsigned workers) {
        py::gil_scoped_release release;
        return disorder_stats(spec, base, DisorderOptions{SiteModel::kExact, workers});
      },
      py::arg("spec"), py::arg("base"), py::arg("workers") = 1u);
  py::class_<SiteEnergies>(m, "SiteEnergies")
      .def_readonly("e1", &SiteEnergies::e1)
      .def_readonly("e2", &SiteEnergies::e2)
      .def_readonly("u", &SiteEnergies::u);
  m.def(
      "site_energies",
      [](double omega_ph, std::vector<double> g_list, double omega_ex) {
        const int n = static_cast<int>(g_list.size());
        return site_energies_exact(SiteSample{omega_ph, std::move(g_list), n}, omega_ex);
      },
      py::arg("omega_ph"), py::arg("g_list"), py::arg("omega_ex"));
  py::class_<LobeSurvival>(m, "LobeSurvival")
      .def_readonly("survives", &LobeSurvival::survives)
      .def_readonly("effective_width", &LobeSurvival::effective_width);
  m.def("lobe_survival", &lobe_survival, py::arg("u"), py::arg("delta_e"), py::arg("delta_u"), py::arg("n"));
  m.def("bg_mi_tunneling",
        py::overload_cast<const SystemParams&, const DisorderStats&, int, const SolverOptions&>(&bg_mi_tunneling),
        py::arg("params"), py::arg("stats"), py::arg("n") = 1, py::arg("options") = SolverOptions{});

  py::class_<ScalarField3D>(m, "ScalarField3D")
      .def(py::init(&field_from_array), py::arg("values"), py::arg("spacing"),
           py::arg("origin") = std::array<double, 3>{0.0, 0.0, 0.0})
      .def_property_readonly("values", &field_to_array)
      .def_property_readonly("spacing", [](const ScalarField3D& f) { return f.geometry().spacing; })
      .def_property_readonly("origin", [](const ScalarField3D& f) { return f.geometry().origin; })
      .def("sample", &ScalarField3D::sample, py::arg("x"), py::arg("y"), py::arg("z"));
  py::class_<EffectiveBoseHubbard>(m, "EffectiveBoseHubbard")
      .def_readonly("t", &EffectiveBoseHubbard::t)
      .def_readonly("u", &EffectiveBoseHubbard::u)
      .def_readonly("scale", &EffectiveBoseHubbard::scale)
      .def_readonly("outside", &EffectiveBoseHubbard::outside);
  m.def(
      "effective_bhm",
      [](const ScalarField3D& k_c, const ScalarField3D& chi3, const ScalarField3D& phi,
         const std::array<double, 3>& d, unsigned workers) {
        py::gil_scoped_release release;
        return effective_bhm(k_c, chi3, phi, d, workers);
      },
      py::arg("k_c"), py::arg("chi3"), py::arg("phi"), py::arg("displacement"), py::arg("workers") = 1u);
  m.def("read_field", &read_field, py::arg("path"));
  m.def("write_field", &write_field, py::arg("path"), py::arg("field"), py::arg("binary") = true);
}
