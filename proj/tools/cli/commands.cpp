#include "cli/commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>

#include "cli/output.hpp"
#include "polariton/disorder.hpp"
#include "polariton/error.hpp"
#include "polariton/field_io.hpp"
#include "polariton/kerr.hpp"
#include "polariton/meanfield.hpp"
#include "polariton/observables.hpp"
#include "polariton/parallel.hpp"
#include "polariton/version.hpp"

namespace polariton::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

json header(const RunConfig& config, const char* command) {
  return {{"tool", "polariton"},
          {"version", version()},
          {"command", command},
          {"config", to_json(config, true)}};
}

json params_json(const SystemParams& p) {
  return {{"omega_ph", p.omega_ph()}, {"omega_ex", p.omega_ex()}, {"g", p.g()},
          {"detuning", p.detuning()}, {"big_n", p.big_n()},       {"z", p.z()}};
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Wall time lives in its own file so result files stay byte-identical.
void write_timing(const RunConfig& config, const char* command, const Timer& timer) {
  write_json(fs::path(config.run.output_dir) / fmt::format("{}.timing.json", command),
             {{"command", command},
              {"wall_seconds", timer.seconds()},
              {"threads", resolve_workers(config.run.threads)}});
}

json optional_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

int cmd_phase_diagram(const RunConfig& config, std::ostream& log) {
  const Timer timer;
  const auto& pd = config.phase_diagram;
  const auto params = config.system_params_g();
  const unsigned workers = resolve_workers(config.run.threads);
  fmt::print(log, "phase-diagram: {}x{} cells, N={}, detuning={} g, {} worker(s)\n",
             pd.t_points, pd.mu_points, params.big_n(), params.detuning(), workers);
  const auto grid = phase_diagram(params, linspace(pd.t_min, pd.t_max, pd.t_points),
                                  linspace(pd.mu_min, pd.mu_max, pd.mu_points),
                                  config.solver, workers);

  const double unit = config.run.physical_units ? config.g_physical() : 1.0;
  CsvWriter csv({"t", "mu", "psi", "phase", "filling", "density", "e_star", "n_max", "unbounded"});
  std::map<int, std::size_t> mott_cells;
  std::size_t sf_cells = 0, unbounded_cells = 0;
  double psi_peak = 0.0;
  for (const auto& c : grid.cells) {
    const bool mi = c.phase == Phase::kMottInsulator;
    csv.row({number(c.t * unit), number(c.mu * unit), number(c.psi_star), mi ? "MI" : "SF",
             std::to_string(c.filling), number(c.density), number(c.e_star * unit),
             std::to_string(c.n_max), c.unbounded ? "1" : "0"});
    if (mi) {
      ++mott_cells[c.filling];
    } else {
      ++sf_cells;
      if (c.unbounded) ++unbounded_cells;
      else psi_peak = std::max(psi_peak, c.psi_star);
    }
  }
  const fs::path dir = config.run.output_dir;
  write_file(dir / "phase_diagram.csv", csv.text());

  json lobes = json::array();
  for (int n = 1; n <= 3; ++n) {
    const auto r = mott_lobe_mu_range(params, n);
    lobes.push_back({{"filling", n}, {"mu_lower", r.lower * unit}, {"mu_upper", r.upper * unit},
                     {"cells", mott_cells.count(n) ? mott_cells.at(n) : 0}});
  }
  json meta = header(config, "phase-diagram");
  meta["units"] = config.run.physical_units ? "rad/s" : "g";
  meta["params_g_units"] = params_json(params);
  meta["grid"] = {{"t_points", pd.t_points}, {"mu_points", pd.mu_points},
                  {"row_order", "mu outer, t inner"}};
  meta["convergence"] = {{"max_n_max", grid.max_n_max},
                         {"cutoff_rel_tol", config.solver.cutoff_rel_tol}};
  meta["summary"] = {{"superfluid_cells", sf_cells},
                     {"unbounded_cells", unbounded_cells},
                     {"psi_max", psi_peak},
                     {"lobes_at_t0", lobes}};
  json fillings = json::object();
  for (const auto& [n, count] : mott_cells) fillings[std::to_string(n)] = count;
  meta["summary"]["mott_cells_by_filling"] = fillings;
  write_json(dir / "phase_diagram.json", meta);

  if (pd.heatmap) {
    const auto nt = grid.t_axis.size(), nm = grid.mu_axis.size();
    std::vector<unsigned char> pixels(nt * nm);
    for (std::size_t row = 0; row < nm; ++row) {
      const std::size_t im = nm - 1 - row;  // highest mu on top
      for (std::size_t it = 0; it < nt; ++it) {
        const auto& c = grid.at(it, im);
        const double level = c.unbounded ? 1.0 : psi_peak > 0.0 ? c.psi_star / psi_peak : 0.0;
        pixels[row * nt + it] = static_cast<unsigned char>(std::lround(255.0 * level));
      }
    }
    write_file(dir / "phase_diagram_psi.pgm", encode_pgm(nt, nm, pixels));
  }
  write_timing(config, "phase-diagram", timer);
  fmt::print(log, "phase-diagram: {} superfluid cells, max cutoff {}\n", sf_cells, grid.max_n_max);
  return kExitOk;
}

int cmd_critical(const RunConfig& config, std::ostream& log) {
  const Timer timer;
  const auto& cr = config.critical;
  const auto base = config.system_params_g();
  const double g_phys = config.g_physical();
  const double unit = config.run.physical_units ? g_phys : 1.0;
  const unsigned workers = resolve_workers(config.run.threads);

  struct Row {
    int big_n;
    double delta;
    CleanLobe lobe{};
    PolaritonComposition mix{};
    RequiredQ q1{}, q10{}, q10_site{};
    std::string status = "ok";
  };
  std::vector<Row> rows;
  for (int n : cr.n_values)
    for (double d : cr.detunings_g) rows.push_back({n, d});
  fmt::print(log, "critical: {} rows, filling {}, {} worker(s)\n", rows.size(), cr.filling, workers);

  parallel_for(rows.size(), workers, [&](std::size_t i) {
    auto& r = rows[i];
    try {
      const auto p = base.with_big_n(r.big_n).with_detuning(r.delta);
      r.lobe = clean_lobe(p, cr.filling, config.solver);
      r.mix = polariton_fractions(p);
      const SystemParams phys(p.omega_ph() * g_phys, p.omega_ex() * g_phys, g_phys, r.big_n, p.z());
      LossParams l1 = config.loss, l10 = config.loss;
      l1.eta = 1.0;
      l10.eta = 10.0;
      r.q1 = required_q(phys, l1, r.lobe.t_c * g_phys);
      r.q10 = required_q(phys, l10, r.lobe.t_c * g_phys);
      r.q10_site = required_q(phys, l10, p.z() * r.lobe.t_c * g_phys);
    } catch (const std::exception& e) {
      r.status = fmt::format("error: {}", e.what());
    }
  });

  CsvWriter csv({"N", "detuning", "t_c", "U", "c_ph_sq", "ratio", "q_r_eta1", "q_r_eta10",
                 "mu_tip", "q_r_site_eta10", "status"});
  json table = json::array();
  std::size_t failed = 0;
  for (const auto& r : rows) {
    if (r.status != "ok") {
      ++failed;
      csv.row({std::to_string(r.big_n), number(r.delta * unit), "", "", "", "", "", "", "", "",
               r.status});
      table.push_back({{"N", r.big_n}, {"detuning", r.delta * unit}, {"status", r.status}});
      continue;
    }
    const double ratio = r.lobe.u / (r.mix.c_ph_sq * r.lobe.t_c);
    csv.row({std::to_string(r.big_n), number(r.delta * unit), number(r.lobe.t_c * unit),
             number(r.lobe.u * unit), number(r.mix.c_ph_sq), number(ratio), number(r.q1.value),
             number(r.q10.value), number(r.lobe.mu_tip * unit), number(r.q10_site.value),
             r.status});
    table.push_back({{"N", r.big_n},
                     {"detuning", r.delta * unit},
                     {"t_c", r.lobe.t_c * unit},
                     {"U", r.lobe.u * unit},
                     {"c_ph_sq", r.mix.c_ph_sq},
                     {"ratio", ratio},
                     {"q_r_eta1", optional_number(r.q1.value)},
                     {"q_r_eta10", optional_number(r.q10.value)},
                     {"q_r_site_eta10", optional_number(r.q10_site.value)},
                     {"status", r.status}});
  }
  const fs::path dir = config.run.output_dir;
  write_file(dir / "critical.csv", csv.text());
  json meta = header(config, "critical");
  meta["units"] = config.run.physical_units ? "rad/s" : "g";
  meta["g_rad_per_s"] = g_phys;
  meta["bose_hubbard_ratio_limit"] = 4.0 * (3.0 + 2.0 * std::sqrt(2.0));
  meta["rows"] = table;
  meta["failed_rows"] = failed;
  write_json(dir / "critical.json", meta);
  write_timing(config, "critical", timer);
  if (failed > 0) fmt::print(log, "critical: {} of {} rows failed (see status column)\n", failed, rows.size());
  return failed == rows.size() ? kExitNumerical : kExitOk;
}

int cmd_disorder(const RunConfig& config, std::ostream& log) {
  const Timer timer;
  const auto& d = config.disorder;
  const double g_phys = config.g_physical();
  const int big_n = static_cast<int>(std::lround(d.n_mean));
  const auto base = config.system_params_g().with_detuning(d.detuning_g).with_big_n(std::max(big_n, 1));

  IsoSurfaceConfig iso;
  iso.sigma_omega = linspace(0.0, d.sigma_omega_max, d.points);
  iso.g_sigma = linspace(0.0, d.g_sigma_max, d.points);
  iso.n_sigma = linspace(0.0, d.n_sigma_max, d.points);
  iso.n_mean = d.n_mean;
  iso.n_dist = parse_number_distribution(d.n_dist);
  iso.sample_count = d.samples;
  iso.seed = config.run.seed;
  iso.statistic = parse_statistic(d.statistic);
  iso.quantile_q = d.quantile_q;
  iso.site_model = parse_site_model(d.site_model);
  iso.filling = d.filling;
  iso.safety_factor = d.safety_factor;
  iso.rate = parse_rate(d.rate);
  iso.refine_steps = d.refine_steps;
  iso.solver = config.solver;

  const unsigned workers = resolve_workers(config.run.threads);
  fmt::print(log, "disorder: {}^3 grid, {} samples per point, {} worker(s)\n", d.points, d.samples,
             workers);
  const auto res = iso_surface(iso, base, g_phys, config.loss, workers);

  const double unit = config.run.physical_units ? g_phys : 1.0;
  CsvWriter grid({"sigma_omega", "g_sigma", "n_sigma", "delta_e", "delta_u", "u_mean", "e_mean",
                  "empty_fraction", "t_c_dis", "marker"});
  for (const auto& p : res.points)
    grid.row({number(p.coords[0] * unit), number(p.coords[1] * unit), number(p.coords[2]),
              number(p.stats.delta_e * unit), number(p.stats.delta_u * unit),
              number(p.stats.u_mean * unit), number(p.stats.e_mean * unit),
              number(p.stats.empty_fraction), number(p.t_c_dis * unit), number(p.marker)});
  CsvWriter boundary({"sigma_omega", "g_sigma", "n_sigma"});
  for (const auto& b : res.boundary)
    boundary.row({number(b[0] * unit), number(b[1] * unit), number(b[2])});

  auto intercept = [&](int axis) {
    const auto& ic = res.intercepts[static_cast<std::size_t>(axis)];
    json j = {{"observable_at_zero", ic.observable_at_zero}, {"bracketed", ic.bracketed}};
    if (axis == 2) {
      j["value"] = ic.value;
      j["fraction_of_mean"] = ic.value / d.n_mean;
    } else {
      j["value_g"] = ic.value;
      j["value_ghz"] = ic.value * config.system.g_ghz;
    }
    return j;
  };
  json summary = header(config, "disorder");
  summary["units"] = config.run.physical_units ? "rad/s" : "g";
  summary["marker_units"] = "1/s";
  summary["params_g_units"] = params_json(base);
  summary["clean"] = {{"u", res.clean.u * unit},
                      {"t_c", res.clean.t_c * unit},
                      {"mu_tip", res.clean.mu_tip * unit},
                      {"c_ph_sq", res.composition.c_ph_sq},
                      {"loss_rate", res.loss_rate},
                      {"marker", res.clean_marker}};
  summary["boundary_found"] = res.boundary_found;
  summary["boundary_points"] = res.boundary.size();
  summary["intercepts"] = {{"sigma_omega", intercept(0)},
                           {"g_sigma", intercept(1)},
                           {"n_sigma", intercept(2)}};
  const fs::path dir = config.run.output_dir;
  write_file(dir / "disorder_grid.csv", grid.text());
  write_file(dir / "disorder_boundary.csv", boundary.text());
  write_json(dir / "disorder_summary.json", summary);
  write_timing(config, "disorder", timer);
  if (!res.boundary_found) {
    fmt::print(log,
               "disorder: the marker has one sign over the whole grid (clean marker {:.4g} 1/s); "
               "no iso-surface\n",
               res.clean_marker);
    return kExitNumerical;
  }
  fmt::print(log, "disorder: intercepts sigma_omega={:.4g} GHz, g_sigma={:.4g} g, n_sigma={:.4g} <N>\n",
             res.intercepts[0].value * config.system.g_ghz, res.intercepts[1].value,
             res.intercepts[2].value / d.n_mean);
  return kExitOk;
}

namespace {

struct KerrInputs {
  ScalarField3D k_c, chi3, phi;
  bool fixture;
};

ScalarField3D gaussian_mode(const GridGeometry& g, double sigma) {
  return ScalarField3D::from_function(g, [sigma](double x, double y, double z) {
    return std::exp(-(x * x + y * y + z * z) / (2.0 * sigma * sigma));
  });
}

KerrInputs kerr_inputs(const KerrSection& k) {
  if (!k.phi_file.empty())
    return {read_field(k.k_c_file), read_field(k.chi3_file), read_field(k.phi_file), false};
  const auto& f = k.fixture;
  const double half = f.half_width_sigma * f.sigma_m;
  const auto n = static_cast<std::size_t>(f.points);
  const double h = 2.0 * half / static_cast<double>(n - 1);
  const GridGeometry g{{n, n, n}, {h, h, h}, {-half, -half, -half}};
  return {ScalarField3D::uniform(g, f.k_c), ScalarField3D::uniform(g, f.chi3),
          gaussian_mode(g, f.sigma_m), true};
}

double relative_change(double fine, double coarse) {
  if (fine == coarse) return 0.0;
  return std::abs(fine - coarse) / std::max(std::abs(fine), std::abs(coarse));
}

}  // namespace

int cmd_kerr(const RunConfig& config, std::ostream& log) {
  const Timer timer;
  const auto& k = config.kerr;
  auto in = kerr_inputs(k);
  if (k.chi3_scale != 1.0)
    for (auto& v : in.chi3.values()) v *= k.chi3_scale;
  const unsigned workers = resolve_workers(config.run.threads);
  const auto& geo = in.phi.geometry();
  fmt::print(log, "kerr: {}x{}x{} grid ({}), {} worker(s)\n", geo.dims[0], geo.dims[1], geo.dims[2],
             in.fixture ? "Gaussian fixture" : "field files", workers);

  const auto fine = effective_bhm(in.k_c, in.chi3, in.phi, k.displacement_m, workers);
  const auto coarse = effective_bhm(in.k_c.coarsened(), in.chi3.coarsened(), in.phi.coarsened(),
                                    k.displacement_m, workers);
  const double energy = k.photon_energy > 0.0 ? k.photon_energy : 1.0;

  json out = header(config, "kerr");
  out["units"] = k.photon_energy > 0.0 ? "photon_energy" : "self_energy";
  out["grid"] = {{"dims", geo.dims}, {"spacing", geo.spacing}, {"origin", geo.origin}};
  out["t"] = fine.t * energy;
  out["u"] = fine.u * energy;
  out["outside"] = fine.outside;
  out["normalization"] = {{"scale", fine.scale}, {"input_norm", 1.0 / (fine.scale * fine.scale)}};
  out["error_estimate"] = {{"coarse_t", coarse.t * energy},
                           {"coarse_u", coarse.u * energy},
                           {"t_rel", relative_change(fine.t, coarse.t)},
                           {"u_rel", relative_change(fine.u, coarse.u)}};
  if (fine.u > 0.0 && fine.t > 0.0) {
    const auto tip = bhm_lobe_tip(fine.u, config.system.z, 1);
    out["mott_lobe_1"] = {{"t_c_over_u", tip.t_c / fine.u},
                          {"mu_tip_over_u", tip.mu_tip / fine.u},
                          {"mott_insulator", fine.t < tip.t_c}};
  } else {
    out["mott_lobe_1"] = nullptr;
    out["mott_lobe_note"] = "U <= 0: no repulsive on-site interaction, no Mott lobe";
  }
  if (in.fixture) {
    const auto& f = k.fixture;
    const double pi = constants::kPi;
    const double eps0 = constants::kVacuumPermittivity;
    const double s3 = std::pow(f.sigma_m, 3);
    const double a2 = 1.0 / (2.0 * eps0 * f.k_c * std::pow(pi, 1.5) * s3);
    const auto& d = k.displacement_m;
    const double d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    const double t_exact = 2.0 * eps0 * f.k_c * a2 * std::pow(pi, 1.5) * s3 *
                           std::exp(-d2 / (4.0 * f.sigma_m * f.sigma_m));
    const double u_exact = -6.0 * eps0 * f.chi3 * k.chi3_scale * a2 * a2 * std::pow(pi / 2.0, 1.5) * s3;
    out["analytic"] = {{"t", t_exact * energy},
                       {"u", u_exact * energy},
                       {"t_rel_error", relative_change(fine.t, t_exact)},
                       {"u_rel_error", relative_change(fine.u, u_exact)}};
    if (k.write_fixture) {
      const fs::path dir = config.run.output_dir;
      fs::create_directories(dir);
      write_field((dir / "fixture_k_c.plfd").string(), in.k_c);
      write_field((dir / "fixture_chi3.plfd").string(), in.chi3);
      write_field((dir / "fixture_phi.plfd").string(), in.phi);
    }
  }
  write_json(fs::path(config.run.output_dir) / "kerr.json", out);
  write_timing(config, "kerr", timer);
  fmt::print(log, "kerr: t={:.6g} U={:.6g} (refinement change {:.2g}, {:.2g})\n", fine.t * energy,
             fine.u * energy, relative_change(fine.t, coarse.t), relative_change(fine.u, coarse.u));
  return kExitOk;
}

}  // namespace polariton::cli
