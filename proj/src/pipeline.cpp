#include "adnoise/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "adnoise/correlation_ode.hpp"
#include "adnoise/errors.hpp"
#include "adnoise/kernels.hpp"
#include "adnoise/trapnoise.hpp"
#include "adnoise/units.hpp"

#ifndef ADNOISE_VERSION
#define ADNOISE_VERSION "unknown"
#endif

namespace adnoise::pipeline {

using table::Cell;
using table::Table;
using units::debye;
using units::hbar;
using units::kB;
using units::kPi;

namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::states, "states"},       {Command::dipoles, "dipoles"},
    {Command::rates, "rates"},         {Command::spectrum, "spectrum"},
    {Command::tempsweep, "tempsweep"}, {Command::mc_scaling, "mc-scaling"},
    {Command::heat, "heat"},           {Command::validate, "validate"},
};

constexpr double kMeV = 1e-3 * units::electronvolt;
constexpr double kDebye2 = debye * debye;

std::string num(double v) { return table::format_double(v); }

Cell idx(std::size_t i) { return Cell(static_cast<std::int64_t>(i)); }

}  // namespace

Command parse_command(std::string_view name) {
  for (const auto& [c, n] : kCommands)
    if (n == name) return c;
  throw ConfigError("unknown subcommand '" + std::string(name) + "'");
}

std::string_view command_name(Command c) {
  for (const auto& [k, n] : kCommands)
    if (k == c) return n;
  return "?";
}

std::vector<std::string> command_names() {
  std::vector<std::string> out;
  for (const auto& kv : kCommands) out.emplace_back(kv.second);
  return out;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(n, hw);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Model build_model(const config::RunConfig& cfg) {
  potential::SurfacePotentialParams params = cfg.potential;
  if (cfg.mass_model == "reduced")
    params.mass = potential::reduced_mass(params.mass, cfg.material.atomic_mass);
  const auto grid = boundstates::auto_grid(params, cfg.solver.n_points);
  auto states = boundstates::solve(params, grid, cfg.solver.max_states);
  auto ladder = dipoles::dipole_ladder(states, params.polarizability, cfg.image_factor);
  Eigen::MatrixXd couplings = phonons::coupling_matrix(states);
  const double nu10 = (states.energy(1) - states.energy(0)) / hbar;
  const double gamma0 =
      phonons::transition_rate(states.energy(1), states.energy(0), couplings(1, 0), cfg.material,
                               0.0, {.debye_cutoff = false})
          .rate;
  const double g0h = phonons::gamma0_harmonic(params, cfg.material, nu10);
  return Model{params, cfg.material, std::move(states), std::move(ladder), std::move(couplings),
               nu10, gamma0, g0h};
}

double resolve_temperature(const config::Temperature& t, double nu10) {
  return t.vibrational ? t.value * hbar * nu10 / kB : t.value;
}

ThermalState thermal_state(const Model& m, double temperature, bool debye_cutoff) {
  auto rates = phonons::build_rate_matrix(m.states, m.couplings, m.material, temperature,
                                          {.debye_cutoff = debye_cutoff});
  Eigen::VectorXd p = phonons::stationary_distribution(rates);
  auto spec = spectrum::correlation_modes(rates, p, m.ladder);
  return ThermalState{temperature, std::move(rates), std::move(p), std::move(spec)};
}

std::vector<std::string> output_header(const config::RunConfig& cfg, Command command) {
  std::vector<std::string> h;
  h.push_back(std::string("adnoise ") + ADNOISE_VERSION);
  h.push_back("command: " + std::string(command_name(command)));
  h.push_back("seed: " + std::to_string(cfg.montecarlo.seed));
  h.push_back("config:");
  std::istringstream in(config::serialize(cfg));
  for (std::string line; std::getline(in, line);) h.push_back("  " + line);
  return h;
}

std::vector<std::string> write_outputs(const RunResult& r, const config::RunConfig& cfg,
                                       Command command) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.output + "': " + ec.message());
  const auto header = output_header(cfg, command);
  std::vector<std::string> paths;
  for (const Table& t : r.tables) {
    const fs::path p = fs::path(cfg.output) / (t.name + ".csv");
    table::emit_table(t, header, p);
    paths.push_back(p.string());
  }
  return paths;
}

namespace {

std::vector<std::string> model_notes(const Model& m) {
  return {"U0 = " + num(m.params.depth / kMeV) + " meV",
          "nu10/2pi = " + num(m.nu10 / (2 * kPi) / 1e12) + " THz (solver)",
          "nu10/2pi = " + num(potential::harmonic_frequency(m.params) / (2 * kPi) / 1e12) +
              " THz (harmonic)",
          "Gamma0/2pi = " + num(m.gamma0 / (2 * kPi)) + " Hz (exact matrix element)",
          "bound states = " + std::to_string(m.states.size())};
}

std::vector<double> temperatures_of(const config::RunConfig& cfg, const Model& m) {
  std::vector<double> out;
  for (const auto& t : cfg.spectrum.temperatures) out.push_back(resolve_temperature(t, m.nu10));
  return out;
}

std::vector<ThermalState> thermal_states(const Model& m, const std::vector<double>& temps,
                                         bool cutoff) {
  std::vector<std::optional<ThermalState>> slots(temps.size());
  parallel_for(temps.size(), [&](std::size_t i) { slots[i] = thermal_state(m, temps[i], cutoff); });
  std::vector<ThermalState> out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

double vib_units(const Model& m, double temperature) {
  return kB * temperature / (hbar * m.nu10);
}

RunResult run_states(const Model& m) {
  RunResult r;
  Table s{"states", {{"index", ""}, {"energy", "meV"}, {"energy/U0", ""}, {"<z>", "a0"}}, {}, model_notes(m)};
  for (std::size_t i = 0; i < m.states.size(); ++i) {
    const double zbar = boundstates::expectation(m.states, i, i, [](double z) { return z; });
    s.rows.push_back({idx(i), m.states.energy(i) / kMeV, m.states.energy(i) / m.params.depth,
                      zbar / units::a0});
  }
  const auto& d = m.states.diagnostics();
  s.notes.push_back("discarded near threshold = " + std::to_string(d.discarded_threshold) +
                    ", unlocalized = " + std::to_string(d.discarded_tail) +
                    ", truncated = " + std::to_string(d.truncated));
  Table w{"wavefunctions", {{"z", "a0"}, {"U", "meV"}}, {}, {"psi_i are normalized on the grid"}};
  for (std::size_t i = 0; i < m.states.size(); ++i)
    w.columns.push_back({"psi_" + std::to_string(i), "a0^-1/2"});
  const auto z = m.states.z();
  const std::size_t stride = std::max<std::size_t>(1, z.size() / 1000);
  for (std::size_t k = 0; k < z.size(); k += stride) {
    std::vector<Cell> row{z[k] / units::a0, potential::evaluate(m.params, z[k]) / kMeV};
    for (std::size_t i = 0; i < m.states.size(); ++i)
      row.emplace_back(m.states.wavefunction(i)[k] * std::sqrt(units::a0));
    w.rows.push_back(std::move(row));
  }
  r.summary = model_notes(m);
  r.tables = {std::move(s), std::move(w)};
  return r;
}

RunResult run_dipoles(const Model& m) {
  RunResult r;
  Table t{"dipoles", {{"index", ""}, {"energy", "meV"}, {"mu", "D"}, {"mu/mu0", ""}}, {}, {}};
  const double mu0 = m.ladder.mu[0];
  for (std::size_t i = 0; i < m.ladder.mu.size(); ++i)
    t.rows.push_back({idx(i), m.states.energy(i) / kMeV, m.ladder.mu[i] / debye, m.ladder.mu[i] / mu0});
  t.notes.push_back("polarizability = " + num(m.ladder.polarizability / std::pow(units::a0, 3)) + " a0^3");
  t.notes.push_back("image factor = " + num(m.ladder.image_factor));
  t.notes.push_back("P(z0) = " + num(dipoles::induced_dipole(m.params.polarizability, m.params.equilibrium) / debye) + " D");
  r.summary = {"mu_0 = " + num(mu0 / debye) + " D", "mu_1 = " + num(m.ladder.mu[1] / debye) + " D"};
  r.tables.push_back(std::move(t));
  return r;
}

RunResult run_rates(const config::RunConfig& cfg, const Model& m) {
  RunResult r;
  const auto temps = temperatures_of(cfg, m);
  for (std::size_t k = 0; k < temps.size(); ++k) {
    const auto rm = phonons::build_rate_matrix(m.states, m.couplings, m.material, temps[k],
                                               {.debye_cutoff = cfg.spectrum.debye_cutoff});
    Table t{"rates_T" + std::to_string(k),
            {{"i", ""}, {"f", ""}, {"delta_nu", "THz"}, {"coupling", "meV/A"}, {"rate", "1/s"}, {"cutoff", ""}},
            {},
            {"T = " + num(temps[k]) + " K", "kT/hnu10 = " + num(vib_units(m, temps[k]))}};
    for (std::size_t i = 0; i < m.states.size(); ++i)
      for (std::size_t f = 0; f < m.states.size(); ++f) {
        if (i == f) continue;
        const double dnu = std::abs(m.states.energy(i) - m.states.energy(f)) / (2 * kPi * hbar);
        t.rows.push_back({idx(i), idx(f), dnu / 1e12,
                          m.couplings(i, f) / (kMeV / units::angstrom),
                          rm.gamma()(i, f), Cell(std::int64_t{rm.cutoff_mask()(i, f) ? 1 : 0})});
      }
    r.tables.push_back(std::move(t));
  }
  Table s{"rates_summary", {{"quantity", ""}, {"value", ""}, {"unit", ""}}, {}, {}};
  s.rows.push_back({std::string("nu10/2pi"), m.nu10 / (2 * kPi), std::string("Hz")});
  s.rows.push_back({std::string("Gamma0/2pi exact"), m.gamma0 / (2 * kPi), std::string("Hz")});
  s.rows.push_back({std::string("Gamma0/2pi harmonic"), m.gamma0_harmonic / (2 * kPi), std::string("Hz")});
  r.tables.push_back(std::move(s));
  r.summary = model_notes(m);
  return r;
}

double fit_or_nan(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
  try {
    return spectrum::fit_loglog_slope(x, y, lo, hi).slope;
  } catch (const AnalysisError&) {
    return std::nan("");
  }
}

RunResult run_spectrum(const config::RunConfig& cfg, const Model& m) {
  RunResult r;
  const auto& sc = cfg.spectrum;
  const auto temps = temperatures_of(cfg, m);
  const auto states = thermal_states(m, temps, sc.debye_cutoff);
  const auto x = spectrum::log_grid(sc.omega_min, sc.omega_max, sc.points_per_decade);
  std::vector<double> omegas(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) omegas[j] = x[j] * m.gamma0;

  Table summary{"spectrum_summary",
                {{"T", "K"}, {"kT/hnu10", ""}, {"omega_c/Gamma0", ""}, {"knee/Gamma0", ""},
                 {"slope_1f", ""}, {"slope_plateau", ""}, {"slope_tail", ""}, {"S_mu(0)", "D^2/Hz"},
                 {"variance", "D^2"}, {"mean", "D"}, {"modes", ""}},
                {},
                model_notes(m)};
  summary.notes.push_back("1/f window = [" + num(sc.fit_low) + ", " + num(sc.fit_high) + "] omega_c");
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& st = states[k];
    const auto s = spectrum::evaluate_spectrum(st.spectrum, omegas);
    Table t{"spectrum_T" + std::to_string(k),
            {{"omega/Gamma0", ""}, {"omega", "rad/s"}, {"S_mu", "D^2/Hz"}},
            {},
            {"T = " + num(temps[k]) + " K", "kT/hnu10 = " + num(vib_units(m, temps[k]))}};
    for (std::size_t j = 0; j < x.size(); ++j) t.rows.push_back({x[j], omegas[j], s[j] / kDebye2});
    r.tables.push_back(std::move(t));

    const double wc = spectrum::crossover_frequency(m.gamma0, m.nu10, temps[k]) / m.gamma0;
    std::vector<double> sv(s.begin(), s.end());
    const double slope = fit_or_nan(x, sv, sc.fit_low * wc, sc.fit_high * wc);
    const double plateau = fit_or_nan(x, sv, x.front(), wc / 3.0);
    const double tail = fit_or_nan(x, sv, 300.0, x.back());
    double knee = std::nan("");
    try {
      knee = spectrum::knee_frequency(x, sv, sc.fit_low * wc, sc.fit_high * wc);
    } catch (const AnalysisError&) {
    }
    summary.rows.push_back({temps[k], vib_units(m, temps[k]), wc, knee, slope, plateau, tail,
                            spectrum::evaluate_spectrum(st.spectrum, 0.0) / kDebye2,
                            st.spectrum.variance / kDebye2, st.spectrum.mean_dipole / debye,
                            idx(st.spectrum.modes.size())});
    r.summary.push_back("T = " + num(temps[k]) + " K: 1/f-window slope " + num(slope) +
                        ", knee/omega_c " + num(knee / wc));
  }
  r.tables.push_back(std::move(summary));
  return r;
}

RunResult run_tempsweep(const config::RunConfig& cfg, const Model& m) {
  RunResult r;
  const auto& sc = cfg.spectrum;
  const double t_lo = resolve_temperature(sc.sweep_min, m.nu10);
  const double t_hi = resolve_temperature(sc.sweep_max, m.nu10);
  std::vector<double> temps(static_cast<std::size_t>(sc.sweep_points));
  for (int i = 0; i < sc.sweep_points; ++i)
    temps[static_cast<std::size_t>(i)] = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (sc.sweep_points - 1));
  const auto states = thermal_states(m, temps, sc.debye_cutoff);
  const std::vector<double> probe{0.0, 1.0, sc.arrhenius_omega, 100.0};
  Table t{"tempsweep",
          {{"kT/hnu10", ""}, {"T", "K"}, {"S_mu(0)", "D^2/Hz"}, {"S_mu(Gamma0)", "D^2/Hz"},
           {"S_mu(" + num(sc.arrhenius_omega) + " Gamma0)", "D^2/Hz"}, {"S_mu(100 Gamma0)", "D^2/Hz"}},
          {},
          model_notes(m)};
  std::vector<std::vector<double>> cols(probe.size());
  for (std::size_t k = 0; k < temps.size(); ++k) {
    std::vector<Cell> row{vib_units(m, temps[k]), temps[k]};
    for (std::size_t j = 0; j < probe.size(); ++j) {
      const double v = spectrum::evaluate_spectrum(states[k].spectrum, probe[j] * m.gamma0);
      cols[j].push_back(v);
      row.emplace_back(v / kDebye2);
    }
    t.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(t));

  Table a{"arrhenius",
          {{"omega/Gamma0", ""}, {"S_T", "D^2/Hz"}, {"T0", "K"}, {"kT0/U0", ""}, {"T0/(hnu10/k)", ""},
           {"rms_residual", ""}, {"points", ""}},
          {},
          {}};
  for (std::size_t j : {std::size_t{0}, std::size_t{2}}) {
    try {
      const auto f = spectrum::arrhenius_fit(temps, cols[j]);
      a.rows.push_back({probe[j], f.prefactor / kDebye2, f.activation,
                        kB * f.activation / m.params.depth, kB * f.activation / (hbar * m.nu10),
                        f.residual, idx(f.points)});
      r.summary.push_back("Arrhenius at " + num(probe[j]) + " Gamma0: T0 = " + num(f.activation) +
                          " K = " + num(kB * f.activation / m.params.depth) + " U0");
    } catch (const AnalysisError& e) {
      a.notes.push_back("omega = " + num(probe[j]) + " Gamma0: " + e.what());
    }
  }
  r.tables.push_back(std::move(a));

  // Location of the S(0) maximum and the high-T growth exponent at 100 Gamma0.
  const auto peak = std::max_element(cols[0].begin(), cols[0].end()) - cols[0].begin();
  Table s{"tempsweep_summary", {{"quantity", ""}, {"value", ""}}, {}, {}};
  s.rows.push_back({std::string("S(0) peak kT/hnu10"), vib_units(m, temps[static_cast<std::size_t>(peak)])});
  const double lo = 2.0 * hbar * m.nu10 / kB, hi = 6.0 * hbar * m.nu10 / kB;
  s.rows.push_back({std::string("slope of S(100 Gamma0) vs T over kT/hnu10 in [2,6]"), fit_or_nan(temps, cols[3], lo, hi)});
  r.tables.push_back(std::move(s));
  return r;
}

std::vector<trapnoise::SurfaceSample> mc_samples(const config::MonteCarloConfig& mc) {
  std::vector<trapnoise::SurfaceSample> samples(mc.n_seeds);
  parallel_for(mc.n_seeds, [&](std::size_t i) {
    samples[i] = trapnoise::sample_surface(mc.n_dipoles, mc.extent * mc.min_spacing,
                                           mc.min_spacing, mc.seed + i);
  });
  return samples;
}

trapnoise::TrapConfig trap_of(const config::TrapSettings& t) {
  trapnoise::TrapConfig c;
  c.distance = t.distance;
  c.trap_frequency = 2.0 * kPi * t.frequency;
  c.ion_mass = t.ion_mass;
  c.charge = t.charge;
  c.axis = t.axis;
  return c;
}

RunResult run_mc(const config::RunConfig& cfg) {
  RunResult r;
  const auto& mc = cfg.montecarlo;
  const auto samples = mc_samples(mc);
  const auto trap = trap_of(cfg.trap);
  std::vector<double> d;
  for (double x : mc.distances) d.push_back(x * mc.min_spacing);
  const double s_mu = kDebye2;  // 1 D^2/Hz
  const auto fit = trapnoise::distance_scaling_fit(samples, s_mu, trap, d);

  trapnoise::SurfaceSample single;
  single.extent = mc.extent * mc.min_spacing;
  single.min_spacing = mc.min_spacing;
  single.xs = {0.5 * single.extent};
  single.ys = {0.5 * single.extent};
  const auto single_fit = trapnoise::distance_scaling_fit(
      std::span<const trapnoise::SurfaceSample>(&single, 1), s_mu, trap, d, true);

  const double sigma = static_cast<double>(mc.n_dipoles) / (single.extent * single.extent);
  const double k = trapnoise::kernel_integral_constant();
  Table t{"mc_scaling",
          {{"d/d0", ""}, {"d", "m"}, {"S_E", "V^2/m^2/Hz"}, {"stderr", "V^2/m^2/Hz"}, {"n_seeds", ""},
           {"S_E_plane", "V^2/m^2/Hz"}, {"ratio", ""}, {"S_E_single", "V^2/m^2/Hz"}},
          {},
          {"S_mu = 1 D^2/Hz per dipole",
           "fitted exponent = " + num(fit.exponent) + " +- " + num(fit.stderr_),
           "single dipole exponent = " + num(single_fit.exponent) + " +- " + num(single_fit.stderr_),
           "plane constant K = " + num(k) + " (3/8 used for the surface-average estimate)"}};
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double plane = trapnoise::plane_field_noise(k, sigma, s_mu, d[i]);
    const auto& p = fit.points[i];
    t.rows.push_back({mc.distances[i], d[i], p.mean, p.stderr_, idx(p.samples), plane, p.mean / plane,
                      single_fit.points[i].mean});
  }
  r.tables.push_back(std::move(t));
  Table f{"mc_fit", {{"case", ""}, {"exponent", ""}, {"stderr", ""}}, {}, {}};
  f.rows.push_back({std::string("ensemble"), fit.exponent, fit.stderr_});
  f.rows.push_back({std::string("single dipole"), single_fit.exponent, single_fit.stderr_});
  r.tables.push_back(std::move(f));
  r.summary = {"distance exponent " + num(fit.exponent) + " +- " + num(fit.stderr_),
               "single dipole exponent " + num(single_fit.exponent)};
  return r;
}

RunResult run_heat(const config::RunConfig& cfg, const Model& m) {
  RunResult r;
  const auto temps = temperatures_of(cfg, m);
  const auto states = thermal_states(m, temps, cfg.spectrum.debye_cutoff);
  const auto trap = trap_of(cfg.trap);
  const double k = trapnoise::kernel_integral_constant();
  const double sigma = cfg.trap.coverage;
  Table t{"heat",
          {{"T", "K"}, {"kT/hnu10", ""}, {"omega_t/2pi", "Hz"}, {"S_mu", "D^2/Hz"},
           {"S_E", "V^2/m^2/Hz"}, {"omega*S_E", "V^2/m^2"}, {"ndot", "1/s"},
           {"S_E_plane", "V^2/m^2/Hz"}, {"ndot_plane", "1/s"}},
          {},
          {"S_E uses the constant 3/8; *_plane columns use K = " + num(k),
           "sigma = " + num(sigma) + " 1/m^2, d = " + num(cfg.trap.distance) + " m"}};
  for (std::size_t i = 0; i < temps.size(); ++i) {
    const double s_mu = spectrum::evaluate_spectrum(states[i].spectrum, trap.trap_frequency);
    const double se = trapnoise::analytic_field_noise(sigma, s_mu, trap.distance);
    const double sp = trapnoise::plane_field_noise(k, sigma, s_mu, trap.distance);
    t.rows.push_back({temps[i], vib_units(m, temps[i]), cfg.trap.frequency, s_mu / kDebye2, se,
                      trap.trap_frequency * se, trapnoise::heating_rate(trap, se), sp,
                      trapnoise::heating_rate(trap, sp)});
    r.summary.push_back("T = " + num(temps[i]) + " K: ndot = " + num(trapnoise::heating_rate(trap, se)) + " /s");
  }
  r.tables.push_back(std::move(t));
  return r;
}

struct Check {
  std::string name;
  double value;
  double limit;
  bool pass;
};

RunResult run_validate(const config::RunConfig& cfg, const Model& m) {
  RunResult r;
  std::vector<Check> checks;
  auto add = [&](std::string name, double value, double limit) {
    checks.push_back({std::move(name), value, limit, std::isfinite(value) && value <= limit});
  };

  bool constants_ok = true;
  try {
    units::check_constants();
  } catch (const Error&) {
    constants_ok = false;
  }
  add("constant table consistent", constants_ok ? 0.0 : 1.0, 0.0);

  {
    std::mt19937_64 rng(cfg.montecarlo.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> a(1003), b(1003), c(1003);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = u(rng), b[i] = u(rng), c[i] = u(rng);
    const auto& ref = kernels::table(kernels::Isa::scalar);
    const auto& act = kernels::table(kernels::active_isa());
    double mag = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) mag += std::abs(a[i] * b[i] * c[i]);
    add("SIMD dot3 vs scalar (" + std::string(kernels::isa_name(kernels::active_isa())) + ")",
        std::abs(ref.dot3(a.data(), b.data(), c.data(), a.size()) -
                 act.dot3(a.data(), b.data(), c.data(), a.size())) / mag,
        1e-13);
  }

  double ortho = 0.0;
  std::vector<double> one(m.states.z().size(), 1.0);
  for (std::size_t i = 0; i < m.states.size(); ++i)
    for (std::size_t j = i; j < m.states.size(); ++j)
      ortho = std::max(ortho, std::abs(m.states.integrate(i, j, one) - (i == j ? 1.0 : 0.0)));
  add("bound states orthonormal", ortho, 1e-8);

  const auto temps = temperatures_of(cfg, m);
  const auto states = thermal_states(m, temps, cfg.spectrum.debye_cutoff);
  std::vector<std::vector<Check>> per_t(temps.size());
  parallel_for(temps.size(), [&](std::size_t k) {
    const auto& st = states[k];
    const std::string tag = " at kT/hnu10=" + num(vib_units(m, temps[k]));
    auto& out = per_t[k];
    auto put = [&](std::string name, double value, double limit) {
      out.push_back({name + tag, value, limit, std::isfinite(value) && value <= limit});
    };
    const Eigen::VectorXd boltz = phonons::boltzmann_weights(m.states.energies(), temps[k]);
    double rel = 0.0;
    for (Eigen::Index i = 0; i < boltz.size(); ++i)
      if (boltz(i) > 0.0) rel = std::max(rel, std::abs(st.populations(i) - boltz(i)) / boltz(i));
    put("stationary state equals Boltzmann (entrywise)", rel, 1e-10);

    double total = 0.0;
    for (const auto& md : st.spectrum.modes) total += md.weight;
    put("mode weights sum to variance", std::abs(total - st.spectrum.variance) / st.spectrum.variance, 1e-8);
    put("sum rule", std::abs(spectrum::integrated_power(st.spectrum) / st.spectrum.variance - 1.0), 1e-2);

    const auto x = spectrum::log_grid(1e-2, 1e3, 10);
    std::vector<double> w(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) w[j] = x[j] * m.gamma0;
    const auto spec = spectrum::evaluate_spectrum(st.spectrum, w);
    const auto ode = spectrum::spectrum_via_ode(st.rates, st.populations, m.ladder, w);
    double dev = 0.0, mono = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      dev = std::max(dev, std::abs(ode[j] / spec[j] - 1.0));
      if (j > 0) mono = std::max(mono, (spec[j] - spec[j - 1]) / spec[j - 1]);
    }
    put("ODE and mode spectra agree", dev, 0.02);
    put("spectrum non-increasing", mono, 0.0);
  });
  for (auto& v : per_t)
    for (auto& c : v) checks.push_back(std::move(c));

  const double k = trapnoise::kernel_integral_constant();
  add("plane kernel constant vs 3 pi/4", std::abs(k / (0.75 * kPi) - 1.0), 1e-8);

  Table t{"validate", {{"check", ""}, {"value", ""}, {"limit", ""}, {"status", ""}}, {}, {}};
  for (const auto& c : checks) {
    t.rows.push_back({c.name, c.value, c.limit, std::string(c.pass ? "PASS" : "FAIL")});
    r.summary.push_back(std::string(c.pass ? "PASS " : "FAIL ") + c.name + " (" + num(c.value) + " <= " + num(c.limit) + ")");
    if (!c.pass) r.ok = false;
  }
  r.tables.push_back(std::move(t));
  return r;
}

}  // namespace

RunResult run_pipeline(const config::RunConfig& cfg, Command command) {
  config::validate(cfg);
  if (command == Command::mc_scaling) return run_mc(cfg);
  const Model m = build_model(cfg);
  switch (command) {
    case Command::states: return run_states(m);
    case Command::dipoles: return run_dipoles(m);
    case Command::rates: return run_rates(cfg, m);
    case Command::spectrum: return run_spectrum(cfg, m);
    case Command::tempsweep: return run_tempsweep(cfg, m);
    case Command::heat: return run_heat(cfg, m);
    case Command::validate: return run_validate(cfg, m);
    case Command::mc_scaling: break;
  }
  return run_mc(cfg);
}

}  // namespace adnoise::pipeline
