#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include "adnoise/config.hpp"
#include "adnoise/errors.hpp"
#include "adnoise/pipeline.hpp"

namespace {

std::vector<adnoise::config::Temperature> parse_temperature_list(const std::string& text) {
  std::vector<adnoise::config::Temperature> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    out.push_back(adnoise::config::parse_temperature(item, "--temperature"));
  if (out.empty()) throw adnoise::ConfigError("--temperature: empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adatom dipole-fluctuation noise and ion heating"};
  app.set_version_flag("--version", std::string(ADNOISE_VERSION));
  app.require_subcommand(1, 1);

  std::string config_path, preset, output, temperatures;
  std::uint64_t seed = 0;
  const std::map<std::string, std::string> help{
      {"states", "bound-state energies, level spacings and grid diagnostics"},
      {"dipoles", "dipole ladder and its integrand check"},
      {"rates", "phonon transition rates and stationary populations per temperature"},
      {"spectrum", "dipole noise spectra, slopes and knee per temperature"},
      {"tempsweep", "spectrum at fixed frequencies versus temperature, Arrhenius fits"},
      {"mc-scaling", "Monte Carlo field noise versus ion distance"},
      {"heat", "field noise and heating rate at the trap frequency"},
      {"validate", "run the built-in consistency checks"},
  };
  for (const std::string& name : adnoise::pipeline::command_names()) {
    const auto it = help.find(name);
    CLI::App* sub = app.add_subcommand(name, it == help.end() ? "" : it->second);
    sub->add_option("--config", config_path, "YAML configuration file")->required();
    sub->add_option("--preset", preset, "override the adsorption preset");
    sub->add_option("--output", output, "output directory");
    sub->add_option("--seed", seed, "Monte Carlo base seed");
    sub->add_option("--temperature", temperatures,
                    "comma-separated temperatures, e.g. \"40 K,2 hnu10\"");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(adnoise::ErrorKind::configuration);
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    const auto command = adnoise::pipeline::parse_command(sub->get_name());
    auto cfg = adnoise::config::load_config(config_path, preset);
    if (sub->count("--output")) cfg.output = output;
    if (sub->count("--seed")) cfg.montecarlo.seed = seed;
    if (sub->count("--temperature")) cfg.spectrum.temperatures = parse_temperature_list(temperatures);
    adnoise::config::validate(cfg);

    const auto result = adnoise::pipeline::run_pipeline(cfg, command);
    for (const auto& path : adnoise::pipeline::write_outputs(result, cfg, command))
      std::cout << "wrote " << path << '\n';
    for (const auto& line : result.summary) std::cout << line << '\n';
    if (!result.ok) {
      std::cerr << "adnoise: validation failed\n";
      return static_cast<int>(adnoise::ErrorKind::numerical);
    }
    return 0;
  } catch (const adnoise::Error& e) {
    std::cerr << "adnoise " << sub->get_name() << ": " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "adnoise " << sub->get_name() << ": " << e.what() << '\n';
    return static_cast<int>(adnoise::ErrorKind::configuration);
  }
}
