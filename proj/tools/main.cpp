#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "manifest.hpp"
#include "plate/errors.hpp"

using namespace plate;

int main(int argc, char** argv) {
  CLI::App app{"Backstepping boundary control and observers for a fluttering plate, per Fourier mode",
               "plate_stab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, scenario, modes, dt, dx, T, out, jobs;
  bool quick = false;
  app.add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_option("--scenario", scenario, "open-loop, state-feedback or output-feedback");
  app.add_option("--modes", modes, "highest Fourier mode N (modes 0..N)");
  app.add_option("--dt", dt, "time step");
  app.add_option("--dx", dx, "output grid spacing in x");
  app.add_option("--T", T, "time horizon");
  app.add_option("--out", out, "output directory (falls back to $PLATE_STAB_OUT)");
  app.add_option("--jobs", jobs, "worker threads (default: one per mode)");
  app.add_flag("--quick", quick, "reduced kernel grid (m = 21)");

  CLI::App* kernels = app.add_subcommand("kernels", "solve and export kernel and gain tables");
  CLI::App* simulate = app.add_subcommand("simulate", "run a scenario and write CSV reports");
  CLI::App* verify = app.add_subcommand("verify", "run the property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kExitOk : cli::kExitConfig;
  }

  try {
    KeyValueConfig kv = config_path.empty()
                            ? KeyValueConfig::parse(to_key_value_text(reference_run_config()),
                                                    "<reference profile>")
                            : KeyValueConfig::load(config_path);
    const std::pair<const char*, const std::string*> flags[] = {
        {"scenario", &scenario}, {"modes", &modes}, {"dt", &dt},
        {"dx", &dx},             {"T", &T},         {"jobs", &jobs}};
    for (const auto& [key, value] : flags) {
      if (!value->empty()) kv.set(key, *value);
    }
    if (quick) kv.set("kernel_m", "21");
    const RunConfig cfg = run_config_from(kv);

    if (out.empty()) {
      const char* env = std::getenv("PLATE_STAB_OUT");
      out = env != nullptr && *env != '\0' ? env : "plate_out";
    }
    CLI::App* sub = app.get_subcommands().front();
    const cli::RunManifest manifest = cli::make_manifest(sub->get_name(), cfg, out);
    cli::write_manifest(manifest);
    std::cout << "manifest " << manifest.hash << " -> " << (manifest.out_dir / "manifest.txt").string()
              << '\n';

    if (sub == kernels) return cli::cmd_kernels(cfg, out, manifest.hash, std::cout);
    if (sub == simulate) return cli::cmd_simulate(cfg, out, manifest.hash, std::cout);
    if (sub == verify) return cli::cmd_verify(cfg, out, manifest.hash, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return cli::kExitConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "numerical divergence: " << e.what() << '\n';
    return cli::kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitConfig;
  }
  return cli::kExitConfig;
}
