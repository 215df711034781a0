// Command-line driver: reads a run configuration, executes the pipeline and
// writes the requested products.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 configuration error,
// 3 numerical failure.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wavint/config.hpp"
#include "wavint/error.hpp"
#include "wavint/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Wavenumber-integration sound propagation with a Chebyshev-Tau depth solver"};

  std::string config_path;
  unsigned threads = 0;
  std::string out_dir = "./out";
  std::string oracle;
  bool quiet = false;

  app.add_option("--config", config_path, "Run configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--threads", threads, "Worker threads (default: hardware parallelism)");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--oracle", oracle, "Write the analytic ideal-waveguide grid and its TL error")
      ->check(CLI::IsMember({"ideal-free", "ideal-rigid"}));
  app.add_flag("--quiet", quiet, "Suppress the summary on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const wavint::config::RunConfig cfg = wavint::config::load(config_path);
    wavint::pipeline::RunOptions options;
    options.threads = threads;
    options.out_dir = out_dir;
    if (oracle == "ideal-free") options.oracle = wavint::reference::Seabed::free;
    if (oracle == "ideal-rigid") options.oracle = wavint::reference::Seabed::rigid;

    const wavint::pipeline::RunResult result = wavint::pipeline::run(cfg, options);
    if (!quiet) {
      std::cout << result.summary << wavint::pipeline::format_timings(result);
      for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
    }
    return 0;
  } catch (const wavint::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const wavint::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
