#pragma once

// End-to-end run: environment -> Green-function sweep -> synthesis -> TL,
// with the declared products written to an output directory.
//
// Files (depth labels use the shortest round-trip decimal form):
//   spectrum_z<depth>.csv  k,abs_psi,re_psi,im_psi
//   tl_grid.csv            header "z,<r0>,<r1>,..." then one row per depth
//   tl_grid.bin            see write_tl_binary
//   tl_line_z<depth>.csv   r,tl
//   tl_oracle.csv          analytic reference grid, same layout as tl_grid.csv
//   summary.txt            peaks, TL extremes, oracle error, warnings
// TL at or above 300 dB (including zero pressure) is written as 300.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wavint/config.hpp"
#include "wavint/grid.hpp"
#include "wavint/reference.hpp"

namespace wavint::pipeline {

struct RunOptions {
  unsigned threads = 0;  ///< 0: hardware concurrency
  std::filesystem::path out_dir = "out";
  std::optional<reference::Seabed> oracle;
};

struct StageTime {
  std::string stage;
  double seconds = 0.0;
};

struct DepthPeaks {
  double depth = 0.0;
  std::vector<double> wavenumbers;
};

struct RunResult {
  std::vector<DepthPeaks> peaks;
  std::optional<double> tl_min;
  std::optional<double> tl_max;
  std::optional<reference::TlErrorResult> oracle_error;
  std::vector<std::string> warnings;
  std::vector<StageTime> timings;
  std::vector<std::filesystem::path> files;
  std::string summary;  ///< contents of summary.txt
};

/// Throws ConfigError for configuration problems (including an oracle that
/// does not match the environment) and NumericalError for solver failures.
RunResult run(const config::RunConfig& config, const RunOptions& options);

/// Per-stage wall times, one line each.
std::string format_timings(const RunResult& result);

/// 32-byte header ("WINTTL01", int64 nr, int64 nz, 8 zero bytes) followed by
/// nz * nr little-endian doubles, row-major by depth. Values are clamped.
void write_tl_binary(const std::filesystem::path& path, const TLGrid& tl);
TLGrid read_tl_binary(const std::filesystem::path& path);

/// Analytic ideal-waveguide TL on the grid of tl. The environment must be a
/// single isovelocity, lossless layer whose bottom matches seabed.
TLGrid ideal_oracle(const Environment& env, reference::Seabed seabed, const std::vector<double>& ranges,
                    const std::vector<double>& depths);

}  // namespace wavint::pipeline
