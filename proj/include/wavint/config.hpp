#pragma once

// Run configuration: a line-oriented key/value text format with sections.
//
//   # comment
//   [source]
//   geometry = point            # point | line
//   depth = 36
//   frequency = 20
//
//   [spectral]
//   order = 10                  # default N for layers without their own
//
//   [layer]                     # repeat once per layer, top to bottom
//   top = 0
//   bottom = 100
//   c = 1500                    # constant, munk(...), pseudolinear(a, b), table(z:v, ...)
//   rho = 1
//   alpha = 0
//   order = 12                  # optional
//
//   [bottom]
//   type = pressure-release     # pressure-release | rigid | halfspace
//   c = 2000                    # halfspace only
//   rho = 1.5
//   alpha = 0.5
//
//   [wavenumber]
//   interval = auto             # auto ([0, 2 k0]) or explicit
//   k_min = 0                   # explicit only
//   k_max = 0.17
//   count = 2048
//
//   [output]
//   r_min = 1
//   r_max = 3000
//   nr = 3000
//   nz = 401                    # uniform over [0, H]; or depths = 0, 10, 46
//   products = spectrum, tl_grid, tl_line
//   probe_depths = 46
//   tl_binary = false
//   normalization = standard    # standard | line-h0-at-1
//
// Keys may appear in any order inside a section. Unknown sections or keys
// are errors.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wavint/environment.hpp"
#include "wavint/kspace.hpp"

namespace wavint::config {

struct LayerSpec {
  double z_top = 0.0;
  double z_bot = 0.0;
  Profile c;
  Profile rho = Profile::constant(1.0);
  Profile alpha = Profile::constant(0.0);
  std::optional<int> order;
  bool operator==(const LayerSpec&) const = default;
};

struct WavenumberSpec {
  bool automatic = true;  ///< [0, 2 k0], k0 the largest Re k in the water column
  double k_min = 0.0;
  double k_max = 0.0;
  int count = 0;
  bool operator==(const WavenumberSpec&) const = default;
};

struct OutputSpec {
  double r_min = 1.0;
  double r_max = 0.0;
  int nr = 0;
  std::vector<double> depths;  ///< explicit receiver depths; empty when nz is used
  int nz = 0;                  ///< uniform depths over [0, H]
  bool spectrum = false;
  bool tl_grid = false;
  bool tl_line = false;
  std::vector<double> probe_depths;
  bool tl_binary = false;
  kspace::Normalization normalization = kspace::Normalization::standard;
  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  Source source;
  int order = 10;
  std::vector<LayerSpec> layers;
  BottomCondition bottom;
  WavenumberSpec wavenumber;
  OutputSpec output;
  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates. Throws ConfigError naming the offending key.
RunConfig parse(std::istream& in);
RunConfig parse_string(const std::string& text);
RunConfig load(const std::string& path);

/// Canonical text form; parse(serialize(c)) == c.
std::string serialize(const RunConfig& config);

/// Throws ConfigError on the first violated constraint.
void validate(const RunConfig& config);

/// Environment with every layer's order resolved; no source interface yet.
Environment build_environment(const RunConfig& config);

/// Resolves the wavenumber interval and builds the sampling grid.
kspace::WavenumberGrid build_grid(const RunConfig& config);

std::vector<double> receiver_depths(const RunConfig& config);
std::vector<double> receiver_ranges(const RunConfig& config);

/// Largest real part of k over the CGL nodes of every layer.
double max_real_wavenumber(const Environment& env);

}  // namespace wavint::config
