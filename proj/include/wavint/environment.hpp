#pragma once

// Horizontally stratified fluid waveguide: layers with depth-dependent
// sound speed, density and attenuation, a pressure-release surface, a bottom
// condition and the source. Units: m, m/s, g/cm^3, dB/wavelength, Hz.

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "wavint/spectral.hpp"
#include "wavint/types.hpp"

namespace wavint {

struct ConstantProfile {
  double value = 0.0;
  bool operator==(const ConstantProfile&) const = default;
};

/// Samples (depth, value), depths strictly increasing; linear in between.
struct TabulatedProfile {
  std::vector<double> depths;
  std::vector<double> values;
  bool operator==(const TabulatedProfile&) const = default;
};

/// c(z) = axis_speed * (1 + epsilon * (zt - 1 + exp(-zt))), zt = (z - axis_depth) / scale.
struct MunkProfile {
  double axis_depth = 1300.0;
  double scale = 650.0;
  double epsilon = 0.00737;
  double axis_speed = 1500.0;
  bool operator==(const MunkProfile&) const = default;
};

/// c(z) = 1 / sqrt(a z + b), a and b in s^2/m^3.
struct PseudolinearProfile {
  double a = 0.0;
  double b = 0.0;
  bool operator==(const PseudolinearProfile&) const = default;
};

class Profile {
 public:
  using Variant = std::variant<ConstantProfile, TabulatedProfile, MunkProfile, PseudolinearProfile>;

  Profile() : Profile(ConstantProfile{}) {}
  Profile(Variant v);  // NOLINT(google-explicit-constructor)

  static Profile constant(double value) { return Profile(ConstantProfile{value}); }
  static Profile tabulated(std::vector<double> depths, std::vector<double> values);

  double evaluate(double z) const;

  /// True when evaluate(z) is defined for every z in [z_top, z_bot].
  bool covers(double z_top, double z_bot) const;

  const Variant& variant() const noexcept { return v_; }
  bool operator==(const Profile&) const = default;

 private:
  Variant v_;
};

struct Layer {
  double z_top = 0.0;
  double z_bot = 0.0;
  Profile c;
  Profile rho;
  Profile alpha;
  int order = 10;  ///< spectral truncation order N

  double thickness() const noexcept { return z_bot - z_top; }
  /// z_top -> +1, z_bot -> -1.
  double to_local(double z) const noexcept;
  double to_depth(double t) const noexcept;
  /// dt/dz of the map above.
  double local_scale() const noexcept { return 2.0 / (z_top - z_bot); }

  bool operator==(const Layer&) const = default;
};

enum class BottomKind { pressure_release, rigid, halfspace };

struct HalfSpace {
  double c = 0.0;
  double rho = 0.0;
  double alpha = 0.0;
  bool operator==(const HalfSpace&) const = default;
};

struct BottomCondition {
  BottomKind kind = BottomKind::pressure_release;
  HalfSpace halfspace;  ///< used when kind == halfspace
  bool operator==(const BottomCondition&) const = default;
};

enum class SourceGeometry { point, line };

struct Source {
  SourceGeometry geometry = SourceGeometry::point;
  double depth = 0.0;
  double frequency = 0.0;
  bool operator==(const Source&) const = default;
};

struct Environment {
  std::vector<Layer> layers;
  BottomCondition bottom;
  Source source;
  /// Index i tags the interface between layers[i] and layers[i+1] as the
  /// source interface. Set by insert_source_interface.
  std::optional<std::size_t> source_interface;

  double total_depth() const { return layers.empty() ? 0.0 : layers.back().z_bot; }
  std::size_t interface_count() const { return layers.empty() ? 0 : layers.size() - 1; }

  /// Layer holding depth z; a depth on an interface belongs to the layer above.
  std::size_t layer_at(double z) const;

  double sound_speed(double z) const { return layers[layer_at(z)].c.evaluate(z); }
  double density(double z) const { return layers[layer_at(z)].rho.evaluate(z); }
  double attenuation(double z) const { return layers[layer_at(z)].alpha.evaluate(z); }

  bool operator==(const Environment&) const = default;
};

/// Throws std::invalid_argument describing the first violated invariant.
void validate(const Environment& env);

/// k = (2 pi f / c)(1 + i eta alpha), eta = 1 / (40 pi log10 e).
Complex complex_wavenumber(double c, double alpha, double f);

/// Splits the layer containing the source depth, or tags an existing
/// interface when the source sits on one.
Environment insert_source_interface(Environment env);

struct LayerSpectra {
  spectral::SpectralCoeffs rho_hat;
  spectral::SpectralCoeffs inv_rho_hat;
  spectral::SpectralCoeffs k2_hat;
};

/// Chebyshev coefficients of rho, 1/rho and k^2 sampled at the layer's CGL nodes.
LayerSpectra layer_profile_spectra(const Layer& layer, double frequency);

}  // namespace wavint
