#pragma once

// Wavenumber integration: sampling of the offset contour k - i eps, the
// parallel Green-function sweep over it, rectangular-rule inverse Hankel
// (point source) or Fourier (line source) synthesis, and transmission loss.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wavint/environment.hpp"
#include "wavint/grid.hpp"
#include "wavint/types.hpp"

namespace wavint::kspace {

struct WavenumberGrid {
  double k_min = 0.0;
  double k_max = 0.0;
  int count = 0;        ///< M
  double spacing = 0.0; ///< (k_max - k_min) / (M - 1)
  double offset = 0.0;  ///< eps = 3 dk / (2 pi log10 e)

  Complex sample(int j) const { return {k_min + j * spacing, -offset}; }
  /// Range beyond which the periodic images of the rectangular rule overlap.
  double aliasing_range() const { return 2.0 * kPi / spacing; }
};

/// Throws std::invalid_argument unless M >= 2, k_max > k_min >= 0 and the
/// contour offset is below (k_max - k_min) / 100.
WavenumberGrid make_grid(double k_min, double k_max, int count);

struct GreensGrid {
  CMatrix values;  ///< values(j, iz) = Psi(k_j - i eps, z_iz), M x nz
  std::vector<double> depths;
  WavenumberGrid grid;
  std::vector<int> repaired;          ///< wavenumber indices filled by interpolation
  std::vector<std::string> warnings;
};

/// Worker count used when 0 is requested.
unsigned default_threads();

/// Solves the depth problem at every grid wavenumber. env must carry the
/// source interface tag. Rows are independent of the worker count. Singular
/// solves are replaced by linear interpolation of their neighbours; more
/// than 1% singular rows raises NumericalError.
GreensGrid greens_sweep(const Environment& env, const WavenumberGrid& grid, std::span<const double> depths,
                        unsigned threads = 0);

/// psi(r, z) = dk sum_j Psi_j(z) J0[(k_j - i eps) r] (k_j - i eps).
FieldGrid synthesize_point(const GreensGrid& greens, std::span<const double> ranges, unsigned threads = 0);

/// psi(x, z) = 2 dk sum_j Psi_j(z) cos[(k_j - i eps) x].
FieldGrid synthesize_line(const GreensGrid& greens, std::span<const double> ranges, unsigned threads = 0);

/// Dispatches on geometry.
FieldGrid synthesize(const GreensGrid& greens, std::span<const double> ranges, SourceGeometry geometry,
                     unsigned threads = 0);

enum class Normalization {
  standard,      ///< 1 m free-field pressure of the source geometry
  line_h0_at_1,  ///< line source referenced to i rho_s w^2 H0^(1)(1) / 4
};

/// Reference pressure p0 at 1 m.
Complex reference_pressure(const Environment& env, SourceGeometry geometry, Normalization norm);

/// p = rho(z) w^2 psi, TL = -20 log10 |p / p0|. Zero pressure gives +inf.
TLGrid pressure_and_tl(const FieldGrid& field, const Environment& env,
                       Normalization norm = Normalization::standard);

}  // namespace wavint::kspace
