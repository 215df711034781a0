#pragma once

// Closed-form oracles and benchmark profiles used to check the solver:
// ideal (pressure-release surface, free or rigid bottom) waveguide modes and
// fields, the Munk and pseudolinear sound-speed profiles, the mean absolute
// TL difference, and peak picking on wavenumber spectra.

#include <cstddef>
#include <span>
#include <vector>

#include "wavint/environment.hpp"
#include "wavint/grid.hpp"

namespace wavint::reference {

enum class Seabed { free, rigid };

struct ModalSet {
  std::vector<double> kr;  ///< horizontal wavenumbers, descending
  std::vector<double> kz;  ///< vertical wavenumbers
  Seabed seabed = Seabed::free;
};

/// Propagating modes of a homogeneous layer of depth H with wavenumber k.
/// free: kz = m pi / H; rigid: kz = (m - 1/2) pi / H.
ModalSet ideal_modes(double depth, double k, Seabed seabed);

/// Vertical wavenumber of mode m (1-based).
double ideal_vertical_wavenumber(double depth, int m, Seabed seabed);

/// TL of the point-source modal sum
///   p = (2 pi i / H) sum_m sin(kz zs) sin(kz z) H0^(1)(kr r)
/// over the first n_modes modes, evanescent ones included. The sum is
/// already referenced to the 1 m free-field pressure, so TL = -20 log10 |p|.
TLGrid ideal_field(double depth, double k, double source_depth, Seabed seabed,
                   std::span<const double> ranges, std::span<const double> depths, int n_modes);

double munk_profile(double z, const MunkProfile& params = {});

/// 1 / sqrt(a z + b). Throws std::invalid_argument when a z + b <= 0.
double pseudolinear_profile(double z, double a, double b);

struct TlErrorResult {
  double mean = 0.0;          ///< mean |TL - TL_ref| over compared points, dB
  std::size_t compared = 0;
  std::size_t excluded = 0;   ///< points where either grid is clamped or non-finite
};

/// Mean absolute TL difference. Throws std::invalid_argument on shape mismatch.
TlErrorResult tl_error(const RMatrix& tl, const RMatrix& reference);
TlErrorResult tl_error(const TLGrid& tl, const TLGrid& reference);

/// Default relative height below which spectrum maxima are ignored.
inline constexpr double kDefaultPeakThreshold = 0.01;

/// Local maxima of a sampled magnitude spectrum above threshold_fraction * max,
/// refined by a parabola through the log-magnitudes of the three samples
/// around each maximum. Returned in descending wavenumber order.
std::vector<double> spectrum_peaks(std::span<const double> wavenumbers,
                                   std::span<const double> magnitude,
                                   double threshold_fraction = kDefaultPeakThreshold);

}  // namespace wavint::reference
