#pragma once

#include <vector>

#include "wavint/environment.hpp"
#include "wavint/types.hpp"

namespace wavint {

/// TL values at or above this level are treated as "no signal" and written
/// out as this value.
inline constexpr double kTlClamp = 300.0;

/// Complex displacement potential (or pressure) sampled on ranges x depths.
struct FieldGrid {
  CMatrix values;  ///< values(ir, iz)
  std::vector<double> ranges;
  std::vector<double> depths;
  SourceGeometry geometry = SourceGeometry::point;
};

/// Transmission loss in dB on ranges x depths. Zero pressure maps to +inf.
struct TLGrid {
  RMatrix values;  ///< values(ir, iz)
  std::vector<double> ranges;
  std::vector<double> depths;
};

}  // namespace wavint
