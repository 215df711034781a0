#pragma once

#include "wavint/types.hpp"

namespace wavint::specfun {

/// Largest |Im z| accepted by bessel_j0. Beyond it J0 grows like e^|Im z|
/// and the synthesis kernel is no longer meaningful.
inline constexpr double kMaxImagArgument = 10.0;

/// J0(z) for complex z with |Im z| <= kMaxImagArgument.
/// Power series for |z| <= 12, Hankel asymptotic expansion beyond.
Complex bessel_j0(Complex z);

/// J0(x) for real x.
double bessel_j0(double x);

/// Y0(x) for x > 0.
double bessel_y0(double x);

/// H0^(1)(x) = J0(x) + i Y0(x) for x > 0.
Complex hankel1_0(double x);

/// H0^(1)(i y) = -(2i/pi) K0(y) for y > 0; decays like e^-y.
Complex hankel1_0_imaginary_axis(double y);

}  // namespace wavint::specfun
