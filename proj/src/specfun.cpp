#include "wavint/specfun.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wavint::specfun {

namespace {

constexpr double kSeriesRadius = 12.0;
constexpr double kEulerGamma = 0.57721566490153286061;

// sum_k (-z^2/4)^k / (k!)^2
template <typename T>
T j0_series(T z) {
  const T q = -0.25 * z * z;
  T term = 1.0;
  T sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / static_cast<double>(k * k);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && k > 4) break;
  }
  return sum;
}

// Amplitude functions of the Hankel expansion, order 0.
// u_k = prod_{j<=k} (2j-1)^2 / (k! (8z)^k); P = sum (-1)^k u_2k, Q = sum (-1)^(k+1) u_(2k+1).
// The series is asymptotic, so summation stops at the smallest term.
template <typename T>
void hankel_pq(T z, T& p, T& q) {
  p = 1.0;
  q = 0.0;
  T u = 1.0;
  double previous = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    u *= (odd * odd) / (8.0 * k * z);
    const double mag = std::abs(u);
    if (mag > previous) break;
    previous = mag;
    if (k % 2 == 0) {
      p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * u;
    } else {
      q += (((k - 1) / 2) % 2 == 0 ? -1.0 : 1.0) * u;
    }
    if (mag < 1e-17) break;
  }
}

}  // namespace

Complex bessel_j0(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::invalid_argument("bessel_j0: non-finite argument");
  }
  if (std::abs(z.imag()) > kMaxImagArgument) {
    std::ostringstream msg;
    msg << "bessel_j0: |Im z| = " << std::abs(z.imag()) << " exceeds " << kMaxImagArgument;
    throw std::invalid_argument(msg.str());
  }
  // J0 is even; keep the asymptotic branch in the right half-plane.
  if (z.real() < 0.0) z = -z;
  if (std::abs(z) <= kSeriesRadius) return j0_series(z);

  Complex p, q;
  hankel_pq(z, p, q);
  const Complex chi = z - 0.25 * kPi;
  return std::sqrt(2.0 / (kPi * z)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_j0(double x) {
  x = std::abs(x);
  if (x <= kSeriesRadius) return j0_series(x);
  double p, q;
  hankel_pq(x, p, q);
  const double chi = x - 0.25 * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_y0(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument("bessel_y0: argument must be positive and finite");
  }
  if (x <= kSeriesRadius) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double harmonic = 0.0;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
      term *= -q / static_cast<double>(k * k);
      harmonic += 1.0 / k;
      const double contribution = -term * harmonic;
      sum += contribution;
      if (std::abs(contribution) <= 1e-17 * std::abs(sum) && k > 4) break;
    }
    return (2.0 / kPi) * ((std::log(0.5 * x) + kEulerGamma) * j0_series(x) + sum);
  }
  double p, q;
  hankel_pq(x, p, q);
  const double chi = x - 0.25 * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::sin(chi) + q * std::cos(chi));
}

Complex hankel1_0(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument("hankel1_0: argument must be positive and finite");
  }
  return {bessel_j0(x), bessel_y0(x)};
}

Complex hankel1_0_imaginary_axis(double y) {
  if (!(y > 0.0)) throw std::invalid_argument("hankel1_0_imaginary_axis: y must be positive");
  return Complex(0.0, -2.0 / kPi) * std::cyl_bessel_k(0.0, y);
}

}  // namespace wavint::specfun
