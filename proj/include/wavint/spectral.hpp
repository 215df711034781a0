#pragma once

// Chebyshev polynomial toolkit on [-1, 1]: Gauss-Chebyshev-Lobatto nodes,
// discrete transforms, and the coefficient-space operators used by the
// Tau discretization (derivative and product matrices).

#include <span>
#include <vector>

#include "wavint/types.hpp"

namespace wavint::spectral {

/// Coefficients of T_0..T_N. Always non-empty and finite.
class SpectralCoeffs {
 public:
  explicit SpectralCoeffs(CVector coeffs);

  static SpectralCoeffs zeros(int order);

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const CVector& values() const noexcept { return coeffs_; }
  Complex operator[](int i) const { return coeffs_(i); }

 private:
  CVector coeffs_;
};

/// Dense (N+1)x(N+1) operator acting on SpectralCoeffs of order N.
class SpectralMatrix {
 public:
  explicit SpectralMatrix(CMatrix entries);

  int order() const noexcept { return static_cast<int>(entries_.rows()) - 1; }
  const CMatrix& entries() const noexcept { return entries_; }

  SpectralCoeffs apply(const SpectralCoeffs& x) const;

 private:
  CMatrix entries_;
};

/// cos(pi j / N), j = 0..N. Throws std::invalid_argument for N < 1.
std::vector<double> cgl_nodes(int n);

/// Discrete Chebyshev transform of samples taken at cgl_nodes(samples.size()-1).
/// Exact for polynomials of degree <= N.
SpectralCoeffs chebyshev_forward(std::span<const Complex> samples);
SpectralCoeffs chebyshev_forward(std::span<const double> samples);

/// Sum of coeffs_i T_i(t) by Clenshaw recurrence. |t| may exceed 1 by 1e-12.
Complex chebyshev_evaluate(const SpectralCoeffs& coeffs, double t);

/// Coefficients of d/dt of the series. D(i,j) = 2j/c_i for j > i, i+j odd.
SpectralMatrix derivative_matrix(int n);

/// C_v with (v psi)^ ~= C_v psi^, using T_m T_n = (T_{m+n} + T_{|m-n|}) / 2.
/// Contributions landing on indices above N are dropped.
SpectralMatrix product_matrix(const SpectralCoeffs& v);

/// T_i(+1) = 1 row, used for conditions at a layer top.
CRowVector top_endpoint_row(int n);
/// T_i(-1) = (-1)^i row, used for conditions at a layer bottom.
CRowVector bottom_endpoint_row(int n);

}  // namespace wavint::spectral
