#include "wavint/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wavint::spectral {

namespace {

bool all_finite(const CVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  }
  return true;
}

// cos(pi * m / n) for m = 0..2n-1, indexed modulo 2n so that products i*j
// never lose accuracy to large angles.
std::vector<double> cosine_table(int n) {
  std::vector<double> table(2 * static_cast<std::size_t>(n));
  for (int m = 0; m < 2 * n; ++m) table[m] = std::cos(kPi * m / n);
  return table;
}

}  // namespace

SpectralCoeffs::SpectralCoeffs(CVector coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() == 0) throw std::invalid_argument("SpectralCoeffs: empty coefficient vector");
  if (!all_finite(coeffs_)) throw std::invalid_argument("SpectralCoeffs: non-finite coefficient");
}

SpectralCoeffs SpectralCoeffs::zeros(int order) {
  if (order < 0) throw std::invalid_argument("SpectralCoeffs: negative order");
  return SpectralCoeffs(CVector::Zero(order + 1));
}

SpectralMatrix::SpectralMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("SpectralMatrix: must be square and non-empty");
  }
}

SpectralCoeffs SpectralMatrix::apply(const SpectralCoeffs& x) const {
  if (x.order() != order()) {
    throw std::invalid_argument("SpectralMatrix::apply: order mismatch (" +
                                std::to_string(order()) + " vs " + std::to_string(x.order()) + ")");
  }
  return SpectralCoeffs(entries_ * x.values());
}

std::vector<double> cgl_nodes(int n) {
  if (n < 1) throw std::invalid_argument("cgl_nodes: N must be >= 1");
  std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) nodes[j] = std::cos(kPi * j / n);
  // Pin the symmetric values that cos() only approximates.
  nodes[0] = 1.0;
  nodes[n] = -1.0;
  if (n % 2 == 0) nodes[n / 2] = 0.0;
  for (int j = 1; j < (n + 1) / 2; ++j) nodes[n - j] = -nodes[j];
  return nodes;
}

SpectralCoeffs chebyshev_forward(std::span<const Complex> samples) {
  if (samples.size() < 2) throw std::invalid_argument("chebyshev_forward: need at least 2 samples");
  for (const Complex& s : samples) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
      throw std::invalid_argument("chebyshev_forward: non-finite sample");
    }
  }
  const int n = static_cast<int>(samples.size()) - 1;
  const std::vector<double> cosines = cosine_table(n);

  // Lobatto weights: endpoints carry half weight in the discrete inner product,
  // and the i = N coefficient is normalized like i = 0.
  CVector weighted(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double cj = (j == 0 || j == n) ? 2.0 : 1.0;
    weighted(j) = samples[j] / cj;
  }

  CVector coeffs(n + 1);
  for (int i = 0; i <= n; ++i) {
    Complex sum = 0.0;
    for (int j = 0; j <= n; ++j) {
      const int m = static_cast<int>((static_cast<long long>(i) * j) % (2LL * n));
      sum += weighted(j) * cosines[m];
    }
    const double ci = (i == 0 || i == n) ? 2.0 : 1.0;
    coeffs(i) = sum * (2.0 / (n * ci));
  }
  return SpectralCoeffs(std::move(coeffs));
}

SpectralCoeffs chebyshev_forward(std::span<const double> samples) {
  std::vector<Complex> c(samples.begin(), samples.end());
  return chebyshev_forward(std::span<const Complex>(c));
}

Complex chebyshev_evaluate(const SpectralCoeffs& coeffs, double t) {
  if (!(std::abs(t) <= 1.0 + 1e-12)) {
    throw std::invalid_argument("chebyshev_evaluate: t outside [-1, 1]");
  }
  t = std::clamp(t, -1.0, 1.0);
  const CVector& a = coeffs.values();
  const int n = coeffs.order();
  Complex b1 = 0.0;
  Complex b2 = 0.0;
  for (int i = n; i >= 1; --i) {
    const Complex b0 = a(i) + 2.0 * t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return a(0) + t * b1 - b2;
}

SpectralMatrix derivative_matrix(int n) {
  if (n < 1) throw std::invalid_argument("derivative_matrix: N must be >= 1");
  CMatrix d = CMatrix::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    const double ci = (i == 0) ? 2.0 : 1.0;
    for (int j = i + 1; j <= n; j += 2) d(i, j) = 2.0 * j / ci;
  }
  return SpectralMatrix(std::move(d));
}

SpectralMatrix product_matrix(const SpectralCoeffs& v) {
  const int n = v.order();
  const CVector& vh = v.values();
  CMatrix c = CMatrix::Zero(n + 1, n + 1);
  // Column m collects where T_m * T_k lands for each k.
  for (int m = 0; m <= n; ++m) {
    for (int k = 0; k <= n; ++k) {
      const Complex half = 0.5 * vh(k);
      if (m + k <= n) c(m + k, m) += half;
      c(std::abs(m - k), m) += half;
    }
  }
  return SpectralMatrix(std::move(c));
}

CRowVector top_endpoint_row(int n) { return CRowVector::Ones(n + 1); }

CRowVector bottom_endpoint_row(int n) {
  CRowVector s(n + 1);
  for (int i = 0; i <= n; ++i) s(i) = (i % 2 == 0) ? 1.0 : -1.0;
  return s;
}

}  // namespace wavint::spectral
