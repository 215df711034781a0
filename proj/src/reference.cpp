#include "wavint/reference.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wavint/specfun.hpp"

namespace wavint::reference {

namespace {

// K0(x) < 1e-22 beyond this argument.
constexpr double kEvanescentCutoff = 50.0;

}  // namespace

double ideal_vertical_wavenumber(double depth, int m, Seabed seabed) {
  const double order = seabed == Seabed::free ? m : m - 0.5;
  return order * kPi / depth;
}

ModalSet ideal_modes(double depth, double k, Seabed seabed) {
  if (!(depth > 0.0) || !(k > 0.0)) throw std::invalid_argument("ideal_modes: H and k must be positive");
  ModalSet set;
  set.seabed = seabed;
  for (int m = 1;; ++m) {
    const double kz = ideal_vertical_wavenumber(depth, m, seabed);
    if (kz >= k) break;
    set.kz.push_back(kz);
    set.kr.push_back(std::sqrt(k * k - kz * kz));
  }
  return set;
}

TLGrid ideal_field(double depth, double k, double source_depth, Seabed seabed,
                   std::span<const double> ranges, std::span<const double> depths, int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("ideal_field: n_modes must be >= 1");
  for (double r : ranges) {
    if (!(r >= 1.0)) throw std::invalid_argument("ideal_field: ranges must be >= 1 m");
  }
  const auto nr = static_cast<Eigen::Index>(ranges.size());
  const auto nz = static_cast<Eigen::Index>(depths.size());

  CMatrix radial(nr, n_modes);
  std::vector<Eigen::Index> active(static_cast<std::size_t>(nr), 0);
  RMatrix shapes(n_modes, nz);
  for (int m = 0; m < n_modes; ++m) {
    const double kz = ideal_vertical_wavenumber(depth, m + 1, seabed);
    const double kr2 = k * k - kz * kz;
    const double excitation = std::sin(kz * source_depth);
    for (Eigen::Index iz = 0; iz < nz; ++iz) shapes(m, iz) = excitation * std::sin(kz * depths[iz]);
    for (Eigen::Index ir = 0; ir < nr; ++ir) {
      if (kr2 > 0.0) {
        radial(ir, m) = specfun::hankel1_0(std::sqrt(kr2) * ranges[ir]);
      } else if (kr2 < 0.0 && std::sqrt(-kr2) * ranges[ir] < kEvanescentCutoff) {
        radial(ir, m) = specfun::hankel1_0_imaginary_axis(std::sqrt(-kr2) * ranges[ir]);
        active[ir] = m + 1;
      } else {
        radial(ir, m) = 0.0;  // at cutoff, or decayed below exp(-kEvanescentCutoff)
      }
      if (kr2 > 0.0) active[ir] = m + 1;
    }
  }
  // Modes are in increasing kz, so each range needs only a leading block.
  const CMatrix shapes_c = shapes.cast<Complex>();
  CMatrix p(nr, nz);
  for (Eigen::Index ir = 0; ir < nr; ++ir) {
    const Eigen::Index n = active[ir];
    p.row(ir) = n > 0 ? (radial.row(ir).head(n) * shapes_c.topRows(n)).eval() : CRowVector::Zero(nz).eval();
  }
  p *= Complex(0.0, 2.0 * kPi / depth);

  TLGrid out;
  out.ranges.assign(ranges.begin(), ranges.end());
  out.depths.assign(depths.begin(), depths.end());
  out.values.resize(nr, nz);
  for (Eigen::Index ir = 0; ir < nr; ++ir) {
    for (Eigen::Index iz = 0; iz < nz; ++iz) {
      const double mag = std::abs(p(ir, iz));
      out.values(ir, iz) = mag > 0.0 ? -20.0 * std::log10(mag) : std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

double munk_profile(double z, const MunkProfile& params) {
  const double zt = (z - params.axis_depth) / params.scale;
  return params.axis_speed * (1.0 + params.epsilon * (zt - 1.0 + std::exp(-zt)));
}

double pseudolinear_profile(double z, double a, double b) {
  const double s = a * z + b;
  if (!(s > 0.0)) throw std::invalid_argument("pseudolinear_profile: a z + b must be positive");
  return 1.0 / std::sqrt(s);
}

TlErrorResult tl_error(const RMatrix& tl, const RMatrix& reference) {
  if (tl.rows() != reference.rows() || tl.cols() != reference.cols()) {
    throw std::invalid_argument("tl_error: grid shapes differ");
  }
  TlErrorResult result;
  double sum = 0.0;
  for (Eigen::Index j = 0; j < tl.cols(); ++j) {
    for (Eigen::Index i = 0; i < tl.rows(); ++i) {
      const double a = tl(i, j);
      const double b = reference(i, j);
      if (!std::isfinite(a) || !std::isfinite(b) || a >= kTlClamp || b >= kTlClamp) {
        ++result.excluded;
        continue;
      }
      sum += std::abs(a - b);
      ++result.compared;
    }
  }
  result.mean = result.compared > 0 ? sum / static_cast<double>(result.compared) : 0.0;
  return result;
}

TlErrorResult tl_error(const TLGrid& tl, const TLGrid& reference) { return tl_error(tl.values, reference.values); }

std::vector<double> spectrum_peaks(std::span<const double> wavenumbers, std::span<const double> magnitude,
                                   double threshold_fraction) {
  if (magnitude.empty()) throw std::invalid_argument("spectrum_peaks: empty spectrum");
  if (wavenumbers.size() != magnitude.size()) {
    throw std::invalid_argument("spectrum_peaks: wavenumber and magnitude lengths differ");
  }
  for (double m : magnitude) {
    if (!std::isfinite(m)) throw std::invalid_argument("spectrum_peaks: non-finite magnitude");
  }
  const double peak_max = *std::max_element(magnitude.begin(), magnitude.end());
  const double threshold = threshold_fraction * peak_max;

  std::vector<double> peaks;
  for (std::size_t j = 1; j + 1 < magnitude.size(); ++j) {
    const double m = magnitude[j];
    if (!(m > magnitude[j - 1] && m > magnitude[j + 1]) || m < threshold) continue;
    double k = wavenumbers[j];
    if (magnitude[j - 1] > 0.0 && magnitude[j + 1] > 0.0) {
      const double ym = std::log(magnitude[j - 1]);
      const double y0 = std::log(m);
      const double yp = std::log(magnitude[j + 1]);
      const double curvature = ym - 2.0 * y0 + yp;
      if (curvature < 0.0) {
        const double offset = 0.5 * (ym - yp) / curvature;
        const double step = offset >= 0.0 ? wavenumbers[j + 1] - k : k - wavenumbers[j - 1];
        k += offset * step;
      }
    }
    peaks.push_back(k);
  }
  std::sort(peaks.begin(), peaks.end(), std::greater<>());
  return peaks;
}

}  // namespace wavint::reference
