#include "wavint/kspace.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "wavint/depth_solver.hpp"
#include "wavint/error.hpp"
#include "wavint/specfun.hpp"

namespace wavint::kspace {

namespace {

// Ranges per synthesis block. Fixed so results do not depend on thread count.
constexpr Eigen::Index kRangeBlock = 64;

// Runs body(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any worker is rethrown on the caller's thread.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

void check_ranges(std::span<const double> ranges) {
  if (ranges.empty()) throw std::invalid_argument("synthesis: no ranges requested");
  if (!(ranges.front() >= 1.0)) throw std::invalid_argument("synthesis: ranges must start at >= 1 m");
  for (std::size_t i = 1; i < ranges.size(); ++i) {
    if (!(ranges[i] > ranges[i - 1])) throw std::invalid_argument("synthesis: ranges must be strictly increasing");
  }
}

template <typename Kernel>
FieldGrid synthesize_with(const GreensGrid& greens, std::span<const double> ranges, unsigned threads,
                          SourceGeometry geometry, Kernel kernel) {
  check_ranges(ranges);
  if (threads == 0) threads = default_threads();
  const auto nr = static_cast<Eigen::Index>(ranges.size());
  const Eigen::Index m = greens.values.rows();
  const double guard = specfun::kMaxImagArgument;

  FieldGrid field;
  field.ranges.assign(ranges.begin(), ranges.end());
  field.depths = greens.depths;
  field.geometry = geometry;
  field.values = CMatrix::Zero(nr, greens.values.cols());

  const std::size_t blocks = static_cast<std::size_t>((nr + kRangeBlock - 1) / kRangeBlock);
  parallel_for(blocks, threads, [&](std::size_t b) {
    const Eigen::Index first = static_cast<Eigen::Index>(b) * kRangeBlock;
    const Eigen::Index rows = std::min(kRangeBlock, nr - first);
    CMatrix k(rows, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const Complex kj = greens.grid.sample(static_cast<int>(j));
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double r = ranges[first + i];
        if (std::abs(kj.imag() * r) > guard) {
          std::ostringstream msg;
          msg << "synthesis kernel overflow at k = " << kj << ", r = " << r << " (|Im(k r)| > " << guard << ")";
          throw NumericalError(msg.str());
        }
        k(i, j) = kernel(kj, r);
      }
    }
    field.values.middleRows(first, rows).noalias() = k * greens.values;
  });
  return field;
}

}  // namespace

WavenumberGrid make_grid(double k_min, double k_max, int count) {
  if (count < 2) throw std::invalid_argument("make_grid: M must be >= 2");
  if (!(k_min >= 0.0)) throw std::invalid_argument("make_grid: k_min must be >= 0");
  if (!(k_max > k_min)) throw std::invalid_argument("make_grid: k_max must exceed k_min");
  WavenumberGrid g;
  g.k_min = k_min;
  g.k_max = k_max;
  g.count = count;
  g.spacing = (k_max - k_min) / (count - 1);
  g.offset = 3.0 * g.spacing / (2.0 * kPi * std::log10(std::exp(1.0)));
  if (!(g.offset < (k_max - k_min) / 100.0)) {
    std::ostringstream msg;
    msg << "make_grid: contour offset " << g.offset << " is not small against the interval "
        << (k_max - k_min) << "; increase M";
    throw std::invalid_argument(msg.str());
  }
  return g;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

GreensGrid greens_sweep(const Environment& env, const WavenumberGrid& grid, std::span<const double> depths,
                        unsigned threads) {
  const depth::DepthSolver solver(env);
  const depth::DepthSolver::Receivers receivers = solver.prepare_receivers(depths);
  if (threads == 0) threads = default_threads();

  GreensGrid out;
  out.grid = grid;
  out.depths.assign(depths.begin(), depths.end());
  const auto nz = static_cast<Eigen::Index>(depths.size());
  // Row-major scratch so each worker writes one contiguous row.
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(grid.count, nz);
  std::vector<char> singular(static_cast<std::size_t>(grid.count), 0);

  parallel_for(static_cast<std::size_t>(grid.count), threads, [&](std::size_t j) {
    std::span<Complex> row(rows.row(static_cast<Eigen::Index>(j)).data(), static_cast<std::size_t>(nz));
    try {
      solver.solve_at(grid.sample(static_cast<int>(j)), receivers, row);
    } catch (const SingularSystemError&) {
      singular[j] = 1;
      std::fill(row.begin(), row.end(), Complex(0.0));
    }
  });

  std::vector<int> bad;
  for (int j = 0; j < grid.count; ++j) {
    if (singular[j]) bad.push_back(j);
  }
  if (static_cast<double>(bad.size()) > 0.01 * grid.count) {
    std::ostringstream msg;
    msg << "greens_sweep: " << bad.size() << " of " << grid.count << " wavenumbers produced singular systems";
    throw NumericalError(msg.str());
  }
  for (int j : bad) {
    int lo = j - 1;
    while (lo >= 0 && singular[lo]) --lo;
    int hi = j + 1;
    while (hi < grid.count && singular[hi]) ++hi;
    if (lo >= 0 && hi < grid.count) {
      const double w = static_cast<double>(j - lo) / (hi - lo);
      rows.row(j) = (1.0 - w) * rows.row(lo) + w * rows.row(hi);
    } else if (lo >= 0) {
      rows.row(j) = rows.row(lo);
    } else if (hi < grid.count) {
      rows.row(j) = rows.row(hi);
    }
    std::ostringstream msg;
    msg << "singular depth system at k = " << grid.sample(j) << "; filled by interpolation";
    out.warnings.push_back(msg.str());
  }
  out.repaired = std::move(bad);
  out.values = rows;
  return out;
}

FieldGrid synthesize_point(const GreensGrid& greens, std::span<const double> ranges, unsigned threads) {
  const double dk = greens.grid.spacing;
  return synthesize_with(greens, ranges, threads, SourceGeometry::point, [dk](Complex k, double r) {
    return dk * specfun::bessel_j0(k * r) * k;
  });
}

FieldGrid synthesize_line(const GreensGrid& greens, std::span<const double> ranges, unsigned threads) {
  const double dk = greens.grid.spacing;
  return synthesize_with(greens, ranges, threads, SourceGeometry::line, [dk](Complex k, double x) {
    const Complex w = k * x;
    return 2.0 * dk * 0.5 * (std::exp(kI * w) + std::exp(-kI * w));
  });
}

FieldGrid synthesize(const GreensGrid& greens, std::span<const double> ranges, SourceGeometry geometry,
                     unsigned threads) {
  return geometry == SourceGeometry::point ? synthesize_point(greens, ranges, threads)
                                           : synthesize_line(greens, ranges, threads);
}

Complex reference_pressure(const Environment& env, SourceGeometry geometry, Normalization norm) {
  const double zs = env.source.depth;
  const double omega = 2.0 * kPi * env.source.frequency;
  const double rho_s = env.density(zs);
  const Complex ks = complex_wavenumber(env.sound_speed(zs), env.attenuation(zs), env.source.frequency);
  const double scale = rho_s * omega * omega;
  if (geometry == SourceGeometry::point) {
    if (norm != Normalization::standard) {
      throw std::invalid_argument("reference_pressure: H0(1) normalization applies to line sources only");
    }
    return scale / (4.0 * kPi) * std::exp(kI * ks);
  }
  // The attenuated part of k_s is negligible over 1 m; H0 is evaluated on the real axis.
  const double arg = norm == Normalization::line_h0_at_1 ? 1.0 : ks.real();
  return kI * scale * specfun::hankel1_0(arg) / 4.0;
}

TLGrid pressure_and_tl(const FieldGrid& field, const Environment& env, Normalization norm) {
  const Complex p0 = reference_pressure(env, field.geometry, norm);
  const double omega = 2.0 * kPi * env.source.frequency;
  TLGrid tl;
  tl.ranges = field.ranges;
  tl.depths = field.depths;
  tl.values.resize(field.values.rows(), field.values.cols());
  for (Eigen::Index iz = 0; iz < field.values.cols(); ++iz) {
    const double rho = env.density(field.depths[iz]);
    for (Eigen::Index ir = 0; ir < field.values.rows(); ++ir) {
      const Complex psi = field.values(ir, iz);
      if (!std::isfinite(psi.real()) || !std::isfinite(psi.imag())) {
        throw NumericalError("pressure_and_tl: non-finite field value");
      }
      const double ratio = std::abs(rho * omega * omega * psi / p0);
      tl.values(ir, iz) = ratio > 0.0 ? -20.0 * std::log10(ratio) : std::numeric_limits<double>::infinity();
    }
  }
  return tl;
}

}  // namespace wavint::kspace
