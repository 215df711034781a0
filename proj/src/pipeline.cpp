#include "wavint/pipeline.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "wavint/error.hpp"
#include "wavint/kspace.hpp"

namespace wavint::pipeline {

namespace {

constexpr std::array<char, 8> kMagic = {'W', 'I', 'N', 'T', 'T', 'L', '0', '1'};

std::string fmt(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

double clamp_tl(double v) { return std::isfinite(v) && v < kTlClamp ? v : kTlClamp; }

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::ofstream open_output(const std::filesystem::path& path, std::vector<std::filesystem::path>& files,
                          std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  files.push_back(path);
  return out;
}

void write_tl_csv(std::ostream& out, const TLGrid& tl) {
  out << "z";
  for (double r : tl.ranges) out << ',' << fmt(r);
  out << '\n';
  for (Eigen::Index iz = 0; iz < tl.values.cols(); ++iz) {
    out << fmt(tl.depths[iz]);
    for (Eigen::Index ir = 0; ir < tl.values.rows(); ++ir) out << ',' << fmt(clamp_tl(tl.values(ir, iz)));
    out << '\n';
  }
}

void put_le(std::ostream& out, std::uint64_t bits) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(b, 8);
}

std::uint64_t get_le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw Error("truncated TL binary file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

TLGrid subgrid(const TLGrid& tl, Eigen::Index first_col, Eigen::Index cols) {
  TLGrid out;
  out.ranges = tl.ranges;
  out.depths.assign(tl.depths.begin() + first_col, tl.depths.begin() + first_col + cols);
  out.values = tl.values.middleCols(first_col, cols);
  return out;
}

void update_extremes(const RMatrix& values, RunResult& result) {
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      const double v = clamp_tl(values(i, j));
      result.tl_min = result.tl_min ? std::min(*result.tl_min, v) : v;
      result.tl_max = result.tl_max ? std::max(*result.tl_max, v) : v;
    }
  }
}

const char* seabed_name(reference::Seabed s) { return s == reference::Seabed::free ? "ideal-free" : "ideal-rigid"; }

}  // namespace

TLGrid ideal_oracle(const Environment& env, reference::Seabed seabed, const std::vector<double>& ranges,
                    const std::vector<double>& depths) {
  if (env.layers.size() != 1) throw ConfigError("oracle", "ideal oracle needs a single water layer");
  const Layer& layer = env.layers.front();
  const auto* c = std::get_if<ConstantProfile>(&layer.c.variant());
  const auto* rho = std::get_if<ConstantProfile>(&layer.rho.variant());
  const auto* alpha = std::get_if<ConstantProfile>(&layer.alpha.variant());
  if (!c || !rho || !alpha || alpha->value != 0.0) {
    throw ConfigError("oracle", "ideal oracle needs constant c and rho and zero attenuation");
  }
  const BottomKind expected = seabed == reference::Seabed::free ? BottomKind::pressure_release : BottomKind::rigid;
  if (env.bottom.kind != expected) {
    throw ConfigError("oracle", std::string(seabed_name(seabed)) + " does not match the configured bottom");
  }
  if (env.source.geometry != SourceGeometry::point) throw ConfigError("oracle", "ideal oracle is for point sources");
  if (ranges.empty()) throw ConfigError("oracle", "no ranges");

  const double depth = env.total_depth();
  const double k = complex_wavenumber(c->value, 0.0, env.source.frequency).real();
  // Keep evanescent modes until they have decayed by about exp(-40) at the nearest range.
  const double r_min = *std::min_element(ranges.begin(), ranges.end());
  const double kz_max = std::sqrt(k * k + std::pow(40.0 / r_min, 2));
  const int n_modes = std::clamp(static_cast<int>(std::ceil(kz_max * depth / kPi)) + 1, 1, 20000);
  return reference::ideal_field(depth, k, env.source.depth, seabed, ranges, depths, n_modes);
}

void write_tl_binary(const std::filesystem::path& path, const TLGrid& tl) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(kMagic.data(), kMagic.size());
  put_le(out, static_cast<std::uint64_t>(tl.values.rows()));
  put_le(out, static_cast<std::uint64_t>(tl.values.cols()));
  put_le(out, 0);
  for (Eigen::Index iz = 0; iz < tl.values.cols(); ++iz) {
    for (Eigen::Index ir = 0; ir < tl.values.rows(); ++ir) {
      put_le(out, std::bit_cast<std::uint64_t>(clamp_tl(tl.values(ir, iz))));
    }
  }
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

TLGrid read_tl_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error("'" + path.string() + "' is not a TL binary file");
  const auto nr = static_cast<Eigen::Index>(get_le(in));
  const auto nz = static_cast<Eigen::Index>(get_le(in));
  (void)get_le(in);
  TLGrid tl;
  tl.values.resize(nr, nz);
  for (Eigen::Index iz = 0; iz < nz; ++iz) {
    for (Eigen::Index ir = 0; ir < nr; ++ir) tl.values(ir, iz) = std::bit_cast<double>(get_le(in));
  }
  return tl;
}

RunResult run(const config::RunConfig& cfg, const RunOptions& options) {
  config::validate(cfg);
  RunResult result;
  Stopwatch clock;

  const Environment base = config::build_environment(cfg);
  const Environment env = insert_source_interface(base);
  const kspace::WavenumberGrid grid = config::build_grid(cfg);
  const config::OutputSpec& out = cfg.output;

  // Sweep columns: TL grid depths first, then probe depths.
  const std::vector<double> grid_depths = out.tl_grid ? config::receiver_depths(cfg) : std::vector<double>{};
  std::vector<double> sweep_depths = grid_depths;
  sweep_depths.insert(sweep_depths.end(), out.probe_depths.begin(), out.probe_depths.end());
  const auto n_grid = static_cast<Eigen::Index>(grid_depths.size());
  const auto n_probe = static_cast<Eigen::Index>(out.probe_depths.size());
  std::optional<TLGrid> oracle_grid;
  if (options.oracle) {
    if (!out.tl_grid) throw ConfigError("oracle", "needs the tl_grid product");
    oracle_grid = ideal_oracle(base, *options.oracle, config::receiver_ranges(cfg), grid_depths);
  }
  result.timings.push_back({"setup", clock.lap()});

  const kspace::GreensGrid greens = kspace::greens_sweep(env, grid, sweep_depths, options.threads);
  result.warnings.insert(result.warnings.end(), greens.warnings.begin(), greens.warnings.end());
  result.timings.push_back({"sweep", clock.lap()});

  std::filesystem::create_directories(options.out_dir);

  if (out.spectrum) {
    std::vector<double> k(static_cast<std::size_t>(grid.count));
    for (int j = 0; j < grid.count; ++j) k[j] = grid.sample(j).real();
    for (Eigen::Index p = 0; p < n_probe; ++p) {
      const double z = out.probe_depths[p];
      const auto col = greens.values.col(n_grid + p);
      std::vector<double> mag(k.size());
      auto file = open_output(options.out_dir / ("spectrum_z" + fmt(z) + ".csv"), result.files);
      file << "k,abs_psi,re_psi,im_psi\n";
      for (int j = 0; j < grid.count; ++j) {
        const Complex v = col(j);
        mag[j] = std::abs(v);
        file << fmt(k[j]) << ',' << fmt(mag[j]) << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << '\n';
      }
      result.peaks.push_back({z, reference::spectrum_peaks(k, mag)});
    }
    result.timings.push_back({"spectrum", clock.lap()});
  }

  if (out.tl_grid || out.tl_line) {
    const std::vector<double> ranges = config::receiver_ranges(cfg);
    if (ranges.back() > grid.aliasing_range()) {
      result.warnings.push_back("r_max = " + fmt(ranges.back()) + " m exceeds the aliasing range 2 pi / dk = " +
                                fmt(grid.aliasing_range()) + " m");
    }
    kspace::GreensGrid used = greens;
    if (!out.tl_line) {
      used.values = greens.values.leftCols(n_grid);
      used.depths = grid_depths;
    }
    const FieldGrid field = kspace::synthesize(used, ranges, env.source.geometry, options.threads);
    result.timings.push_back({"synthesis", clock.lap()});
    const TLGrid tl = kspace::pressure_and_tl(field, env, out.normalization);

    if (out.tl_grid) {
      const TLGrid g = subgrid(tl, 0, n_grid);
      update_extremes(g.values, result);
      {
        auto file = open_output(options.out_dir / "tl_grid.csv", result.files);
        write_tl_csv(file, g);
      }
      if (out.tl_binary) {
        write_tl_binary(options.out_dir / "tl_grid.bin", g);
        result.files.push_back(options.out_dir / "tl_grid.bin");
      }
      if (oracle_grid) {
        auto file = open_output(options.out_dir / "tl_oracle.csv", result.files);
        write_tl_csv(file, *oracle_grid);
        result.oracle_error = reference::tl_error(g, *oracle_grid);
      }
    }
    if (out.tl_line) {
      for (Eigen::Index p = 0; p < n_probe; ++p) {
        const double z = out.probe_depths[p];
        const Eigen::Index col = n_grid + p;
        update_extremes(tl.values.col(col), result);
        auto file = open_output(options.out_dir / ("tl_line_z" + fmt(z) + ".csv"), result.files);
        file << "r,tl\n";
        for (std::size_t ir = 0; ir < ranges.size(); ++ir) {
          file << fmt(ranges[ir]) << ',' << fmt(clamp_tl(tl.values(static_cast<Eigen::Index>(ir), col))) << '\n';
        }
      }
    }
    result.timings.push_back({"tl", clock.lap()});
  }

  std::ostringstream s;
  s << "layers: " << env.layers.size() << " (source interface at " << fmt(env.source.depth) << " m)\n";
  s << "wavenumber interval: [" << fmt(grid.k_min) << ", " << fmt(grid.k_max) << "], M = " << grid.count
    << ", dk = " << fmt(grid.spacing) << ", eps = " << fmt(grid.offset) << "\n";
  for (const auto& p : result.peaks) {
    s << "peaks at z = " << fmt(p.depth) << ":";
    for (double k : p.wavenumbers) s << ' ' << fmt(k);
    s << "\n";
  }
  if (result.tl_min) s << "tl min: " << fmt(*result.tl_min) << " dB\ntl max: " << fmt(*result.tl_max) << " dB\n";
  if (result.oracle_error) {
    s << "tl_error vs " << seabed_name(*options.oracle) << ": " << fmt(result.oracle_error->mean) << " dB ("
      << result.oracle_error->compared << " compared, " << result.oracle_error->excluded << " excluded)\n";
  }
  s << "warnings: " << result.warnings.size() << "\n";
  for (const auto& w : result.warnings) s << "  " << w << "\n";
  result.summary = s.str();
  {
    auto file = open_output(options.out_dir / "summary.txt", result.files);
    file << result.summary;
  }
  result.timings.push_back({"write", clock.lap()});
  return result;
}

std::string format_timings(const RunResult& result) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(3);
  for (const auto& t : result.timings) s << "time " << t.stage << ": " << t.seconds << " s\n";
  return s.str();
}

}  // namespace wavint::pipeline
