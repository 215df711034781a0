#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "test_support.hpp"
#include "wavint/depth_solver.hpp"
#include "wavint/error.hpp"
#include "wavint/kspace.hpp"
#include "wavint/specfun.hpp"

using namespace wavint;
using namespace wavint::kspace;
using wavint::testing::ideal_environment;
using wavint::testing::pekeris_environment;

namespace {

double k0_ideal() { return complex_wavenumber(1500.0, 0.0, 20.0).real(); }

GreensGrid random_greens(std::mt19937& gen, const WavenumberGrid& grid, int nz) {
  std::normal_distribution<double> d;
  GreensGrid g;
  g.grid = grid;
  g.values.resize(grid.count, nz);
  for (Eigen::Index i = 0; i < g.values.size(); ++i) g.values.data()[i] = Complex(d(gen), d(gen));
  for (int i = 0; i < nz; ++i) g.depths.push_back(10.0 * (i + 1));
  return g;
}

bool bit_equal(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a.data()[i].real() != b.data()[i].real() || a.data()[i].imag() != b.data()[i].imag()) return false;
  }
  return true;
}

}  // namespace

TEST(MakeGrid, Examples) {
  const WavenumberGrid g = make_grid(0.0, 2.0 * k0_ideal(), 2048);
  EXPECT_NEAR(g.spacing, 8.1853e-5, 1e-9);
  EXPECT_NEAR(g.offset, 8.9996e-5, 1e-8);
  EXPECT_EQ(g.sample(0), Complex(0.0, -g.offset));
  EXPECT_NEAR(g.sample(2047).real(), 2.0 * k0_ideal(), 1e-15);
  EXPECT_NEAR(g.aliasing_range(), 2.0 * kPi / g.spacing, 1e-9);
  EXPECT_THROW(make_grid(0.0, 2.0 * k0_ideal(), 2), std::invalid_argument);
  EXPECT_THROW(make_grid(0.0, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(make_grid(0.2, 0.1, 100), std::invalid_argument);
  EXPECT_THROW(make_grid(-0.1, 0.1, 100), std::invalid_argument);
}

TEST(Synthesis, Linearity) {
  std::mt19937 gen(1);
  const WavenumberGrid grid = make_grid(0.0, 0.17, 300);
  const GreensGrid g1 = random_greens(gen, grid, 3);
  const GreensGrid g2 = random_greens(gen, grid, 3);
  const Complex a(0.7, -1.2);
  const Complex b(-2.0, 0.3);
  GreensGrid mix = g1;
  mix.values = a * g1.values + b * g2.values;
  const std::vector<double> r = {1.0, 17.0, 250.0, 999.0};
  for (SourceGeometry geom : {SourceGeometry::point, SourceGeometry::line}) {
    const CMatrix lhs = synthesize(mix, r, geom, 1).values;
    const CMatrix rhs = a * synthesize(g1, r, geom, 1).values + b * synthesize(g2, r, geom, 1).values;
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff() / rhs.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Synthesis, SingleColumnKernels) {
  const WavenumberGrid grid = make_grid(0.0, 0.17, 300);
  GreensGrid g;
  g.grid = grid;
  g.depths = {50.0};
  g.values = CMatrix::Zero(grid.count, 1);
  const int j = 137;
  g.values(j, 0) = Complex(0.3, 0.4);
  const Complex kj = grid.sample(j);
  for (double r : {1.0, 33.0, 500.0}) {
    const Complex point = synthesize_point(g, std::vector<double>{r}).values(0, 0);
    const Complex expect_point = grid.spacing * g.values(j, 0) * specfun::bessel_j0(kj * r) * kj;
    EXPECT_LE(std::abs(point - expect_point), 1e-15 * std::abs(expect_point));
    const Complex line = synthesize_line(g, std::vector<double>{r}).values(0, 0);
    const Complex expect_line = 2.0 * grid.spacing * g.values(j, 0) * std::cos(kj * r);
    EXPECT_LE(std::abs(line - expect_line), 1e-14 * std::abs(expect_line));
  }
}

TEST(Synthesis, RangeChecksAndKernelGuard) {
  const WavenumberGrid grid = make_grid(0.0, 0.17, 300);
  GreensGrid g;
  g.grid = grid;
  g.depths = {50.0};
  g.values = CMatrix::Ones(grid.count, 1);
  EXPECT_THROW(synthesize_point(g, std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(synthesize_point(g, std::vector<double>{0.5}), std::invalid_argument);
  EXPECT_THROW(synthesize_point(g, std::vector<double>{5.0, 5.0}), std::invalid_argument);
  const double too_far = 1.01 * specfun::kMaxImagArgument / grid.offset;
  try {
    synthesize_point(g, std::vector<double>{1.0, too_far});
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("r = "), std::string::npos);
  }
}

TEST(Pressure, ReferenceAndDoubling) {
  const Environment env = insert_source_interface(ideal_environment(BottomKind::pressure_release));
  const Complex p0 = reference_pressure(env, SourceGeometry::point, Normalization::standard);
  EXPECT_NEAR(std::abs(p0), 1256.64, 0.01);

  const Complex p_line = reference_pressure(env, SourceGeometry::line, Normalization::standard);
  const double w2 = std::pow(2.0 * kPi * 20.0, 2);
  EXPECT_NEAR(std::abs(p_line), w2 * std::abs(specfun::hankel1_0(k0_ideal())) / 4.0, 1e-9);
  const Complex p_h1 = reference_pressure(env, SourceGeometry::line, Normalization::line_h0_at_1);
  EXPECT_NEAR(std::abs(p_h1), w2 * std::abs(specfun::hankel1_0(1.0)) / 4.0, 1e-9);
  EXPECT_THROW(reference_pressure(env, SourceGeometry::point, Normalization::line_h0_at_1), std::invalid_argument);

  FieldGrid f;
  f.ranges = {10.0, 20.0};
  f.depths = {30.0, 60.0};
  f.values = CMatrix::Constant(2, 2, Complex(1e-3, 2e-3));
  f.values(1, 1) = 0.0;
  const TLGrid a = pressure_and_tl(f, env);
  f.values *= 2.0;
  const TLGrid b = pressure_and_tl(f, env);
  EXPECT_NEAR(a.values(0, 0) - b.values(0, 0), 20.0 * std::log10(2.0), 1e-12);
  EXPECT_NEAR(20.0 * std::log10(2.0), 6.0206, 1e-4);
  EXPECT_TRUE(std::isinf(b.values(1, 1)));
  f.values(0, 0) = Complex(NAN, 0.0);
  EXPECT_THROW(pressure_and_tl(f, env), NumericalError);
}

TEST(Sweep, DeterministicAcrossWorkers) {
  const Environment env = insert_source_interface(pekeris_environment(12));
  const WavenumberGrid grid = make_grid(0.0, 0.42, 600);
  const std::vector<double> z = {0.0, 20.0, 36.0, 46.0, 99.0, 100.0};
  const GreensGrid g1 = greens_sweep(env, grid, z, 1);
  const std::vector<double> r = {1.0, 100.0, 1000.0, 2000.0};
  const CMatrix f1 = synthesize_point(g1, r, 1).values;
  for (unsigned threads : {2u, 4u, 8u}) {
    const GreensGrid g = greens_sweep(env, grid, z, threads);
    EXPECT_TRUE(bit_equal(g.values, g1.values)) << threads;
    EXPECT_TRUE(bit_equal(synthesize_point(g, r, threads).values, f1)) << threads;
  }
  EXPECT_TRUE(g1.repaired.empty());
}

TEST(Sweep, ColumnsMatchDepthSolve) {
  const Environment env = insert_source_interface(ideal_environment(BottomKind::rigid));
  const WavenumberGrid grid = make_grid(0.0, 0.17, 200);
  const std::vector<double> z = {10.0, 46.0};
  const GreensGrid g = greens_sweep(env, grid, z, 3);
  EXPECT_EQ(g.values.rows(), 200);
  EXPECT_EQ(g.values.cols(), 2);
  for (int j : {0, 57, 199}) {
    const auto psi = wavint::depth::solve_depth(env, grid.sample(j), z);
    EXPECT_EQ(g.values(j, 0), psi[0]);
    EXPECT_EQ(g.values(j, 1), psi[1]);
  }
}

TEST(Synthesis, DoublingMChangesTlLittle) {
  const Environment env = insert_source_interface(ideal_environment(BottomKind::pressure_release));
  const double r_max = 3000.0;
  std::vector<double> r;
  for (double x = 200.0; x <= r_max / 2; x += 1.0) r.push_back(x);
  const std::vector<double> z = {46.0};
  auto tl_line = [&](int m) {
    const GreensGrid g = greens_sweep(env, make_grid(0.0, 2.0 * k0_ideal(), m), z, 0);
    return pressure_and_tl(synthesize_point(g, r, 0), env).values.col(0).eval();
  };
  const RVector a = tl_line(2048);
  const RVector b = tl_line(4096);
  // Skip points within 20 m of a local TL maximum (an interference null).
  std::vector<bool> near_null(b.size(), false);
  for (Eigen::Index i = 1; i + 1 < b.size(); ++i) {
    if (b(i) >= b(i - 1) && b(i) >= b(i + 1)) {
      for (Eigen::Index j = std::max<Eigen::Index>(0, i - 20); j < std::min<Eigen::Index>(b.size(), i + 21); ++j) {
        near_null[j] = true;
      }
    }
  }
  int compared = 0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    if (near_null[i]) continue;
    ++compared;
    EXPECT_LT(std::abs(a(i) - b(i)), 0.5) << "r = " << r[i];
  }
  EXPECT_GT(compared, 100);
}
