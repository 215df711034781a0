#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "wavint/config.hpp"
#include "wavint/error.hpp"
#include "wavint/pipeline.hpp"

using namespace wavint;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wavint_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Ideal free waveguide on a coarse grid, cheap enough for a unit test.
config::RunConfig small_free() {
  config::RunConfig c = config::load(std::string(WAVINT_CONFIG_DIR) + "/ideal_free.cfg");
  c.output.nr = 300;
  c.output.nz = 21;
  return c;
}

}  // namespace

TEST(Pipeline, SmallFreeRunWithOracle) {
  const fs::path out = scratch("free");
  pipeline::RunOptions opt;
  opt.out_dir = out;
  opt.threads = 2;
  opt.oracle = reference::Seabed::free;
  const pipeline::RunResult r = pipeline::run(small_free(), opt);

  ASSERT_EQ(r.peaks.size(), 1u);
  EXPECT_EQ(r.peaks[0].depth, 46.0);
  ASSERT_EQ(r.peaks[0].wavenumbers.size(), 2u);
  EXPECT_NEAR(r.peaks[0].wavenumbers[0], 0.0776623, 8.2e-5);
  EXPECT_NEAR(r.peaks[0].wavenumbers[1], 0.0554125, 8.2e-5);
  ASSERT_TRUE(r.oracle_error.has_value());
  EXPECT_LT(r.oracle_error->mean, 0.5);
  ASSERT_TRUE(r.tl_min && r.tl_max);
  EXPECT_LT(*r.tl_min, *r.tl_max);

  for (const char* f : {"tl_grid.csv", "tl_grid.bin", "tl_oracle.csv", "tl_line_z46.csv", "spectrum_z46.csv",
                        "summary.txt"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_EQ(slurp(out / "summary.txt"), r.summary);
  EXPECT_EQ(slurp(out / "spectrum_z46.csv").rfind("k,abs_psi,re_psi,im_psi\n", 0), 0u);
  EXPECT_EQ(slurp(out / "tl_line_z46.csv").rfind("r,tl\n", 0), 0u);
  EXPECT_FALSE(pipeline::format_timings(r).empty());
}

TEST(Pipeline, RerunIsBitIdentical) {
  const fs::path a = scratch("rerun_a");
  const fs::path b = scratch("rerun_b");
  pipeline::RunOptions opt;
  opt.out_dir = a;
  opt.threads = 1;
  pipeline::run(small_free(), opt);
  opt.out_dir = b;
  opt.threads = 3;
  const pipeline::RunResult r = pipeline::run(small_free(), opt);
  for (const auto& f : r.files) {
    EXPECT_EQ(slurp(a / f.filename()), slurp(f)) << f;
  }
}

TEST(Pipeline, SpectrumOnlyWritesNoTl) {
  const fs::path out = scratch("pseudo");
  config::RunConfig c = config::load(std::string(WAVINT_CONFIG_DIR) + "/pseudolinear.cfg");
  c.wavenumber.count = 1024;
  pipeline::RunOptions opt;
  opt.out_dir = out;
  const pipeline::RunResult r = pipeline::run(c, opt);
  EXPECT_TRUE(fs::exists(out / "spectrum_z50.csv"));
  EXPECT_FALSE(fs::exists(out / "tl_grid.csv"));
  EXPECT_FALSE(fs::exists(out / "tl_grid.bin"));
  EXPECT_FALSE(r.tl_min.has_value());
  ASSERT_EQ(r.peaks.size(), 1u);
  EXPECT_EQ(r.peaks[0].wavenumbers.size(), 7u);
}

TEST(Pipeline, OracleMismatchIsConfigError) {
  pipeline::RunOptions opt;
  opt.out_dir = scratch("mismatch");
  opt.oracle = reference::Seabed::rigid;
  try {
    pipeline::run(small_free(), opt);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "oracle");
  }
  const config::RunConfig pekeris = config::load(std::string(WAVINT_CONFIG_DIR) + "/pekeris.cfg");
  EXPECT_THROW(pipeline::ideal_oracle(config::build_environment(pekeris), reference::Seabed::free, {10.0}, {5.0}),
               ConfigError);
}

TEST(TlBinary, RoundTripAndHeader) {
  const fs::path dir = scratch("bin");
  fs::create_directories(dir);
  TLGrid tl;
  tl.ranges = {1.0, 2.0, 3.0};
  tl.depths = {0.0, 50.0};
  tl.values.resize(3, 2);
  tl.values << 10.5, 20.25, 30.0, 400.0, 55.0, std::numeric_limits<double>::infinity();
  pipeline::write_tl_binary(dir / "a.bin", tl);

  const std::string bytes = slurp(dir / "a.bin");
  ASSERT_EQ(bytes.size(), 32u + 6u * 8u);
  EXPECT_EQ(bytes.substr(0, 8), "WINTTL01");

  const TLGrid back = pipeline::read_tl_binary(dir / "a.bin");
  ASSERT_EQ(back.values.rows(), 3);
  ASSERT_EQ(back.values.cols(), 2);
  EXPECT_EQ(back.values(0, 0), 10.5);
  EXPECT_EQ(back.values(2, 1), 300.0);
  EXPECT_EQ(back.values(1, 1), 300.0);

  std::ofstream(dir / "bad.bin", std::ios::binary) << "NOTATLFILE";
  EXPECT_ANY_THROW(pipeline::read_tl_binary(dir / "bad.bin"));
}
