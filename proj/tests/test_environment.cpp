#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "test_support.hpp"
#include "wavint/environment.hpp"
#include "wavint/reference.hpp"

using namespace wavint;
using wavint::testing::ideal_environment;
using wavint::testing::uniform_layer;

TEST(ComplexWavenumber, Examples) {
  const Complex k = complex_wavenumber(1500.0, 0.0, 20.0);
  EXPECT_NEAR(k.real(), 0.0837758, 1e-7);
  EXPECT_EQ(k.imag(), 0.0);

  const Complex kb = complex_wavenumber(2000.0, 0.5, 50.0);
  EXPECT_NEAR(kb.real(), 0.1570796, 1e-7);
  EXPECT_NEAR(kb.imag() / kb.real(), 0.5 / (40.0 * kPi * std::log10(std::exp(1.0))), 1e-15);
  EXPECT_NEAR(kb.imag() / kb.real(), 0.0091620, 5e-7);

  for (double c : {1400.0, 1700.0}) {
    for (double f : {5.0, 500.0}) EXPECT_EQ(complex_wavenumber(c, 0.0, f).imag(), 0.0);
  }
}

TEST(ComplexWavenumber, RejectsNonPhysical) {
  EXPECT_THROW(complex_wavenumber(0.0, 0.0, 20.0), std::invalid_argument);
  EXPECT_THROW(complex_wavenumber(1500.0, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(complex_wavenumber(-1.0, 0.0, 20.0), std::invalid_argument);
  EXPECT_THROW(complex_wavenumber(1500.0, -0.1, 20.0), std::invalid_argument);
}

TEST(LayerMap, EndpointsAndInverse) {
  const Layer l = uniform_layer(36.0, 100.0, 1500.0, 1.0, 0.0, 10);
  EXPECT_DOUBLE_EQ(l.to_local(36.0), 1.0);
  EXPECT_DOUBLE_EQ(l.to_local(100.0), -1.0);
  for (double z : {40.0, 68.0, 99.5}) EXPECT_NEAR(l.to_depth(l.to_local(z)), z, 1e-12);
  EXPECT_DOUBLE_EQ(l.local_scale(), 2.0 / (36.0 - 100.0));
}

TEST(InsertSourceInterface, SplitsHostLayer) {
  const Environment env = insert_source_interface(ideal_environment(BottomKind::pressure_release));
  ASSERT_EQ(env.layers.size(), 2u);
  EXPECT_EQ(env.layers[0].z_top, 0.0);
  EXPECT_EQ(env.layers[0].z_bot, 36.0);
  EXPECT_EQ(env.layers[1].z_top, 36.0);
  EXPECT_EQ(env.layers[1].z_bot, 100.0);
  ASSERT_TRUE(env.source_interface.has_value());
  EXPECT_EQ(*env.source_interface, 0u);
  EXPECT_EQ(env.layers[0].order, 10);
  EXPECT_EQ(env.layers[1].order, 10);
}

TEST(InsertSourceInterface, TagsExistingInterface) {
  Environment env = ideal_environment(BottomKind::rigid, 10, 20.0, 50.0);
  env.layers = {uniform_layer(0, 50, 1500, 1, 0, 8), uniform_layer(50, 100, 1600, 1.2, 0.1, 12)};
  const Environment out = insert_source_interface(env);
  ASSERT_EQ(out.layers.size(), 2u);
  EXPECT_EQ(*out.source_interface, 0u);
  EXPECT_EQ(out.layers[1].order, 12);
}

TEST(InsertSourceInterface, RejectsBoundarySource) {
  EXPECT_THROW(insert_source_interface(ideal_environment(BottomKind::rigid, 10, 20.0, 0.0)), std::invalid_argument);
  EXPECT_THROW(insert_source_interface(ideal_environment(BottomKind::rigid, 10, 20.0, 100.0)), std::invalid_argument);
}

TEST(InsertSourceInterface, PreservesProfilesAndCoverage) {
  Environment env = ideal_environment(BottomKind::pressure_release, 10, 20.0, 61.3);
  Layer a;
  a.z_top = 0;
  a.z_bot = 40;
  a.c = Profile::tabulated({0, 20, 40}, {1520, 1500, 1490});
  a.rho = Profile::constant(1.0);
  a.alpha = Profile::constant(0.0);
  Layer b;
  b.z_top = 40;
  b.z_bot = 100;
  b.c = Profile(MunkProfile{});
  b.rho = Profile::tabulated({40, 100}, {1.0, 1.4});
  b.alpha = Profile::constant(0.2);
  env.layers = {a, b};
  const Environment split = insert_source_interface(env);
  ASSERT_EQ(split.layers.size(), 3u);
  EXPECT_EQ(split.total_depth(), env.total_depth());
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int i = 0; i < 100; ++i) {
    const double z = u(gen);
    EXPECT_EQ(split.sound_speed(z), env.sound_speed(z)) << z;
    EXPECT_EQ(split.density(z), env.density(z)) << z;
    EXPECT_EQ(split.attenuation(z), env.attenuation(z)) << z;
  }
}

TEST(Environment, InterfaceDepthReadsLayerAbove) {
  const Environment env = insert_source_interface(ideal_environment(BottomKind::rigid));
  EXPECT_EQ(env.layer_at(36.0), 0u);
  EXPECT_EQ(env.layer_at(36.0001), 1u);
  EXPECT_EQ(env.layer_at(0.0), 0u);
  EXPECT_EQ(env.layer_at(100.0), 1u);
}

TEST(Environment, ValidationMessages) {
  Environment env = ideal_environment(BottomKind::pressure_release);
  env.layers[0].order = 3;
  EXPECT_THROW(validate(env), std::invalid_argument);

  env = ideal_environment(BottomKind::pressure_release);
  env.layers.push_back(uniform_layer(110, 200, 1500, 1, 0, 10));
  EXPECT_THROW(validate(env), std::invalid_argument);

  env = ideal_environment(BottomKind::halfspace);
  EXPECT_THROW(validate(env), std::invalid_argument);

  env = ideal_environment(BottomKind::pressure_release);
  env.layers[0].c = Profile::tabulated({0, 50}, {1500, 1500});
  EXPECT_THROW(validate(env), std::invalid_argument);

  env = ideal_environment(BottomKind::pressure_release);
  env.layers[0].rho = Profile::constant(0.0);
  EXPECT_THROW(validate(env), std::invalid_argument);

  EXPECT_NO_THROW(validate(wavint::testing::pekeris_environment()));
}

TEST(Profile, TabulatedIsExactAtSamplesAndBoundedBetween) {
  const std::vector<double> z = {0, 10, 25, 60, 100};
  const std::vector<double> v = {1500, 1490, 1495, 1480, 1530};
  const Profile p = Profile::tabulated(z, v);
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_EQ(p.evaluate(z[i]), v[i]);
  for (std::size_t i = 0; i + 1 < z.size(); ++i) {
    for (int j = 1; j < 10; ++j) {
      const double x = z[i] + (z[i + 1] - z[i]) * j / 10.0;
      EXPECT_GE(p.evaluate(x), std::min(v[i], v[i + 1]));
      EXPECT_LE(p.evaluate(x), std::max(v[i], v[i + 1]));
    }
  }
  EXPECT_THROW(Profile::tabulated({0, 0}, {1, 2}), std::invalid_argument);
  EXPECT_THROW(Profile::tabulated({0, 1}, {1}), std::invalid_argument);
}

TEST(LayerProfileSpectra, ConstantProfiles) {
  const Layer l = uniform_layer(0, 100, 1500, 1, 0, 10);
  const LayerSpectra s = layer_profile_spectra(l, 20.0);
  EXPECT_NEAR(std::abs(s.rho_hat[0] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.inv_rho_hat[0] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(s.k2_hat[0].real(), 0.00701838, 1e-8);
  for (int i = 1; i <= 10; ++i) {
    EXPECT_NEAR(std::abs(s.rho_hat[i]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.k2_hat[i]), 0.0, 1e-17);
  }
}

TEST(LayerProfileSpectra, MunkCoefficientsDecay) {
  Layer l = uniform_layer(0, 5000, 1500, 1, 0, 64);
  l.c = Profile(MunkProfile{});
  const LayerSpectra s = layer_profile_spectra(l, 50.0);
  const double lead = std::abs(s.k2_hat[0]);
  int last_large = 0;
  for (int i = 0; i <= 64; ++i) {
    if (std::abs(s.k2_hat[i]) > 1e-10 * lead) last_large = i;
  }
  EXPECT_LE(last_large, 30);
}

TEST(Profiles, NamedProfileValues) {
  EXPECT_NEAR(reference::munk_profile(0.0), 1548.52, 0.01);
  EXPECT_NEAR(reference::munk_profile(1300.0), 1500.0, 1e-9);
  EXPECT_NEAR(reference::pseudolinear_profile(0.0, 5.94e-10, 4.16e-7), 1550.4, 0.05);
  EXPECT_NEAR(reference::pseudolinear_profile(100.0, 5.94e-10, 4.16e-7), 1450.3, 0.05);
  EXPECT_THROW(reference::pseudolinear_profile(0.0, 1.0, -1.0), std::invalid_argument);
  const Profile p(PseudolinearProfile{5.94e-10, 4.16e-7});
  EXPECT_EQ(p.evaluate(37.0), reference::pseudolinear_profile(37.0, 5.94e-10, 4.16e-7));
}
