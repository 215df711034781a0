#include "wavint/environment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "wavint/reference.hpp"

namespace wavint {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

std::string layer_name(std::size_t i) { return "layer[" + std::to_string(i) + "]"; }

void check_profile(const Profile& p, const Layer& layer, const std::string& what, bool positive) {
  if (!p.covers(layer.z_top, layer.z_bot)) fail(what + ": profile does not cover the layer");
  // Endpoints and a few interior samples; analytic profiles are monotone or convex.
  for (int i = 0; i <= 8; ++i) {
    const double z = layer.z_top + layer.thickness() * i / 8.0;
    const double v = p.evaluate(z);
    if (!std::isfinite(v)) fail(what + ": non-finite value");
    if (positive ? !(v > 0.0) : v < 0.0) {
      fail(what + (positive ? ": must be positive" : ": must be non-negative"));
    }
  }
}

}  // namespace

Profile::Profile(Variant v) : v_(std::move(v)) {
  if (const auto* t = std::get_if<TabulatedProfile>(&v_)) {
    if (t->depths.size() != t->values.size() || t->depths.empty()) {
      fail("tabulated profile: depths and values must be non-empty and equally long");
    }
    for (std::size_t i = 1; i < t->depths.size(); ++i) {
      if (!(t->depths[i] > t->depths[i - 1])) fail("tabulated profile: depths must be strictly increasing");
    }
  }
}

Profile Profile::tabulated(std::vector<double> depths, std::vector<double> values) {
  return Profile(TabulatedProfile{std::move(depths), std::move(values)});
}

double Profile::evaluate(double z) const {
  return std::visit(
      overloaded{
          [](const ConstantProfile& p) { return p.value; },
          [z](const TabulatedProfile& p) {
            const auto& d = p.depths;
            if (d.size() == 1) return p.values.front();
            if (z <= d.front()) return p.values.front();
            if (z >= d.back()) return p.values.back();
            const auto it = std::upper_bound(d.begin(), d.end(), z);
            const std::size_t i = static_cast<std::size_t>(it - d.begin());
            const double w = (z - d[i - 1]) / (d[i] - d[i - 1]);
            return (1.0 - w) * p.values[i - 1] + w * p.values[i];
          },
          [z](const MunkProfile& p) { return reference::munk_profile(z, p); },
          [z](const PseudolinearProfile& p) { return reference::pseudolinear_profile(z, p.a, p.b); },
      },
      v_);
}

bool Profile::covers(double z_top, double z_bot) const {
  if (const auto* t = std::get_if<TabulatedProfile>(&v_)) {
    return t->depths.front() <= z_top && t->depths.back() >= z_bot;
  }
  return true;
}

double Layer::to_local(double z) const noexcept {
  return 2.0 * z / (z_top - z_bot) + (z_bot + z_top) / (z_bot - z_top);
}

double Layer::to_depth(double t) const noexcept {
  return 0.5 * (z_top + z_bot) + 0.5 * t * (z_top - z_bot);
}

std::size_t Environment::layer_at(double z) const {
  if (layers.empty()) throw std::logic_error("Environment::layer_at: no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (z <= layers[i].z_bot) return i;
  }
  return layers.size() - 1;
}

void validate(const Environment& env) {
  if (env.layers.empty()) fail("environment: at least one layer is required");
  if (env.layers.front().z_top != 0.0) fail("layer[0].z_top: must be 0 (surface)");
  for (std::size_t i = 0; i < env.layers.size(); ++i) {
    const Layer& l = env.layers[i];
    const std::string name = layer_name(i);
    if (!(l.z_top >= 0.0) || !(l.z_bot > l.z_top)) fail(name + ": requires 0 <= z_top < z_bot");
    if (l.order < 4) fail(name + ".N: spectral order must be >= 4");
    if (i + 1 < env.layers.size() && env.layers[i + 1].z_top != l.z_bot) {
      fail(name + ".z_bot: must equal " + layer_name(i + 1) + ".z_top (layers must be contiguous)");
    }
    check_profile(l.c, l, name + ".c", true);
    check_profile(l.rho, l, name + ".rho", true);
    check_profile(l.alpha, l, name + ".alpha", false);
  }
  const double h = env.total_depth();
  if (!(env.source.frequency > 0.0)) fail("source.frequency: must be positive");
  if (!(env.source.depth > 0.0 && env.source.depth < h)) {
    fail("source.depth: must lie strictly inside (0, H)");
  }
  if (env.bottom.kind == BottomKind::halfspace) {
    const HalfSpace& hs = env.bottom.halfspace;
    if (!(hs.c > 0.0) || !(hs.rho > 0.0) || !(hs.alpha >= 0.0)) {
      fail("bottom: half-space requires c > 0, rho > 0, alpha >= 0");
    }
  }
  if (env.source_interface) {
    const std::size_t s = *env.source_interface;
    if (s + 1 >= env.layers.size()) fail("source interface index out of range");
    if (env.layers[s].z_bot != env.source.depth) fail("source interface does not sit at the source depth");
  }
}

Complex complex_wavenumber(double c, double alpha, double f) {
  if (!(c > 0.0)) throw std::invalid_argument("complex_wavenumber: c must be positive");
  if (!(f > 0.0)) throw std::invalid_argument("complex_wavenumber: f must be positive");
  if (!(alpha >= 0.0)) throw std::invalid_argument("complex_wavenumber: alpha must be non-negative");
  const double eta = 1.0 / (40.0 * kPi * std::log10(std::exp(1.0)));
  return (2.0 * kPi * f / c) * Complex(1.0, eta * alpha);
}

Environment insert_source_interface(Environment env) {
  validate(env);
  const double zs = env.source.depth;
  for (std::size_t i = 0; i + 1 < env.layers.size(); ++i) {
    if (env.layers[i].z_bot == zs) {
      env.source_interface = i;
      return env;
    }
  }
  const std::size_t host = env.layer_at(zs);
  Layer lower = env.layers[host];
  env.layers[host].z_bot = zs;
  lower.z_top = zs;
  env.layers.insert(env.layers.begin() + static_cast<std::ptrdiff_t>(host) + 1, std::move(lower));
  env.source_interface = host;
  return env;
}

LayerSpectra layer_profile_spectra(const Layer& layer, double frequency) {
  const int n = layer.order;
  const std::vector<double> nodes = spectral::cgl_nodes(n);
  std::vector<Complex> rho(nodes.size()), inv_rho(nodes.size()), k2(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double z = layer.to_depth(nodes[j]);
    const double r = layer.rho.evaluate(z);
    const Complex k = complex_wavenumber(layer.c.evaluate(z), layer.alpha.evaluate(z), frequency);
    rho[j] = r;
    inv_rho[j] = 1.0 / r;
    k2[j] = k * k;
  }
  return LayerSpectra{spectral::chebyshev_forward(std::span<const Complex>(rho)),
                      spectral::chebyshev_forward(std::span<const Complex>(inv_rho)),
                      spectral::chebyshev_forward(std::span<const Complex>(k2))};
}

}  // namespace wavint
