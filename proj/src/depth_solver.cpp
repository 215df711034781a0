#include "wavint/depth_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wavint::depth {

using spectral::SpectralCoeffs;
using spectral::SpectralMatrix;

namespace {

struct EndpointRows {
  CRowVector top;         // Psi at t = +1
  CRowVector bottom;      // Psi at t = -1
  CRowVector top_dt;      // dPsi/dt at t = +1
  CRowVector bottom_dt;   // dPsi/dt at t = -1
};

EndpointRows endpoint_rows(int n) {
  const CMatrix d = spectral::derivative_matrix(n).entries();
  EndpointRows e;
  e.top = spectral::top_endpoint_row(n);
  e.bottom = spectral::bottom_endpoint_row(n);
  e.top_dt = e.top * d;
  e.bottom_dt = e.bottom * d;
  return e;
}

double max_medium_wavenumber(const Environment& env) {
  double best = 0.0;
  for (const Layer& l : env.layers) {
    for (double t : spectral::cgl_nodes(l.order)) {
      const double z = l.to_depth(t);
      best = std::max(best, std::abs(complex_wavenumber(l.c.evaluate(z), l.alpha.evaluate(z),
                                                        env.source.frequency)));
    }
  }
  return best;
}

}  // namespace

LayerOperator layer_matrix(const LayerSpectra& spectra, Complex kr, double thickness, std::size_t layer_index) {
  const int n = spectra.k2_hat.order();
  if (spectra.rho_hat.order() != n || spectra.inv_rho_hat.order() != n) {
    throw std::invalid_argument("layer_matrix: profile spectra orders differ");
  }
  if (!(thickness > 0.0)) throw std::invalid_argument("layer_matrix: layer thickness must be positive");
  const CMatrix d = spectral::derivative_matrix(n).entries();
  const CMatrix c_rho = spectral::product_matrix(spectra.rho_hat).entries();
  const CMatrix c_inv_rho = spectral::product_matrix(spectra.inv_rho_hat).entries();
  const CMatrix c_k2 = spectral::product_matrix(spectra.k2_hat).entries();

  CMatrix a = (4.0 / (thickness * thickness)) * (c_rho * d * c_inv_rho * d) + c_k2;
  a.diagonal().array() -= kr * kr;
  return LayerOperator{SpectralMatrix(std::move(a)), layer_index};
}

Complex halfspace_vertical_wavenumber(Complex kr, Complex k_halfspace) {
  Complex gamma = std::sqrt(kr * kr - k_halfspace * k_halfspace);
  if (gamma.real() < 0.0) gamma = -gamma;
  return gamma;
}

// ---------------------------------------------------------------------------
// DepthSolution

DepthSolution::DepthSolution(std::vector<Layer> layers, std::vector<SpectralCoeffs> coeffs)
    : layers_(std::move(layers)), coeffs_(std::move(coeffs)) {
  if (layers_.size() != coeffs_.size()) throw std::invalid_argument("DepthSolution: layer/coefficient count mismatch");
}

Complex DepthSolution::value_in_layer(std::size_t layer, double z) const {
  return spectral::chebyshev_evaluate(coeffs_.at(layer), layers_.at(layer).to_local(z));
}

Complex DepthSolution::value(double z) const {
  std::size_t i = 0;
  while (i + 1 < layers_.size() && z > layers_[i].z_bot) ++i;
  return value_in_layer(i, z);
}

Complex DepthSolution::derivative_in_layer(std::size_t layer, double z) const {
  const Layer& l = layers_.at(layer);
  const SpectralCoeffs& c = coeffs_.at(layer);
  const SpectralCoeffs dc = spectral::derivative_matrix(c.order()).apply(c);
  return l.local_scale() * spectral::chebyshev_evaluate(dc, l.to_local(z));
}

// ---------------------------------------------------------------------------
// DepthSolver

DepthSolver::DepthSolver(Environment env) : env_(std::move(env)) {
  validate(env_);
  if (!env_.source_interface) {
    throw std::invalid_argument("DepthSolver: environment has no source interface; call insert_source_interface");
  }
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l < env_.layers.size(); ++l) {
    const Layer& layer = env_.layers[l];
    const LayerSpectra spectra = layer_profile_spectra(layer, env_.source.frequency);
    base_.push_back(layer_matrix(spectra, 0.0, layer.thickness(), l).a.entries());
    offsets_.push_back(offset);
    offset += layer.order + 1;
  }
  dimension_ = offset;
  if (env_.bottom.kind == BottomKind::halfspace) {
    const HalfSpace& hs = env_.bottom.halfspace;
    k_halfspace_ = complex_wavenumber(hs.c, hs.alpha, env_.source.frequency);
  }
}

std::vector<ConditionRow> DepthSolver::condition_rows(Complex kr) const {
  const auto& layers = env_.layers;
  const std::size_t source_if = *env_.source_interface;
  std::vector<ConditionRow> rows;
  rows.reserve(2 * layers.size());

  auto blank = [&] { return CRowVector::Zero(dimension_); };
  auto put = [&](CRowVector& row, std::size_t layer, const CRowVector& piece) {
    row.segment(offsets_[layer], piece.size()) += piece;
  };

  // Slot order: surface, then per interface (pressure, derivative), then bottom.
  // Two consecutive entries land in the last two rows of one layer block.
  {
    ConditionRow r{blank(), 0.0, ConditionKind::surface};
    put(r.row, 0, spectral::top_endpoint_row(layers[0].order));
    rows.push_back(std::move(r));
  }
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    const Layer& above = layers[i];
    const Layer& below = layers[i + 1];
    const double h = above.z_bot;
    const EndpointRows ea = endpoint_rows(above.order);
    const EndpointRows eb = endpoint_rows(below.order);

    ConditionRow pressure{blank(), 0.0, ConditionKind::pressure_continuity};
    put(pressure.row, i, above.rho.evaluate(h) * ea.bottom);
    put(pressure.row, i + 1, -below.rho.evaluate(h) * eb.top);
    rows.push_back(std::move(pressure));

    const bool is_source = (i == source_if);
    ConditionRow velocity{blank(), is_source ? Complex(kSourceJump) : Complex(0.0),
                          is_source ? ConditionKind::source_jump : ConditionKind::velocity_continuity};
    put(velocity.row, i + 1, below.local_scale() * eb.top_dt);
    put(velocity.row, i, -above.local_scale() * ea.bottom_dt);
    rows.push_back(std::move(velocity));
  }
  {
    const std::size_t last = layers.size() - 1;
    const Layer& layer = layers[last];
    const EndpointRows e = endpoint_rows(layer.order);
    ConditionRow r{blank(), 0.0, ConditionKind::bottom};
    switch (env_.bottom.kind) {
      case BottomKind::pressure_release:
        put(r.row, last, e.bottom);
        break;
      case BottomKind::rigid:
        put(r.row, last, layer.local_scale() * e.bottom_dt);
        break;
      case BottomKind::halfspace: {
        const Complex gamma = halfspace_vertical_wavenumber(kr, k_halfspace_);
        const double rho_h = layer.rho.evaluate(layer.z_bot);
        put(r.row, last, env_.bottom.halfspace.rho * layer.local_scale() * e.bottom_dt + rho_h * gamma * e.bottom);
        break;
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

GlobalSystem DepthSolver::assemble(Complex kr) const {
  std::vector<ConditionRow> conditions = condition_rows(kr);
  const std::size_t blocks = env_.layers.size();
  if (conditions.size() != 2 * blocks) {
    throw std::logic_error("assemble: " + std::to_string(conditions.size()) + " condition rows for " +
                           std::to_string(2 * blocks) + " slots");
  }

  GlobalSystem sys;
  sys.matrix = CMatrix::Zero(dimension_, dimension_);
  sys.rhs = CVector::Zero(dimension_);
  sys.block_offsets = offsets_;
  const Complex shift = kr * kr;
  for (std::size_t l = 0; l < blocks; ++l) {
    const Eigen::Index off = offsets_[l];
    const Eigen::Index n = env_.layers[l].order;
    auto block = sys.matrix.block(off, off, n + 1, n + 1);
    block.topRows(n - 1) = base_[l].topRows(n - 1);
    for (Eigen::Index i = 0; i < n - 1; ++i) block(i, i) -= shift;
    for (int slot = 0; slot < 2; ++slot) {
      const ConditionRow& c = conditions[2 * l + slot];
      sys.matrix.row(off + n - 1 + slot) = c.row;
      sys.rhs(off + n - 1 + slot) = c.value;
    }
  }
  return sys;
}

CVector DepthSolver::solve_coefficients(Complex kr) const {
  const GlobalSystem sys = assemble(kr);
  try {
    return solve_complex_linear_system(sys.matrix, sys.rhs);
  } catch (const SingularSystemError&) {
    std::ostringstream msg;
    msg << "singular depth system at kr = " << kr;
    throw SingularSystemError(kr, msg.str());
  }
}

DepthSolution DepthSolver::solve(Complex kr) const {
  const CVector x = solve_coefficients(kr);
  std::vector<SpectralCoeffs> coeffs;
  for (std::size_t l = 0; l < env_.layers.size(); ++l) {
    coeffs.emplace_back(x.segment(offsets_[l], env_.layers[l].order + 1));
  }
  return DepthSolution(env_.layers, std::move(coeffs));
}

DepthSolver::Receivers DepthSolver::prepare_receivers(std::span<const double> depths) const {
  const double h = env_.total_depth();
  Receivers rec;
  for (double z : depths) {
    if (!(z >= 0.0 && z <= h)) {
      throw std::invalid_argument("receiver depth " + std::to_string(z) + " outside [0, H]");
    }
    const std::size_t l = env_.layer_at(z);
    const Layer& layer = env_.layers[l];
    const double t = std::clamp(layer.to_local(z), -1.0, 1.0);
    CRowVector basis(layer.order + 1);
    basis(0) = 1.0;
    basis(1) = t;
    for (int i = 1; i < layer.order; ++i) basis(i + 1) = 2.0 * t * basis(i) - basis(i - 1);
    rec.layer_.push_back(l);
    rec.basis_.push_back(std::move(basis));
  }
  return rec;
}

void DepthSolver::solve_at(Complex kr, const Receivers& receivers, std::span<Complex> out) const {
  if (out.size() != receivers.size()) throw std::invalid_argument("solve_at: output size mismatch");
  const CVector x = solve_coefficients(kr);
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    const std::size_t l = receivers.layer_[i];
    const CRowVector& b = receivers.basis_[i];
    out[i] = b * x.segment(offsets_[l], b.size());
  }
}

// ---------------------------------------------------------------------------
// Free-function entry points

std::vector<ConditionRow> build_condition_rows(const Environment& env, Complex kr) {
  return DepthSolver(env).condition_rows(kr);
}

GlobalSystem assemble_global(const Environment& env, Complex kr) { return DepthSolver(env).assemble(kr); }

std::vector<Complex> solve_depth(const Environment& env, Complex kr, std::span<const double> depths) {
  const DepthSolver solver(env);
  const DepthSolver::Receivers rec = solver.prepare_receivers(depths);
  std::vector<Complex> out(rec.size());
  solver.solve_at(kr, rec, out);
  return out;
}

CVector solve_complex_linear_system(const CMatrix& matrix, const CVector& rhs) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("solve_complex_linear_system: matrix not square");
  if (matrix.rows() != rhs.size()) throw std::invalid_argument("solve_complex_linear_system: dimension mismatch");
  const Eigen::PartialPivLU<CMatrix> lu(matrix);
  const auto& factors = lu.matrixLU();
  for (Eigen::Index i = 0; i < factors.rows(); ++i) {
    if (std::abs(factors(i, i)) < kSingularPivot) {
      throw SingularSystemError(0.0, "solve_complex_linear_system: zero pivot at row " + std::to_string(i));
    }
  }
  CVector x = lu.solve(rhs);
  if (!x.allFinite()) throw SingularSystemError(0.0, "solve_complex_linear_system: non-finite solution");
  return x;
}

// ---------------------------------------------------------------------------
// Residual check

double ConditionCheck::worst() const {
  double w = 0.0;
  for (const auto& r : residuals) w = std::max(w, r.relative);
  return w;
}

ConditionCheck check_conditions(const Environment& env, Complex kr, const DepthSolution& solution) {
  const auto& layers = solution.layers();
  const auto& coeffs = solution.coefficients();
  if (!env.source_interface) throw std::invalid_argument("check_conditions: no source interface");

  // Endpoint values and slopes via T_i(+-1) = (+-1)^i and T_i'(+-1) = (+-1)^(i+1) i^2.
  auto at_top = [&](std::size_t l) { return coeffs[l].values().sum(); };
  auto at_bottom = [&](std::size_t l) {
    Complex s = 0.0;
    for (int i = 0; i <= coeffs[l].order(); ++i) s += (i % 2 == 0 ? 1.0 : -1.0) * coeffs[l][i];
    return s;
  };
  auto slope_top = [&](std::size_t l) {
    Complex s = 0.0;
    for (int i = 1; i <= coeffs[l].order(); ++i) s += static_cast<double>(i) * i * coeffs[l][i];
    return layers[l].local_scale() * s;
  };
  auto slope_bottom = [&](std::size_t l) {
    Complex s = 0.0;
    for (int i = 1; i <= coeffs[l].order(); ++i) s += (i % 2 == 0 ? -1.0 : 1.0) * static_cast<double>(i) * i * coeffs[l][i];
    return layers[l].local_scale() * s;
  };

  ConditionCheck check;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (double t : spectral::cgl_nodes(layers[l].order)) {
      check.max_abs_psi = std::max(check.max_abs_psi, std::abs(spectral::chebyshev_evaluate(coeffs[l], t)));
    }
  }
  const double kappa = std::max(max_medium_wavenumber(env), std::abs(kr));
  const double value_scale = check.max_abs_psi > 0.0 ? check.max_abs_psi : 1.0;
  const double slope_scale = value_scale * kappa;

  check.residuals.push_back({ConditionKind::surface, 0, std::abs(at_top(0)) / value_scale});
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    const double h = layers[i].z_bot;
    const Complex p_above = layers[i].rho.evaluate(h) * at_bottom(i);
    const Complex p_below = layers[i + 1].rho.evaluate(h) * at_top(i + 1);
    check.residuals.push_back(
        {ConditionKind::pressure_continuity, i, std::abs(p_above - p_below) / (layers[i].rho.evaluate(h) * value_scale)});
    const Complex jump = slope_top(i + 1) - slope_bottom(i);
    if (i == *env.source_interface) {
      check.source_jump = jump;
      check.residuals.push_back({ConditionKind::source_jump, i, std::abs(jump - kSourceJump) / std::abs(kSourceJump)});
    } else {
      check.residuals.push_back({ConditionKind::velocity_continuity, i, std::abs(jump) / slope_scale});
    }
  }
  const std::size_t last = layers.size() - 1;
  double bottom = 0.0;
  switch (env.bottom.kind) {
    case BottomKind::pressure_release:
      bottom = std::abs(at_bottom(last)) / value_scale;
      break;
    case BottomKind::rigid:
      bottom = std::abs(slope_bottom(last)) / slope_scale;
      break;
    case BottomKind::halfspace: {
      const HalfSpace& hs = env.bottom.halfspace;
      const Complex k_inf = complex_wavenumber(hs.c, hs.alpha, env.source.frequency);
      const Complex gamma = halfspace_vertical_wavenumber(kr, k_inf);
      const double rho_h = layers[last].rho.evaluate(layers[last].z_bot);
      const Complex r = hs.rho * slope_bottom(last) + rho_h * gamma * at_bottom(last);
      bottom = std::abs(r) / (std::max(hs.rho, rho_h) * slope_scale);
      break;
    }
  }
  check.residuals.push_back({ConditionKind::bottom, 0, bottom});
  return check;
}

}  // namespace wavint::depth
