#pragma once

// Chebyshev-Tau solution of the depth-separated wave equation
//
//   rho d/dz (1/rho dPsi/dz) + (k^2(z) - kr^2) Psi = -delta(z - zs) / (2 pi)
//
// for one complex horizontal wavenumber kr. Each layer is expanded in its own
// Chebyshev series; the last two Tau rows of every layer block are replaced by
// boundary, interface and source-jump conditions and the resulting global
// system is solved densely.

#include <cstddef>
#include <span>
#include <vector>

#include "wavint/environment.hpp"
#include "wavint/error.hpp"
#include "wavint/spectral.hpp"
#include "wavint/types.hpp"

namespace wavint::depth {

/// Value of the derivative jump dPsi/dz(zs+) - dPsi/dz(zs-).
inline constexpr double kSourceJump = -1.0 / (2.0 * kPi);

/// Pivots with magnitude below this are reported as singular.
inline constexpr double kSingularPivot = 1e-300;

struct LayerOperator {
  spectral::SpectralMatrix a;
  std::size_t layer_index = 0;
};

/// A = 4/dh^2 C_rho D C_{1/rho} D + C_{k^2} - kr^2 I.
LayerOperator layer_matrix(const LayerSpectra& spectra, Complex kr, double thickness,
                           std::size_t layer_index = 0);

enum class ConditionKind { surface, bottom, pressure_continuity, velocity_continuity, source_jump };

/// One linear constraint over the global coefficient vector.
struct ConditionRow {
  CRowVector row;
  Complex value = 0.0;
  ConditionKind kind = ConditionKind::surface;
};

struct GlobalSystem {
  CMatrix matrix;
  CVector rhs;
  std::vector<Eigen::Index> block_offsets;  ///< start of each layer's coefficients
};

/// Solution coefficients of every layer for one wavenumber.
class DepthSolution {
 public:
  DepthSolution(std::vector<Layer> layers, std::vector<spectral::SpectralCoeffs> coeffs);

  const std::vector<spectral::SpectralCoeffs>& coefficients() const noexcept { return coeffs_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }

  /// Psi(z); a depth on an interface reads the layer above.
  Complex value(double z) const;
  Complex value_in_layer(std::size_t layer, double z) const;
  /// dPsi/dz evaluated from the given layer's expansion.
  Complex derivative_in_layer(std::size_t layer, double z) const;

 private:
  std::vector<Layer> layers_;
  std::vector<spectral::SpectralCoeffs> coeffs_;
};

/// Precomputes everything that does not depend on kr so repeated solves only
/// rebuild the diagonal shift and the half-space row. Immutable after
/// construction; safe to share between threads.
class DepthSolver {
 public:
  /// env must already carry a source interface tag (see insert_source_interface).
  explicit DepthSolver(Environment env);

  const Environment& environment() const noexcept { return env_; }
  Eigen::Index dimension() const noexcept { return dimension_; }

  std::vector<ConditionRow> condition_rows(Complex kr) const;
  GlobalSystem assemble(Complex kr) const;
  DepthSolution solve(Complex kr) const;

  /// Receiver depths prepared for repeated evaluation.
  class Receivers {
   public:
    std::size_t size() const noexcept { return layer_.size(); }

   private:
    friend class DepthSolver;
    std::vector<std::size_t> layer_;
    std::vector<CRowVector> basis_;  ///< T_i(t) at the receiver
  };

  Receivers prepare_receivers(std::span<const double> depths) const;

  /// Solves at kr and writes Psi at the prepared receivers into out.
  void solve_at(Complex kr, const Receivers& receivers, std::span<Complex> out) const;

 private:
  Environment env_;
  std::vector<CMatrix> base_;  ///< layer operators without the -kr^2 I term
  std::vector<Eigen::Index> offsets_;
  Eigen::Index dimension_ = 0;
  Complex k_halfspace_ = 0.0;

  CVector solve_coefficients(Complex kr) const;
};

std::vector<ConditionRow> build_condition_rows(const Environment& env, Complex kr);
GlobalSystem assemble_global(const Environment& env, Complex kr);

/// Psi at the receiver depths for one wavenumber. env must carry the source tag.
std::vector<Complex> solve_depth(const Environment& env, Complex kr, std::span<const double> depths);

/// LU with partial pivoting. Throws SingularSystemError on a zero pivot.
CVector solve_complex_linear_system(const CMatrix& matrix, const CVector& rhs);

/// Half-space vertical wavenumber sqrt(kr^2 - k_inf^2) on the branch Re >= 0.
Complex halfspace_vertical_wavenumber(Complex kr, Complex k_halfspace);

/// Physical residuals of every boundary, interface and jump condition,
/// computed from the solution coefficients without reusing the condition rows.
struct ConditionResidual {
  ConditionKind kind;
  std::size_t interface = 0;  ///< for interface conditions
  double relative = 0.0;
};

struct ConditionCheck {
  std::vector<ConditionResidual> residuals;
  double max_abs_psi = 0.0;
  Complex source_jump = 0.0;  ///< measured dPsi/dz(zs+) - dPsi/dz(zs-)

  double worst() const;
};

/// Value conditions are scaled by max|Psi|, derivative conditions by
/// max|Psi| * max(|k(z)|, |kr|), the jump by 1/(2 pi).
ConditionCheck check_conditions(const Environment& env, Complex kr, const DepthSolution& solution);

}  // namespace wavint::depth
