#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tqe/pulse.hpp"
#include "tqe/time_grid.hpp"
#include "tqe/types.hpp"

namespace tqe {

using ModeLabel = std::string;
using ModePair = std::pair<ModeLabel, ModeLabel>;

/// Two-photon joint temporal amplitude A[j][k] = Phi(t_j, t_k): the first
/// index is the temporal argument of the photon in modes.first, the second
/// that of the photon in modes.second.  norm^2 = sum |A|^2 dt^2.
///
/// When both photons share one mode the matrix must be transpose-symmetric;
/// in that case the stored convention is such that norm^2 contributions add
/// up uniformly across same-mode and cross-mode terms (see TwoPhotonState).
class JointAmplitude {
 public:
  JointAmplitude(TimeGrid grid, ModePair modes, CMat amp);

  const TimeGrid& grid() const { return grid_; }
  const ModePair& modes() const { return modes_; }
  const CMat& amp() const { return amp_; }
  bool same_mode() const { return modes_.first == modes_.second; }

  double norm_sq() const;
  bool is_normalized(double tol = kNormTol) const;
  JointAmplitude normalized() const;

  /// Largest |A - A^T| entry: 0 for an exchange-symmetric amplitude.
  double transpose_asymmetry() const;

  /// Amplitude with the second photon delayed by tau; bins shifted off the
  /// grid are dropped.  `leakage` receives the lost norm^2 fraction.
  JointAmplitude delayed_second(double tau, double* leakage = nullptr) const;

 private:
  TimeGrid grid_;
  ModePair modes_;
  CMat amp_;
};

/// Separable amplitude f(t1) g(t2) with the photons in the given modes.
JointAmplitude product_amplitude(const Pulse& f, const Pulse& g, ModePair modes);

/// Split of a cross-mode amplitude into its exchange-symmetric and
/// antisymmetric parts; weights are the norm^2 fractions of each part.
/// A part lighter than 1e-14 is returned as an explicit zero amplitude.
struct SymmetryDecomposition {
  JointAmplitude sym;
  JointAmplitude antisym;
  double weight_sym = 0.0;
  double weight_antisym = 0.0;
};

SymmetryDecomposition symmetry_decompose(const JointAmplitude& jta);

/// Schmidt data of a normalized amplitude: singular values of A dt sorted
/// descending, heralded-photon purity sum s_i^4 and Schmidt number 1/purity.
struct SchmidtResult {
  RVec coefficients;
  double purity = 0.0;
  double schmidt_number = 0.0;
};

SchmidtResult schmidt_analysis(const JointAmplitude& jta);

/// Reduced density matrix of the photon in modes.first (rho = A A^H dt,
/// continuous-kernel convention, unit trace for a normalized input).
CMat reduced_density_first(const JointAmplitude& jta);

}  // namespace tqe
