#pragma once

#include <map>
#include <string>
#include <vector>

#include "tqe/joint_amplitude.hpp"
#include "tqe/pulse.hpp"
#include "tqe/types.hpp"

namespace tqe {

/// Two-mode linear coupler: in_j^dag -> sum_i u(i, j) out_i^dag.
/// u must be unitary to 1e-12.
struct BeamSplitterConvention {
  ModeLabel in0, in1;
  ModeLabel out0, out1;
  Eigen::Matrix2cd u;

  BeamSplitterConvention(ModeLabel i0, ModeLabel i1, ModeLabel o0, ModeLabel o1,
                         const Eigen::Matrix2cd& unitary);
};

/// 50:50 splitter with the real Hadamard convention
///   in0^dag -> (out0^dag + out1^dag)/sqrt(2),
///   in1^dag -> (out0^dag - out1^dag)/sqrt(2).
BeamSplitterConvention hadamard_bs(ModeLabel in0, ModeLabel in1, ModeLabel out0,
                                   ModeLabel out1);

/// Superposition of two-photon terms over canonically ordered mode pairs of a
/// declared mode set.  Stored amplitudes use the convention in which every
/// term contributes ||M||^2 dt^2 to the total norm^2; same-mode matrices are
/// exchange symmetric and absorb the bosonic 1/sqrt(2) at construction.
class TwoPhotonState {
 public:
  TwoPhotonState(TimeGrid grid, std::vector<ModeLabel> modes);

  /// Single-term state from a joint amplitude (modes added if missing).
  static TwoPhotonState from_jta(const JointAmplitude& jta);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<ModeLabel>& modes() const { return modes_; }
  const std::map<ModePair, CMat>& terms() const { return terms_; }
  bool has_mode(const ModeLabel& m) const;

  /// Adds coeff * F(t1, t2) photon1^dag(t1) photon2^dag(t2) in raw operator
  /// form; canonical ordering and same-mode conventions applied internally.
  void add_raw_term(const ModeLabel& photon1, const ModeLabel& photon2, const CMat& f,
                    Complex coeff = 1.0);

  double norm_sq() const;
  bool is_normalized(double tol = kNormTol) const;
  TwoPhotonState normalized() const;

  /// norm^2 carried by the (p, q) pair (canonicalized; 0 when absent).
  double pair_weight(const ModeLabel& p, const ModeLabel& q) const;
  /// Total norm^2 on same-mode (bunched) pairs.
  double same_mode_weight() const;

  void scale(Complex c);
  /// Drops terms with ||M|| below tol (keeps the state tidy after interference).
  void prune(double tol = 1e-14);

 private:
  TimeGrid grid_;
  std::vector<ModeLabel> modes_;
  std::map<ModePair, CMat> terms_;
};

/// Substitutes the splitter convention into every term.  Norm is preserved
/// (unitarity); input modes disappear from the mode set, outputs are added.
TwoPhotonState apply_beam_splitter(const TwoPhotonState& state,
                                   const BeamSplitterConvention& bs);

/// Phase shifter: mode^dag -> e^{i phase} mode^dag.
TwoPhotonState phase_shift(const TwoPhotonState& state, const ModeLabel& mode, double phase);

/// Conditional one-photon amplitude densities after annihilating one photon
/// of a normalized state at (mode, bin), and the Glauber detection density
/// <n(mode, t_bin)>.  Summed over all modes and integrated over time the
/// density resolves to the photon number (2).
struct DetectionResult {
  std::map<ModeLabel, CVec> remaining;
  double prob_density = 0.0;
};

DetectionResult detect(const TwoPhotonState& state, const ModeLabel& mode, int bin);

/// Hong-Ou-Mandel coincidence rate for a cross-mode amplitude whose second
/// photon is delayed by tau before a balanced splitter:
///   R(tau) = (1 - Re<A_tau, swap(A_tau)> / ||A_tau||^2) / 2.
/// Throws when the delay leaks more than 1e-6 of the norm off the grid.
double hom_coincidence(const JointAmplitude& jta, double tau);

/// Complement of hom_coincidence computed independently through the splitter:
/// total same-mode (bunched) output weight.
double bunching_probability(const JointAmplitude& jta, double tau);

/// Single photon in a mixed temporal state: Hermitian PSD kernel rho(t_j, t_k)
/// with unit trace (sum of the diagonal times dt).
class MixedSinglePhoton {
 public:
  MixedSinglePhoton(TimeGrid grid, CMat rho);

  static MixedSinglePhoton from_pulse(const Pulse& f);
  static MixedSinglePhoton from_mixture(const std::vector<std::pair<double, Pulse>>& parts);

  const TimeGrid& grid() const { return grid_; }
  const CMat& rho() const { return rho_; }
  double purity() const;

  /// Eigen-decomposition as (weight, envelope) pairs, weights descending,
  /// negligible weights dropped.
  std::vector<std::pair<double, Pulse>> eigenmodes(double tol = 1e-12) const;

 private:
  TimeGrid grid_;
  CMat rho_;
};

/// Coincidence probability when modes a and b of a normalized two-photon
/// state meet on a balanced splitter: the cross-pair output weight.  Works
/// for same-mode structured states (both photons in a or in b) as well.
double coincidence_after_interference(const TwoPhotonState& state, const ModeLabel& a,
                                      const ModeLabel& b);

/// HOM coincidence of two independent mixed photons: (1 - Re Tr[rho_a rho_b]) / 2.
double hom_coincidence_mixed(const MixedSinglePhoton& rho_a, const MixedSinglePhoton& rho_b);

/// Antisymmetric-sector weight of the product state rho (x) rho:
/// Tr[(rho (x) rho) P_antisym] = (1 - Tr[rho^2]) / 2.
double antisymmetric_weight_of_pair(const MixedSinglePhoton& rho);

}  // namespace tqe
