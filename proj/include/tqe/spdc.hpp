#pragma once

#include <vector>

#include "tqe/optics.hpp"

namespace tqe {

/// Correlated pair-source model: double-gaussian joint temporal amplitude
///   Phi(t1, t2) ~ exp(-(t1 + t2 - 2 t0)^2 / (4 sigma_sum^2))
///              * exp(-(t1 - t2)^2 / (4 sigma_diff^2)),
/// with t1 the idler and t2 the signal time argument.
struct SpdcModel {
  TimeGrid grid;
  double sigma_sum;
  double sigma_diff;
  double t0 = 0.0;
};

/// Grid sized to hold the joint amplitude comfortably (about seven marginal
/// widths around t0).
TimeGrid spdc_default_grid(double sigma_sum, double sigma_diff, double t0, int n_bins = 200);

/// Normalized joint amplitude of one source, modes ("idler", "signal").
/// Requires at least three bins per feature width.
JointAmplitude spdc_joint_amplitude(const SpdcModel& model);

/// Closed-form heralded-photon purity of the double-gaussian amplitude:
/// 2 u v / (u^2 + v^2).
double spdc_analytic_purity(double sigma_sum, double sigma_diff);

/// Width ratio sigma_sum / sigma_diff that realizes a target Schmidt number.
double spdc_ratio_for_schmidt_number(double schmidt_number);

/// One product term of a four-photon state: two photons on "heralding" slots
/// with temporal arguments (x, y) and two on "signal" slots with arguments
/// (u, v).  The kernel is coeff * f(x, u) g(y, v) for a parallel pairing and
/// coeff * f(x, v) g(y, u) for a crossed one.
struct FourPhotonTerm {
  ModeLabel mode_x, mode_y;  // modes of the photons at arguments x, y
  ModeLabel mode_u, mode_v;  // modes of the photons at arguments u, v
  CMat f, g;
  bool crossed = false;
  Complex coeff{1.0, 0.0};
};

/// Sum of FourPhotonTerm kernels, closed under heralding-side beam splitters,
/// signal-argument exchange and heralding detections.  Inner products perform
/// the full bosonic matching over equal-mode slots, so same-mode terms (both
/// heralding photons in one waveguide) are handled exactly.
class FourPhotonState {
 public:
  explicit FourPhotonState(TimeGrid grid) : grid_(grid) {}

  const TimeGrid& grid() const { return grid_; }
  const std::vector<FourPhotonTerm>& terms() const { return terms_; }
  void add_term(FourPhotonTerm term);

  Complex inner(const FourPhotonState& other) const;
  double norm_sq() const;
  FourPhotonState scaled(Complex c) const;

  /// Kernel with the two signal temporal arguments exchanged.
  FourPhotonState signal_swapped() const;
  /// <swap_signal> / norm^2: +1 on exchange-symmetric states, -1 on
  /// antisymmetric ones.
  double signal_exchange_expectation() const;
  /// Zero-delay HOM coincidence of the signal pair, valid for mixtures.
  double signal_hom_coincidence() const;

  /// Splitter substitution on the heralding-side mode labels.
  FourPhotonState apply_heralding_bs(const BeamSplitterConvention& bs) const;

  /// Unnormalized signal state after annihilating heralding photons at
  /// (mode1, bin1) and (mode2, bin2); its norm^2 dt^2 is the joint density of
  /// that detection record.
  TwoPhotonState condition_heralding(const ModeLabel& mode1, int bin1, const ModeLabel& mode2,
                                     int bin2) const;

  /// Probability of detecting one heralding photon in mode_a and one in
  /// mode_b, summed over bins (the two-detection counting factor for
  /// mode_a == mode_b included).  Brute O(n^2) conditionals: oracle-regime
  /// grids only.
  double detection_pattern_probability(const ModeLabel& mode_a, const ModeLabel& mode_b) const;

 private:
  TimeGrid grid_;
  std::vector<FourPhotonTerm> terms_;
};

/// State of two identical pair sources (one pair each), organized by the
/// exchange symmetry m of idlers and signals jointly: the m = 0 / m = 1
/// branches sum to the raw product state.  Heralding slots are modes
/// ("a_i", "b_i"), signal slots ("a_s", "b_s").
FourPhotonState two_source_branch(const JointAmplitude& phi, int m);
FourPhotonState spdc_two_source_branch(const SpdcModel& model, int m);

/// Normalized state of the double-pair channel (either source emits both
/// pairs, pump phases aligned).  Heralding slots carry modes a_i / b_i,
/// signal slots a_s / b_s.
FourPhotonState double_pair_channel(const JointAmplitude& phi);

enum class HeraldSymmetry { symmetric = 0, antisymmetric = 1 };
enum class SpdcChannel { cross_source, double_pair };

struct SpdcHerald {
  HeraldSymmetry symmetry;
  SpdcChannel channel;
  /// Conditioned on the channel firing and both heralding photons detected.
  double herald_prob = 0.0;
  /// Full four-photon branch before the heralding splitter.
  FourPhotonState branch;
  /// Representative conditional signal state at the most likely heralding
  /// detection record (every record yields the same exchange symmetry).
  TwoPhotonState signal_state;
};

/// Cross-source channel: idlers of two single-pair sources interfere and two
/// detections herald the signal symmetry.  Returns the symmetric (coalescent
/// detections) and antisymmetric (coincident) outcomes.
std::vector<SpdcHerald> tqe_herald_cross(const SpdcModel& model);

/// Double-pair channel: one source emits two pairs (pump phases aligned so
/// the two-source superposition is even).  Heralded signal photons share one
/// waveguide; coalescent detections herald the (aa + bb)-type state,
/// coincident the (aa - bb)-type.
std::vector<SpdcHerald> tqe_herald_double_pair(const SpdcModel& model);

/// Second-order herald budget at pair-generation probability p per source:
/// cross-source double herald p^2, single-source double-pair herald
/// p^2 (1 + purity), remainder unheralded.
struct HeraldStatistics {
  double cross = 0.0;
  double double_pair = 0.0;
  double none = 0.0;
  double double_pair_to_cross_ratio = 0.0;
};

HeraldStatistics herald_statistics(const SpdcModel& model, double pair_gen_prob);

}  // namespace tqe
