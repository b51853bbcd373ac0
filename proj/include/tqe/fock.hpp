#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "tqe/optics.hpp"
#include "tqe/types.hpp"

namespace tqe {

/// Exact truncated Fock basis over (spatial mode x time bin) single-particle
/// slots, enumerating every occupation vector with total photon number up to
/// the cutoff in lexicographic order.  Deliberately capped at brute-force
/// sizes: this is the ground-truth engine, not a simulator.
class FockBasis {
 public:
  FockBasis(std::vector<ModeLabel> modes, int n_bins, int cutoff);

  const std::vector<ModeLabel>& modes() const { return modes_; }
  int n_bins() const { return n_bins_; }
  int cutoff() const { return cutoff_; }
  int single_particle_dim() const { return static_cast<int>(modes_.size()) * n_bins_; }
  int size() const { return static_cast<int>(states_.size()); }

  int slot(const ModeLabel& mode, int bin) const;
  const std::vector<uint8_t>& occupation(int index) const { return states_[index]; }
  int index_of(const std::vector<uint8_t>& occ) const;
  int total_photons(int index) const;

 private:
  std::vector<ModeLabel> modes_;
  int n_bins_;
  int cutoff_;
  std::vector<std::vector<uint8_t>> states_;
  std::unordered_map<std::string, int> index_;
};

/// Amplitude vector over a shared FockBasis.
class FockVector {
 public:
  explicit FockVector(std::shared_ptr<const FockBasis> basis);
  FockVector(std::shared_ptr<const FockBasis> basis, CVec amp);

  const FockBasis& basis() const { return *basis_; }
  const std::shared_ptr<const FockBasis>& basis_ptr() const { return basis_; }
  const CVec& amp() const { return amp_; }
  CVec& amp() { return amp_; }

  Complex at(const std::vector<uint8_t>& occ) const;
  void set(const std::vector<uint8_t>& occ, Complex c);

  double norm_sq() const { return amp_.squaredNorm(); }
  FockVector normalized() const;

  /// Nonzero entries as (occupation, amplitude), basis order.
  std::vector<std::pair<std::vector<uint8_t>, Complex>> entries(double tol = 1e-14) const;

 private:
  std::shared_ptr<const FockBasis> basis_;
  CVec amp_;
};

/// a^dag on a single-particle slot (drops components beyond the cutoff).
FockVector apply_creation(const FockVector& v, int slot);

/// Second-quantized lift of a single-particle unitary u (dim x dim), applied
/// by rewriting each creation operator of each basis state.  Photon number is
/// conserved exactly; cost scales with the fill of u's columns.
FockVector apply_linear_unitary(const FockVector& v, const CMat& u);

/// Identity everywhere except the (mode_a, mode_b) pair, which is mixed
/// bin-by-bin with the given 2x2 matrix (conventions as BeamSplitterConvention).
CMat mode_pair_unitary(const FockBasis& basis, const ModeLabel& mode_a, const ModeLabel& mode_b,
                       const Eigen::Matrix2cd& u);

/// Displaces vacuum modes of v into a coherent state with the given
/// single-particle amplitudes (slot index -> alpha).  The injected modes must
/// currently hold no photons.  Throws when the truncated tail exceeds 1e-4;
/// the actual truncation error is written to *truncation_error if non-null.
FockVector coherent_inject(const FockVector& v, const std::vector<Complex>& alphas,
                           double* truncation_error = nullptr);

/// Unnormalized exponential raise exp(sum_k alpha_k a_k^dag) v truncated at
/// the basis cutoff.  Building block for source models that carry their own
/// normalization prefactors.
FockVector exponential_raise(const FockVector& v, const std::vector<Complex>& alphas);

struct ConditionResult {
  FockVector state;
  double probability = 0.0;
  bool empty = false;
};

struct PatternEntry {
  ModeLabel mode;
  int bin = 0;
  int count = 0;
};

/// Projects onto an exact time-resolved detection record: each listed
/// (mode, bin) holds exactly `count` photons and every other bin of a
/// mentioned mode is empty.  Unmentioned modes are unconstrained.
ConditionResult condition_on_pattern(const FockVector& v, const std::vector<PatternEntry>& pattern);

/// Projects onto given total photon numbers per mode (bucket detection).
ConditionResult condition_on_mode_totals(const FockVector& v,
                                         const std::map<ModeLabel, int>& totals);

/// Distribution of the total photon number in one mode, indices 0..cutoff.
std::vector<double> mode_total_distribution(const FockVector& v, const ModeLabel& mode);

/// Projects onto even (parity = 0) or odd (parity = 1) total count in a mode.
ConditionResult condition_on_mode_parity(const FockVector& v, const ModeLabel& mode, int parity);

/// Reduced density matrix on the sector with exactly one photon in mode_p and
/// one in mode_q (all other modes traced out), indexed by bin pair
/// j * n_bins + k for (p at bin j, q at bin k).  Not normalized: its trace is
/// the probability weight of that sector.
CMat reduced_pair_density(const FockVector& v, const ModeLabel& mode_p, const ModeLabel& mode_q);

/// <SWAP> of a pair-sector density matrix from reduced_pair_density,
/// normalized by its trace; +1 for exchange-symmetric, -1 for antisymmetric.
double pair_exchange_expectation(const CMat& pair_density, int n_bins);

/// Exact Fock image of a TwoPhotonState (stored-convention amplitudes map to
/// occupation amplitudes with the dt factors made explicit).
FockVector fock_from_two_photon(const TwoPhotonState& state,
                                std::shared_ptr<const FockBasis> basis);

}  // namespace tqe
