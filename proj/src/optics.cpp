#include "tqe/optics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace tqe {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

ModePair canonical(const ModeLabel& a, const ModeLabel& b) {
  return a <= b ? ModePair{a, b} : ModePair{b, a};
}

}  // namespace

BeamSplitterConvention::BeamSplitterConvention(ModeLabel i0, ModeLabel i1, ModeLabel o0,
                                               ModeLabel o1, const Eigen::Matrix2cd& unitary)
    : in0(std::move(i0)), in1(std::move(i1)), out0(std::move(o0)), out1(std::move(o1)),
      u(unitary) {
  if (in0 == in1 || out0 == out1)
    throw std::invalid_argument("BeamSplitterConvention: duplicate mode labels");
  Eigen::Matrix2cd residual = u.adjoint() * u - Eigen::Matrix2cd::Identity();
  if (residual.cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("BeamSplitterConvention: matrix is not unitary");
}

BeamSplitterConvention hadamard_bs(ModeLabel in0, ModeLabel in1, ModeLabel out0,
                                   ModeLabel out1) {
  Eigen::Matrix2cd h;
  h << 1.0 / kSqrt2, 1.0 / kSqrt2, 1.0 / kSqrt2, -1.0 / kSqrt2;
  return BeamSplitterConvention(std::move(in0), std::move(in1), std::move(out0),
                                std::move(out1), h);
}

TwoPhotonState::TwoPhotonState(TimeGrid grid, std::vector<ModeLabel> modes)
    : grid_(grid), modes_(std::move(modes)) {
  for (size_t i = 0; i < modes_.size(); ++i)
    for (size_t j = i + 1; j < modes_.size(); ++j)
      if (modes_[i] == modes_[j])
        throw std::invalid_argument("TwoPhotonState: duplicate mode label");
}

TwoPhotonState TwoPhotonState::from_jta(const JointAmplitude& jta) {
  std::vector<ModeLabel> modes{jta.modes().first};
  if (!jta.same_mode()) modes.push_back(jta.modes().second);
  TwoPhotonState st(jta.grid(), std::move(modes));
  if (jta.same_mode()) {
    // Stored same-mode amplitudes already follow the absorbed-sqrt(2)
    // convention, so insert directly rather than through add_raw_term.
    st.terms_[canonical(jta.modes().first, jta.modes().second)] = jta.amp();
  } else {
    st.add_raw_term(jta.modes().first, jta.modes().second, jta.amp());
  }
  return st;
}

bool TwoPhotonState::has_mode(const ModeLabel& m) const {
  return std::find(modes_.begin(), modes_.end(), m) != modes_.end();
}

void TwoPhotonState::add_raw_term(const ModeLabel& photon1, const ModeLabel& photon2,
                                  const CMat& f, Complex coeff) {
  if (!has_mode(photon1) || !has_mode(photon2))
    throw std::invalid_argument("TwoPhotonState: unknown mode label");
  if (f.rows() != grid_.n_bins() || f.cols() != grid_.n_bins())
    throw std::invalid_argument("TwoPhotonState: term shape does not match grid");
  const ModePair key = canonical(photon1, photon2);
  CMat& slot = terms_.try_emplace(key, CMat::Zero(grid_.n_bins(), grid_.n_bins())).first->second;
  if (photon1 == photon2) {
    // Raw coefficient C contributes sqrt(2) * sym(C) in the stored convention.
    slot += coeff * (kSqrt2 * 0.5) * (f + f.transpose());
  } else if (photon1 == key.first) {
    slot += coeff * f;
  } else {
    slot += coeff * f.transpose();
  }
}

double TwoPhotonState::norm_sq() const {
  const double dt2 = grid_.dt() * grid_.dt();
  double total = 0.0;
  for (const auto& [key, m] : terms_) total += m.squaredNorm() * dt2;
  return total;
}

bool TwoPhotonState::is_normalized(double tol) const {
  return std::abs(norm_sq() - 1.0) <= tol;
}

TwoPhotonState TwoPhotonState::normalized() const {
  double n2 = norm_sq();
  if (n2 <= 0.0) throw std::domain_error("TwoPhotonState: cannot normalize zero state");
  TwoPhotonState out = *this;
  out.scale(1.0 / std::sqrt(n2));
  return out;
}

double TwoPhotonState::pair_weight(const ModeLabel& p, const ModeLabel& q) const {
  auto it = terms_.find(canonical(p, q));
  if (it == terms_.end()) return 0.0;
  const double dt2 = grid_.dt() * grid_.dt();
  return it->second.squaredNorm() * dt2;
}

double TwoPhotonState::same_mode_weight() const {
  const double dt2 = grid_.dt() * grid_.dt();
  double total = 0.0;
  for (const auto& [key, m] : terms_)
    if (key.first == key.second) total += m.squaredNorm() * dt2;
  return total;
}

void TwoPhotonState::scale(Complex c) {
  for (auto& [key, m] : terms_) m *= c;
}

void TwoPhotonState::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.cwiseAbs().maxCoeff() < tol)
      it = terms_.erase(it);
    else
      ++it;
  }
}

TwoPhotonState apply_beam_splitter(const TwoPhotonState& state,
                                   const BeamSplitterConvention& bs) {
  if (!state.has_mode(bs.in0) && !state.has_mode(bs.in1))
    throw std::invalid_argument("apply_beam_splitter: splitter touches no state mode");

  // Output mode set: inputs replaced by outputs.
  std::vector<ModeLabel> out_modes;
  for (const auto& m : state.modes())
    if (m != bs.in0 && m != bs.in1) out_modes.push_back(m);
  for (const auto& m : {bs.out0, bs.out1})
    if (std::find(out_modes.begin(), out_modes.end(), m) == out_modes.end())
      out_modes.push_back(m);

  TwoPhotonState out(state.grid(), out_modes);

  auto substitution = [&bs](const ModeLabel& m) {
    std::vector<std::pair<ModeLabel, Complex>> terms;
    if (m == bs.in0) {
      terms = {{bs.out0, bs.u(0, 0)}, {bs.out1, bs.u(1, 0)}};
    } else if (m == bs.in1) {
      terms = {{bs.out0, bs.u(0, 1)}, {bs.out1, bs.u(1, 1)}};
    } else {
      terms = {{m, 1.0}};
    }
    return terms;
  };

  for (const auto& [key, stored] : state.terms()) {
    // Back to the raw operator coefficient.
    CMat raw = key.first == key.second ? CMat(stored / kSqrt2) : stored;
    for (const auto& [mode1, c1] : substitution(key.first))
      for (const auto& [mode2, c2] : substitution(key.second))
        out.add_raw_term(mode1, mode2, raw, c1 * c2);
  }
  out.prune();
  return out;
}

TwoPhotonState phase_shift(const TwoPhotonState& state, const ModeLabel& mode, double phase) {
  if (!state.has_mode(mode)) throw std::invalid_argument("phase_shift: unknown mode");
  TwoPhotonState out = state;
  const Complex ph = std::exp(kI * phase);
  TwoPhotonState result(state.grid(), state.modes());
  for (const auto& [key, m] : out.terms()) {
    Complex factor = 1.0;
    if (key.first == mode) factor *= ph;
    if (key.second == mode) factor *= ph;
    CMat raw = key.first == key.second ? CMat(m / kSqrt2) : m;
    result.add_raw_term(key.first, key.second, raw, factor);
  }
  return result;
}

DetectionResult detect(const TwoPhotonState& state, const ModeLabel& mode, int bin) {
  if (!state.has_mode(mode)) throw std::invalid_argument("detect: unknown mode");
  if (bin < 0 || bin >= state.grid().n_bins())
    throw std::invalid_argument("detect: bin out of range");

  DetectionResult res;
  const int n = state.grid().n_bins();
  auto slot = [&res, n](const ModeLabel& m) -> CVec& {
    return res.remaining.try_emplace(m, CVec::Zero(n)).first->second;
  };

  for (const auto& [key, stored] : state.terms()) {
    if (key.first == key.second) {
      if (key.first == mode) slot(key.first) += kSqrt2 * stored.row(bin).transpose();
    } else {
      if (key.first == mode) slot(key.second) += stored.row(bin).transpose();
      if (key.second == mode) slot(key.first) += stored.col(bin);
    }
  }

  double n2 = 0.0;
  for (const auto& [m, env] : res.remaining) n2 += env.squaredNorm() * state.grid().dt();
  res.prob_density = n2;
  return res;
}

double hom_coincidence(const JointAmplitude& jta, double tau) {
  if (jta.same_mode())
    throw std::invalid_argument("hom_coincidence: photons must enter distinct ports");
  if (!jta.is_normalized(1e-8))
    throw std::invalid_argument("hom_coincidence: amplitude must be normalized");
  double leakage = 0.0;
  JointAmplitude shifted = jta.delayed_second(tau, &leakage);
  if (leakage > 1e-6)
    throw std::domain_error("hom_coincidence: delay pushes " + std::to_string(leakage) +
                            " of the amplitude off the grid");
  const CMat& a = shifted.amp();
  const double exchange = (a.cwiseProduct(a.adjoint())).sum().real();
  return 0.5 * (1.0 - exchange / a.squaredNorm());
}

double bunching_probability(const JointAmplitude& jta, double tau) {
  double leakage = 0.0;
  JointAmplitude shifted = jta.delayed_second(tau, &leakage);
  if (leakage > 1e-6)
    throw std::domain_error("bunching_probability: delay leaks amplitude off the grid");
  TwoPhotonState in = TwoPhotonState::from_jta(shifted.normalized());
  TwoPhotonState after =
      apply_beam_splitter(in, hadamard_bs(jta.modes().first, jta.modes().second, "bs_out_c",
                                          "bs_out_d"));
  return after.same_mode_weight() / after.norm_sq();
}

MixedSinglePhoton::MixedSinglePhoton(TimeGrid grid, CMat rho) : grid_(grid), rho_(std::move(rho)) {
  const int n = grid_.n_bins();
  if (rho_.rows() != n || rho_.cols() != n)
    throw std::invalid_argument("MixedSinglePhoton: kernel shape does not match grid");
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("MixedSinglePhoton: kernel is not Hermitian");
  double trace = (rho_.trace() * grid_.dt()).real();
  if (std::abs(trace - 1.0) > 1e-8)
    throw std::invalid_argument("MixedSinglePhoton: trace differs from 1");
  Eigen::SelfAdjointEigenSolver<CMat> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() * grid_.dt() < -1e-10)
    throw std::invalid_argument("MixedSinglePhoton: kernel has a negative eigenvalue");
}

MixedSinglePhoton MixedSinglePhoton::from_pulse(const Pulse& f) {
  Pulse fn = f.normalized();
  return MixedSinglePhoton(f.grid(), fn.amp() * fn.amp().adjoint());
}

MixedSinglePhoton MixedSinglePhoton::from_mixture(
    const std::vector<std::pair<double, Pulse>>& parts) {
  if (parts.empty()) throw std::invalid_argument("MixedSinglePhoton: empty mixture");
  const TimeGrid grid = parts.front().second.grid();
  CMat rho = CMat::Zero(grid.n_bins(), grid.n_bins());
  double total = 0.0;
  for (const auto& [w, pulse] : parts) {
    require_same_grid(grid, pulse.grid(), "MixedSinglePhoton::from_mixture");
    if (w < 0.0) throw std::invalid_argument("MixedSinglePhoton: negative mixture weight");
    Pulse pn = pulse.normalized();
    rho += w * (pn.amp() * pn.amp().adjoint());
    total += w;
  }
  return MixedSinglePhoton(grid, rho / total);
}

double MixedSinglePhoton::purity() const {
  const double dt2 = grid_.dt() * grid_.dt();
  return ((rho_ * rho_).trace() * dt2).real();
}

std::vector<std::pair<double, Pulse>> MixedSinglePhoton::eigenmodes(double tol) const {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho_);
  std::vector<std::pair<double, Pulse>> modes;
  const int n = grid_.n_bins();
  for (int i = n - 1; i >= 0; --i) {
    double w = es.eigenvalues()(i) * grid_.dt();
    if (w < tol) continue;
    CVec env = es.eigenvectors().col(i) / std::sqrt(grid_.dt());
    modes.emplace_back(w, Pulse(grid_, env));
  }
  return modes;
}

double coincidence_after_interference(const TwoPhotonState& state, const ModeLabel& a,
                                      const ModeLabel& b) {
  TwoPhotonState out = apply_beam_splitter(state, hadamard_bs(a, b, "_hom_c", "_hom_d"));
  return out.pair_weight("_hom_c", "_hom_d") / out.norm_sq();
}

double hom_coincidence_mixed(const MixedSinglePhoton& rho_a, const MixedSinglePhoton& rho_b) {
  require_same_grid(rho_a.grid(), rho_b.grid(), "hom_coincidence_mixed");
  const double dt2 = rho_a.grid().dt() * rho_a.grid().dt();
  double cross = ((rho_a.rho() * rho_b.rho()).trace() * dt2).real();
  return 0.5 * (1.0 - cross);
}

double antisymmetric_weight_of_pair(const MixedSinglePhoton& rho) {
  return 0.5 * (1.0 - rho.purity());
}

}  // namespace tqe
