#include "tqe/fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace tqe {

namespace {

std::string occ_key(const std::vector<uint8_t>& occ) {
  return std::string(reinterpret_cast<const char*>(occ.data()), occ.size());
}

constexpr double kAmpTol = 1e-16;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

FockBasis::FockBasis(std::vector<ModeLabel> modes, int n_bins, int cutoff)
    : modes_(std::move(modes)), n_bins_(n_bins), cutoff_(cutoff) {
  if (modes_.empty()) throw std::invalid_argument("FockBasis: need at least one mode");
  if (n_bins_ < 1 || n_bins_ > 6)
    throw std::invalid_argument("FockBasis: n_bins must be in [1, 6]");
  if (cutoff_ < 0 || cutoff_ > 4)
    throw std::invalid_argument("FockBasis: cutoff must be in [0, 4]");

  const int dim = single_particle_dim();
  std::vector<uint8_t> occ(dim, 0);
  std::function<void(int, int)> enumerate = [&](int slot, int remaining) {
    if (slot == dim) {
      states_.push_back(occ);
      return;
    }
    for (int n = 0; n <= remaining; ++n) {
      occ[slot] = static_cast<uint8_t>(n);
      enumerate(slot + 1, remaining - n);
    }
    occ[slot] = 0;
  };
  enumerate(0, cutoff_);
  if (states_.size() > 60000)
    throw std::invalid_argument("FockBasis: basis exceeds the brute-force cap");

  index_.reserve(states_.size());
  for (size_t i = 0; i < states_.size(); ++i) index_[occ_key(states_[i])] = static_cast<int>(i);
}

int FockBasis::slot(const ModeLabel& mode, int bin) const {
  if (bin < 0 || bin >= n_bins_) throw std::invalid_argument("FockBasis: bin out of range");
  auto it = std::find(modes_.begin(), modes_.end(), mode);
  if (it == modes_.end()) throw std::invalid_argument("FockBasis: unknown mode " + mode);
  return static_cast<int>(it - modes_.begin()) * n_bins_ + bin;
}

int FockBasis::index_of(const std::vector<uint8_t>& occ) const {
  auto it = index_.find(occ_key(occ));
  if (it == index_.end()) return -1;
  return it->second;
}

int FockBasis::total_photons(int index) const {
  int total = 0;
  for (uint8_t n : states_[index]) total += n;
  return total;
}

FockVector::FockVector(std::shared_ptr<const FockBasis> basis)
    : basis_(std::move(basis)), amp_(CVec::Zero(basis_->size())) {}

FockVector::FockVector(std::shared_ptr<const FockBasis> basis, CVec amp)
    : basis_(std::move(basis)), amp_(std::move(amp)) {
  if (amp_.size() != basis_->size())
    throw std::invalid_argument("FockVector: amplitude length does not match basis");
}

Complex FockVector::at(const std::vector<uint8_t>& occ) const {
  int idx = basis_->index_of(occ);
  return idx < 0 ? Complex{0.0, 0.0} : amp_(idx);
}

void FockVector::set(const std::vector<uint8_t>& occ, Complex c) {
  int idx = basis_->index_of(occ);
  if (idx < 0) throw std::invalid_argument("FockVector: occupation outside basis");
  amp_(idx) = c;
}

FockVector FockVector::normalized() const {
  double n2 = norm_sq();
  if (n2 <= 0.0) throw std::domain_error("FockVector: cannot normalize zero vector");
  return FockVector(basis_, amp_ / std::sqrt(n2));
}

std::vector<std::pair<std::vector<uint8_t>, Complex>> FockVector::entries(double tol) const {
  std::vector<std::pair<std::vector<uint8_t>, Complex>> out;
  for (int i = 0; i < amp_.size(); ++i)
    if (std::abs(amp_(i)) > tol) out.emplace_back(basis_->occupation(i), amp_(i));
  return out;
}

FockVector apply_creation(const FockVector& v, int slot) {
  const FockBasis& basis = v.basis();
  FockVector out(v.basis_ptr());
  std::vector<uint8_t> occ;
  for (int i = 0; i < basis.size(); ++i) {
    const Complex c = v.amp()(i);
    if (std::abs(c) <= kAmpTol) continue;
    if (basis.total_photons(i) + 1 > basis.cutoff()) continue;
    occ = basis.occupation(i);
    occ[slot] += 1;
    int j = basis.index_of(occ);
    out.amp()(j) += c * std::sqrt(static_cast<double>(occ[slot]));
  }
  return out;
}

FockVector apply_linear_unitary(const FockVector& v, const CMat& u) {
  const FockBasis& basis = v.basis();
  const int dim = basis.single_particle_dim();
  if (u.rows() != dim || u.cols() != dim)
    throw std::invalid_argument("apply_linear_unitary: dimension mismatch");
  if ((u.adjoint() * u - CMat::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("apply_linear_unitary: matrix is not unitary");

  // Nonzero entries per column, for cheap expansion of sparse couplers.
  std::vector<std::vector<std::pair<int, Complex>>> columns(dim);
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l)
      if (std::abs(u(l, k)) > 1e-15) columns[k].emplace_back(l, u(l, k));

  FockVector out(v.basis_ptr());
  // Working expansion of one rewritten basis state: occupation index -> amp.
  std::unordered_map<int, Complex> current, next;

  for (int i = 0; i < basis.size(); ++i) {
    const Complex c = v.amp()(i);
    if (std::abs(c) <= kAmpTol) continue;
    const std::vector<uint8_t>& occ = basis.occupation(i);

    current.clear();
    current.emplace(basis.index_of(std::vector<uint8_t>(occ.size(), 0)), 1.0);
    double norm_factor = 1.0;
    std::vector<uint8_t> work;
    for (int k = 0; k < dim; ++k) {
      for (int rep = 0; rep < occ[k]; ++rep) {
        next.clear();
        for (const auto& [idx, a] : current) {
          work = basis.occupation(idx);
          for (const auto& [l, ulk] : columns[k]) {
            work[l] += 1;
            int j = basis.index_of(work);
            next[j] += a * ulk * std::sqrt(static_cast<double>(work[l]));
            work[l] -= 1;
          }
        }
        current.swap(next);
      }
      norm_factor *= factorial(occ[k]);
    }
    const Complex scale = c / std::sqrt(norm_factor);
    for (const auto& [idx, a] : current) out.amp()(idx) += scale * a;
  }
  return out;
}

CMat mode_pair_unitary(const FockBasis& basis, const ModeLabel& mode_a, const ModeLabel& mode_b,
                       const Eigen::Matrix2cd& u) {
  const int dim = basis.single_particle_dim();
  CMat big = CMat::Identity(dim, dim);
  for (int bin = 0; bin < basis.n_bins(); ++bin) {
    int sa = basis.slot(mode_a, bin);
    int sb = basis.slot(mode_b, bin);
    big(sa, sa) = u(0, 0);
    big(sa, sb) = u(0, 1);
    big(sb, sa) = u(1, 0);
    big(sb, sb) = u(1, 1);
  }
  return big;
}

FockVector exponential_raise(const FockVector& v, const std::vector<Complex>& alphas) {
  const FockBasis& basis = v.basis();
  const int dim = basis.single_particle_dim();
  if (static_cast<int>(alphas.size()) != dim)
    throw std::invalid_argument("exponential_raise: amplitude vector length mismatch");

  FockVector out = v;
  FockVector term = v;
  for (int order = 1; order <= basis.cutoff(); ++order) {
    FockVector raised(v.basis_ptr());
    for (int k = 0; k < dim; ++k) {
      if (std::abs(alphas[k]) <= kAmpTol) continue;
      FockVector one = apply_creation(term, k);
      raised.amp() += alphas[k] * one.amp();
    }
    raised.amp() /= static_cast<double>(order);
    term = raised;
    out.amp() += term.amp();
    if (term.norm_sq() == 0.0) break;
  }
  return out;
}

FockVector coherent_inject(const FockVector& v, const std::vector<Complex>& alphas,
                           double* truncation_error) {
  const FockBasis& basis = v.basis();
  const int dim = basis.single_particle_dim();
  if (static_cast<int>(alphas.size()) != dim)
    throw std::invalid_argument("coherent_inject: amplitude vector length mismatch");

  double total = 0.0;
  for (int k = 0; k < dim; ++k) {
    if (std::abs(alphas[k]) <= kAmpTol) continue;
    total += std::norm(alphas[k]);
    for (int i = 0; i < basis.size(); ++i)
      if (std::abs(v.amp()(i)) > kAmpTol && basis.occupation(i)[k] != 0)
        throw std::invalid_argument("coherent_inject: injected mode already occupied");
  }

  FockVector out = exponential_raise(v, alphas);
  out.amp() *= std::exp(-0.5 * total);
  const double err = std::abs(v.norm_sq() - out.norm_sq());
  if (truncation_error != nullptr) *truncation_error = err;
  if (err > 1e-4)
    throw std::invalid_argument("coherent_inject: truncated tail weight " + std::to_string(err) +
                                " exceeds 1e-4");
  return out;
}

namespace {

ConditionResult project(const FockVector& v, const std::function<bool(const std::vector<uint8_t>&)>& keep) {
  FockVector proj(v.basis_ptr());
  const FockBasis& basis = v.basis();
  for (int i = 0; i < basis.size(); ++i) {
    if (std::abs(v.amp()(i)) <= kAmpTol) continue;
    if (keep(basis.occupation(i))) proj.amp()(i) = v.amp()(i);
  }
  ConditionResult res{FockVector(v.basis_ptr()), proj.norm_sq(), false};
  if (res.probability <= 0.0) {
    res.empty = true;
    res.state = proj;  // zero vector
  } else {
    res.state = FockVector(v.basis_ptr(), proj.amp() / std::sqrt(res.probability));
  }
  return res;
}

}  // namespace

ConditionResult condition_on_pattern(const FockVector& v, const std::vector<PatternEntry>& pattern) {
  const FockBasis& basis = v.basis();
  for (const auto& p : pattern) {
    if (p.count < 0) throw std::invalid_argument("condition_on_pattern: negative count");
    basis.slot(p.mode, p.bin);  // validates mode and bin
  }
  std::vector<ModeLabel> mentioned;
  for (const auto& p : pattern) mentioned.push_back(p.mode);

  return project(v, [&](const std::vector<uint8_t>& occ) {
    for (const auto& p : pattern)
      if (occ[basis.slot(p.mode, p.bin)] != p.count) return false;
    for (const auto& m : mentioned) {
      for (int bin = 0; bin < basis.n_bins(); ++bin) {
        bool listed = false;
        for (const auto& p : pattern)
          if (p.mode == m && p.bin == bin) listed = true;
        if (!listed && occ[basis.slot(m, bin)] != 0) return false;
      }
    }
    return true;
  });
}

ConditionResult condition_on_mode_totals(const FockVector& v,
                                         const std::map<ModeLabel, int>& totals) {
  const FockBasis& basis = v.basis();
  for (const auto& [mode, count] : totals) {
    basis.slot(mode, 0);
    if (count < 0) throw std::invalid_argument("condition_on_mode_totals: negative count");
  }
  return project(v, [&](const std::vector<uint8_t>& occ) {
    for (const auto& [mode, count] : totals) {
      int total = 0;
      for (int bin = 0; bin < basis.n_bins(); ++bin) total += occ[basis.slot(mode, bin)];
      if (total != count) return false;
    }
    return true;
  });
}

std::vector<double> mode_total_distribution(const FockVector& v, const ModeLabel& mode) {
  const FockBasis& basis = v.basis();
  std::vector<double> dist(basis.cutoff() + 1, 0.0);
  for (int i = 0; i < basis.size(); ++i) {
    double w = std::norm(v.amp()(i));
    if (w <= 0.0) continue;
    int total = 0;
    for (int bin = 0; bin < basis.n_bins(); ++bin) total += basis.occupation(i)[basis.slot(mode, bin)];
    dist[total] += w;
  }
  return dist;
}

ConditionResult condition_on_mode_parity(const FockVector& v, const ModeLabel& mode, int parity) {
  const FockBasis& basis = v.basis();
  basis.slot(mode, 0);
  return project(v, [&](const std::vector<uint8_t>& occ) {
    int total = 0;
    for (int bin = 0; bin < basis.n_bins(); ++bin) total += occ[basis.slot(mode, bin)];
    return total % 2 == parity;
  });
}

CMat reduced_pair_density(const FockVector& v, const ModeLabel& mode_p, const ModeLabel& mode_q) {
  const FockBasis& basis = v.basis();
  if (mode_p == mode_q)
    throw std::invalid_argument("reduced_pair_density: modes must be distinct");
  const int nb = basis.n_bins();
  CMat rho = CMat::Zero(nb * nb, nb * nb);

  // Group amplitudes by the occupation of all other modes (the environment).
  std::unordered_map<std::string, std::vector<std::pair<int, Complex>>> by_env;
  std::vector<uint8_t> env;
  for (int i = 0; i < basis.size(); ++i) {
    const Complex c = v.amp()(i);
    if (std::abs(c) <= kAmpTol) continue;
    const auto& occ = basis.occupation(i);
    int np = 0, nq = 0, jp = -1, kq = -1;
    for (int bin = 0; bin < nb; ++bin) {
      int op = occ[basis.slot(mode_p, bin)];
      int oq = occ[basis.slot(mode_q, bin)];
      np += op;
      nq += oq;
      if (op > 0) jp = bin;
      if (oq > 0) kq = bin;
    }
    if (np != 1 || nq != 1) continue;
    env.assign(occ.begin(), occ.end());
    env[basis.slot(mode_p, jp)] = 0;
    env[basis.slot(mode_q, kq)] = 0;
    by_env[occ_key(env)].emplace_back(jp * nb + kq, c);
  }
  for (const auto& [key, members] : by_env)
    for (const auto& [ia, ca] : members)
      for (const auto& [ib, cb] : members) rho(ia, ib) += ca * std::conj(cb);
  return rho;
}

double pair_exchange_expectation(const CMat& pair_density, int n_bins) {
  Complex swap_tr = 0.0;
  for (int j = 0; j < n_bins; ++j)
    for (int k = 0; k < n_bins; ++k) swap_tr += pair_density(k * n_bins + j, j * n_bins + k);
  double tr = pair_density.trace().real();
  if (tr <= 0.0) throw std::domain_error("pair_exchange_expectation: empty pair sector");
  return swap_tr.real() / tr;
}

FockVector fock_from_two_photon(const TwoPhotonState& state,
                                std::shared_ptr<const FockBasis> basis) {
  const FockBasis& b = *basis;
  if (b.n_bins() != state.grid().n_bins())
    throw std::invalid_argument("fock_from_two_photon: bin count mismatch");
  if (b.cutoff() < 2)
    throw std::invalid_argument("fock_from_two_photon: cutoff below two photons");
  const double dt = state.grid().dt();
  FockVector v(std::move(basis));
  std::vector<uint8_t> occ(b.single_particle_dim(), 0);
  const double sqrt2 = std::sqrt(2.0);

  for (const auto& [key, m] : state.terms()) {
    const int sp_base = 0;
    (void)sp_base;
    for (int j = 0; j < b.n_bins(); ++j) {
      for (int k = 0; k < b.n_bins(); ++k) {
        Complex a = m(j, k) * dt;
        if (std::abs(a) <= kAmpTol) continue;
        std::fill(occ.begin(), occ.end(), 0);
        if (key.first == key.second) {
          if (j > k) continue;  // symmetric matrix: upper triangle carries the state
          if (j == k) {
            occ[b.slot(key.first, j)] = 2;
            v.amp()(b.index_of(occ)) += a;
          } else {
            occ[b.slot(key.first, j)] = 1;
            occ[b.slot(key.first, k)] += 1;
            v.amp()(b.index_of(occ)) += sqrt2 * a;
          }
        } else {
          occ[b.slot(key.first, j)] += 1;
          occ[b.slot(key.second, k)] += 1;
          v.amp()(b.index_of(occ)) += a;
        }
      }
    }
  }
  return v;
}

}  // namespace tqe
