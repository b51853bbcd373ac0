#include "tqe/spdc.hpp"

#include <cmath>

namespace tqe {

namespace {

struct Factor {
  const CMat* m;
  bool conjugate;
  int var_row, var_col;
};

CMat oriented(const Factor& f, int enter_var) {
  CMat base = f.conjugate ? f.m->conjugate() : *f.m;
  if (enter_var == f.var_row) return base;
  return base.transpose();
}

int other_var(const Factor& f, int v) { return v == f.var_row ? f.var_col : f.var_row; }

// Contracts rank-2 factors over shared variables (each variable id appears in
// exactly two factors); every variable integrates with weight dt.  The factor
// graph decomposes into cycles; each contributes the trace of its oriented
// matrix product.
Complex contract_factors(const std::vector<Factor>& factors, double dt) {
  std::vector<bool> used(factors.size(), false);
  Complex result = 1.0;
  int n_vars = 0;
  for (size_t start = 0; start < factors.size(); ++start) {
    if (used[start]) continue;
    used[start] = true;
    const int entry = factors[start].var_row;
    int open = factors[start].var_col;
    ++n_vars;
    CMat prod = oriented(factors[start], entry);
    while (open != entry) {
      size_t next = factors.size();
      for (size_t j = 0; j < factors.size(); ++j)
        if (!used[j] && (factors[j].var_row == open || factors[j].var_col == open)) {
          next = j;
          break;
        }
      if (next == factors.size())
        throw std::logic_error("contract_factors: open variable has no partner");
      used[next] = true;
      ++n_vars;
      const int after = other_var(factors[next], open);
      if (after == entry) {
        // trace(prod * last) without forming the product
        CMat last = oriented(factors[next], open);
        result *= (prod.transpose().cwiseProduct(last)).sum();
        open = entry;
      } else {
        prod = prod * oriented(factors[next], open);
        open = after;
      }
    }
  }
  for (int i = 0; i < n_vars; ++i) result *= dt;
  return result;
}

// Bosonic matchings between bra and ket slot pairs: identity plus, when the
// mode labels allow, the swap.
Complex inner_terms(const FourPhotonTerm& bra, const FourPhotonTerm& ket, double dt) {
  Complex total = 0.0;
  for (int mi = 0; mi < 2; ++mi) {
    const bool ok_i = mi == 0 ? (bra.mode_x == ket.mode_x && bra.mode_y == ket.mode_y)
                              : (bra.mode_x == ket.mode_y && bra.mode_y == ket.mode_x);
    if (!ok_i) continue;
    for (int ms = 0; ms < 2; ++ms) {
      const bool ok_s = ms == 0 ? (bra.mode_u == ket.mode_u && bra.mode_v == ket.mode_v)
                                : (bra.mode_u == ket.mode_v && bra.mode_v == ket.mode_u);
      if (!ok_s) continue;

      // Ket variables: x = 0, y = 1, u = 2, v = 3; each bra slot lands on the
      // ket variable its matching pairs it with.
      const int xb = mi == 0 ? 0 : 1, yb = mi == 0 ? 1 : 0;
      const int ub = ms == 0 ? 2 : 3, vb = ms == 0 ? 3 : 2;
      std::vector<Factor> fs;
      fs.reserve(4);
      if (!ket.crossed) {
        fs.push_back({&ket.f, false, 0, 2});
        fs.push_back({&ket.g, false, 1, 3});
      } else {
        fs.push_back({&ket.f, false, 0, 3});
        fs.push_back({&ket.g, false, 1, 2});
      }
      if (!bra.crossed) {
        fs.push_back({&bra.f, true, xb, ub});
        fs.push_back({&bra.g, true, yb, vb});
      } else {
        fs.push_back({&bra.f, true, xb, vb});
        fs.push_back({&bra.g, true, yb, ub});
      }
      total += std::conj(bra.coeff) * ket.coeff * contract_factors(fs, dt);
    }
  }
  return total;
}

}  // namespace

TimeGrid spdc_default_grid(double sigma_sum, double sigma_diff, double t0, int n_bins) {
  const double marginal = 0.5 * std::sqrt(sigma_sum * sigma_sum + sigma_diff * sigma_diff);
  const double half_span = 7.0 * marginal;
  return TimeGrid(t0 - half_span, t0 + half_span, n_bins);
}

JointAmplitude spdc_joint_amplitude(const SpdcModel& model) {
  if (!(model.sigma_sum > 0.0) || !(model.sigma_diff > 0.0))
    throw std::invalid_argument("spdc_joint_amplitude: widths must be positive");
  const TimeGrid& g = model.grid;
  // Narrowest feature of the kernel along either time axis.
  const double feature =
      1.0 / std::sqrt(1.0 / (model.sigma_sum * model.sigma_sum) +
                      1.0 / (model.sigma_diff * model.sigma_diff));
  if (feature / g.dt() < 3.0)
    throw std::invalid_argument("spdc_joint_amplitude: widths unresolvable on this grid");

  const int n = g.n_bins();
  CMat m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double sum = g.t(j) + g.t(k) - 2.0 * model.t0;
      const double diff = g.t(j) - g.t(k);
      m(j, k) = std::exp(-sum * sum / (4 * model.sigma_sum * model.sigma_sum) -
                         diff * diff / (4 * model.sigma_diff * model.sigma_diff));
    }
  return JointAmplitude(g, {"idler", "signal"}, std::move(m)).normalized();
}

double spdc_analytic_purity(double sigma_sum, double sigma_diff) {
  return 2.0 * sigma_sum * sigma_diff / (sigma_sum * sigma_sum + sigma_diff * sigma_diff);
}

double spdc_ratio_for_schmidt_number(double schmidt_number) {
  if (schmidt_number < 1.0)
    throw std::invalid_argument("spdc_ratio_for_schmidt_number: K must be >= 1");
  return schmidt_number + std::sqrt(schmidt_number * schmidt_number - 1.0);
}

void FourPhotonState::add_term(FourPhotonTerm term) {
  const int n = grid_.n_bins();
  if (term.f.rows() != n || term.f.cols() != n || term.g.rows() != n || term.g.cols() != n)
    throw std::invalid_argument("FourPhotonState: factor shape does not match grid");
  terms_.push_back(std::move(term));
}

Complex FourPhotonState::inner(const FourPhotonState& other) const {
  require_same_grid(grid_, other.grid_, "FourPhotonState::inner");
  Complex total = 0.0;
  for (const auto& bra : terms_)
    for (const auto& ket : other.terms_) total += inner_terms(bra, ket, grid_.dt());
  return total;
}

double FourPhotonState::norm_sq() const { return inner(*this).real(); }

FourPhotonState FourPhotonState::scaled(Complex c) const {
  FourPhotonState out = *this;
  for (auto& t : out.terms_) t.coeff *= c;
  return out;
}

FourPhotonState FourPhotonState::signal_swapped() const {
  FourPhotonState out = *this;
  for (auto& t : out.terms_) t.crossed = !t.crossed;
  return out;
}

double FourPhotonState::signal_exchange_expectation() const {
  double n2 = norm_sq();
  if (n2 <= 0.0) throw std::domain_error("FourPhotonState: empty state");
  return inner(signal_swapped()).real() / n2;
}

double FourPhotonState::signal_hom_coincidence() const {
  return 0.5 * (1.0 - signal_exchange_expectation());
}

FourPhotonState FourPhotonState::apply_heralding_bs(const BeamSplitterConvention& bs) const {
  auto substitution = [&bs](const ModeLabel& m) {
    std::vector<std::pair<ModeLabel, Complex>> subs;
    if (m == bs.in0) {
      subs = {{bs.out0, bs.u(0, 0)}, {bs.out1, bs.u(1, 0)}};
    } else if (m == bs.in1) {
      subs = {{bs.out0, bs.u(0, 1)}, {bs.out1, bs.u(1, 1)}};
    } else {
      subs = {{m, 1.0}};
    }
    return subs;
  };
  FourPhotonState out(grid_);
  for (const auto& t : terms_) {
    for (const auto& [mx, cx] : substitution(t.mode_x))
      for (const auto& [my, cy] : substitution(t.mode_y)) {
        FourPhotonTerm nt = t;
        nt.mode_x = mx;
        nt.mode_y = my;
        nt.coeff = t.coeff * cx * cy;
        out.add_term(std::move(nt));
      }
  }
  return out;
}

TwoPhotonState FourPhotonState::condition_heralding(const ModeLabel& mode1, int bin1,
                                                    const ModeLabel& mode2, int bin2) const {
  std::vector<ModeLabel> signal_modes;
  for (const auto& t : terms_)
    for (const auto& m : {t.mode_u, t.mode_v})
      if (std::find(signal_modes.begin(), signal_modes.end(), m) == signal_modes.end())
        signal_modes.push_back(m);
  TwoPhotonState out(grid_, signal_modes);

  for (const auto& t : terms_) {
    // Assignment (mode1 -> x slot, mode2 -> y slot) plus the reverse.
    struct Hit {
      int bin_x, bin_y;
    };
    std::vector<Hit> hits;
    if (t.mode_x == mode1 && t.mode_y == mode2) hits.push_back({bin1, bin2});
    if (t.mode_x == mode2 && t.mode_y == mode1) hits.push_back({bin2, bin1});
    for (const auto& h : hits) {
      if (!t.crossed) {
        // f(x, u) g(y, v): rows of f and g become the signal envelopes.
        CMat kernel = t.f.row(h.bin_x).transpose() * t.g.row(h.bin_y);
        out.add_raw_term(t.mode_u, t.mode_v, kernel, t.coeff);
      } else {
        // f(x, v) g(y, u): the u envelope comes from g, the v one from f.
        CMat kernel = t.g.row(h.bin_y).transpose() * t.f.row(h.bin_x);
        out.add_raw_term(t.mode_u, t.mode_v, kernel, t.coeff);
      }
    }
  }
  return out;
}

double FourPhotonState::detection_pattern_probability(const ModeLabel& mode_a,
                                                      const ModeLabel& mode_b) const {
  const int n = grid_.n_bins();
  const double dt2 = grid_.dt() * grid_.dt();
  double total = 0.0;
  for (int b1 = 0; b1 < n; ++b1)
    for (int b2 = 0; b2 < n; ++b2)
      total += condition_heralding(mode_a, b1, mode_b, b2).norm_sq() * dt2;
  if (mode_a == mode_b) total *= 0.5;  // unordered same-detector counting
  return total;
}

FourPhotonState two_source_branch(const JointAmplitude& phi, int m) {
  if (m != 0 && m != 1) throw std::invalid_argument("two_source_branch: m must be 0 or 1");
  FourPhotonState branch(phi.grid());
  const double sign = m == 0 ? 1.0 : -1.0;
  branch.add_term({"a_i", "b_i", "a_s", "b_s", phi.amp(), phi.amp(), false, 0.5});
  branch.add_term({"a_i", "b_i", "a_s", "b_s", phi.amp(), phi.amp(), true, 0.5 * sign});
  return branch;
}

FourPhotonState spdc_two_source_branch(const SpdcModel& model, int m) {
  return two_source_branch(spdc_joint_amplitude(model), m);
}

FourPhotonState double_pair_channel(const JointAmplitude& phi) {
  FourPhotonState channel(phi.grid());
  channel.add_term({"a_i", "a_i", "a_s", "a_s", phi.amp(), phi.amp(), false, 0.5});
  channel.add_term({"b_i", "b_i", "b_s", "b_s", phi.amp(), phi.amp(), false, 0.5});
  return channel.scaled(1.0 / std::sqrt(channel.norm_sq()));
}

namespace {

double idler_purity(const JointAmplitude& phi) {
  const double dt = phi.grid().dt();
  CMat rho = phi.amp() * phi.amp().adjoint();
  return rho.squaredNorm() * dt * dt * dt * dt;
}

// Most likely detection record of a branch: peak of the heralding marginal,
// then the partner bin maximizing the conditional weight.
std::pair<int, int> modal_record(const FourPhotonState& branch, const JointAmplitude& phi,
                                 const ModeLabel& mode1, const ModeLabel& mode2) {
  const int n = phi.grid().n_bins();
  CMat rho = phi.amp() * phi.amp().adjoint();
  int best1 = 0;
  for (int j = 1; j < n; ++j)
    if (rho(j, j).real() > rho(best1, best1).real()) best1 = j;
  int best2 = 0;
  double best_w = -1.0;
  for (int k = 0; k < n; ++k) {
    double w = branch.condition_heralding(mode1, best1, mode2, k).norm_sq();
    if (w > best_w) {
      best_w = w;
      best2 = k;
    }
  }
  return {best1, best2};
}

}  // namespace

std::vector<SpdcHerald> tqe_herald_cross(const SpdcModel& model) {
  JointAmplitude phi = spdc_joint_amplitude(model);
  const double purity = idler_purity(phi);

  std::vector<SpdcHerald> out;
  for (int m = 0; m < 2; ++m) {
    FourPhotonState branch = spdc_two_source_branch(model, m);
    auto [b1, b2] = modal_record(branch, phi, "a_i", "b_i");
    TwoPhotonState signal = branch.condition_heralding("a_i", b1, "b_i", b2);
    out.push_back({m == 0 ? HeraldSymmetry::symmetric : HeraldSymmetry::antisymmetric,
                   SpdcChannel::cross_source, 0.5 * (1.0 + (m == 0 ? purity : -purity)),
                   std::move(branch), signal.normalized()});
  }
  return out;
}

std::vector<SpdcHerald> tqe_herald_double_pair(const SpdcModel& model) {
  JointAmplitude phi = spdc_joint_amplitude(model);
  FourPhotonState channel = double_pair_channel(phi);
  FourPhotonState mixed = channel.apply_heralding_bs(hadamard_bs("a_i", "b_i", "c", "d"));

  // Coalescent detections find both heralding photons in one output port;
  // coincident ones find them split.  Each class carries half the weight.
  FourPhotonState coalescent(model.grid), coincident(model.grid);
  for (const auto& t : mixed.terms())
    (t.mode_x == t.mode_y ? coalescent : coincident).add_term(t);

  auto [c1, c2] = modal_record(coalescent, phi, "c", "c");
  TwoPhotonState sym_signal = coalescent.condition_heralding("c", c1, "c", c2);
  auto [d1, d2] = modal_record(coincident, phi, "c", "d");
  TwoPhotonState anti_signal = coincident.condition_heralding("c", d1, "d", d2);

  std::vector<SpdcHerald> out;
  double p_coal = coalescent.norm_sq();
  double p_coin = coincident.norm_sq();
  out.push_back({HeraldSymmetry::symmetric, SpdcChannel::double_pair, p_coal,
                 std::move(coalescent), sym_signal.normalized()});
  out.push_back({HeraldSymmetry::antisymmetric, SpdcChannel::double_pair, p_coin,
                 std::move(coincident), anti_signal.normalized()});
  return out;
}

HeraldStatistics herald_statistics(const SpdcModel& model, double pair_gen_prob) {
  if (pair_gen_prob < 0.0) throw std::invalid_argument("herald_statistics: negative probability");
  if (pair_gen_prob >= 0.5)
    throw std::invalid_argument("herald_statistics: pair_gen_prob must stay below 0.5");
  const double purity = idler_purity(spdc_joint_amplitude(model));
  HeraldStatistics s;
  const double p2 = pair_gen_prob * pair_gen_prob;
  s.cross = p2;
  s.double_pair = p2 * (1.0 + purity);
  s.none = 1.0 - s.cross - s.double_pair;
  s.double_pair_to_cross_ratio = 1.0 + purity;
  return s;
}

}  // namespace tqe
