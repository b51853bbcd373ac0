#pragma once

#include "tqe/time_grid.hpp"
#include "tqe/types.hpp"

namespace tqe {

/// Complex temporal envelope f(t_k) sampled at the bin centers of a grid.
/// A normalized pulse satisfies sum_k |amp_k|^2 dt = 1.
class Pulse {
 public:
  Pulse(TimeGrid grid, CVec amp);

  const TimeGrid& grid() const { return grid_; }
  const CVec& amp() const { return amp_; }
  Complex operator()(int k) const { return amp_(k); }

  double norm_sq() const;
  bool is_normalized(double tol = kNormTol) const;
  Pulse normalized() const;

  /// Envelope shifted by tau (bin-resolved; bins shifted off the grid drop).
  Pulse delayed(double tau) const;

 private:
  TimeGrid grid_;
  CVec amp_;
};

/// Normalized Gaussian envelope centered at t0 with intensity std dev sigma:
/// amp_k ~ exp(-(t_k - t0)^2 / (4 sigma^2)).
/// Warns on stderr when [t0 - 4 sigma, t0 + 4 sigma] leaves the grid.
Pulse make_gaussian_pulse(const TimeGrid& grid, double t0, double sigma);

/// Normalized Hermite-Gauss envelope of the given order (order 0 is the
/// Gaussian above); consecutive orders are mutually orthogonal.
Pulse make_hermite_gauss_pulse(const TimeGrid& grid, double t0, double sigma, int order);

/// Normalized flat-top envelope supported on [t_lo, t_hi].
Pulse make_square_pulse(const TimeGrid& grid, double t_lo, double t_hi);

/// Inner product <f|g> = sum_k conj(f_k) g_k dt.  Grids must match.
Complex overlap(const Pulse& f, const Pulse& g);

/// Survival integral at bin edges: surv[k] = sum_{l >= k} |f_l|^2 dt, with
/// surv[n_bins] = 0.  surv[0] is the total norm^2.
RVec survival_edges(const Pulse& f);

}  // namespace tqe
