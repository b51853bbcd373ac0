#include "tqe/pulse.hpp"

#include <cmath>
#include <iostream>

namespace tqe {

Pulse::Pulse(TimeGrid grid, CVec amp) : grid_(grid), amp_(std::move(amp)) {
  if (amp_.size() != grid_.n_bins())
    throw std::invalid_argument("Pulse: amplitude length does not match grid");
}

double Pulse::norm_sq() const { return amp_.squaredNorm() * grid_.dt(); }

bool Pulse::is_normalized(double tol) const { return std::abs(norm_sq() - 1.0) <= tol; }

Pulse Pulse::normalized() const {
  double n2 = norm_sq();
  if (n2 <= 0.0) throw std::domain_error("Pulse: cannot normalize a zero pulse");
  return Pulse(grid_, amp_ / std::sqrt(n2));
}

Pulse Pulse::delayed(double tau) const {
  const int n = grid_.n_bins();
  const int shift = static_cast<int>(std::llround(tau / grid_.dt()));
  CVec out = CVec::Zero(n);
  for (int k = 0; k < n; ++k) {
    int src = k - shift;
    if (src >= 0 && src < n) out(k) = amp_(src);
  }
  return Pulse(grid_, std::move(out));
}

Pulse make_gaussian_pulse(const TimeGrid& grid, double t0, double sigma) {
  return make_hermite_gauss_pulse(grid, t0, sigma, 0);
}

Pulse make_hermite_gauss_pulse(const TimeGrid& grid, double t0, double sigma, int order) {
  if (!(sigma > 0.0)) throw std::invalid_argument("make_hermite_gauss_pulse: sigma must be > 0");
  if (order < 0) throw std::invalid_argument("make_hermite_gauss_pulse: order must be >= 0");
  if (t0 - 4.0 * sigma < grid.t_start() || t0 + 4.0 * sigma > grid.t_end()) {
    std::cerr << "warning: pulse support [t0 - 4 sigma, t0 + 4 sigma] leaves the grid; "
                 "envelope is truncated\n";
  }
  const int n = grid.n_bins();
  CVec amp(n);
  for (int k = 0; k < n; ++k) {
    const double x = (grid.t(k) - t0) / (sigma * std::sqrt(2.0));
    // Physicists' Hermite polynomial by recurrence.
    double h_prev = 1.0, h = 1.0;
    for (int m = 1; m <= order; ++m) {
      double h_next = 2.0 * x * h - 2.0 * (m - 1) * h_prev;
      h_prev = h;
      h = h_next;
    }
    amp(k) = h * std::exp(-x * x / 2.0);
  }
  return Pulse(grid, std::move(amp)).normalized();
}

Pulse make_square_pulse(const TimeGrid& grid, double t_lo, double t_hi) {
  if (!(t_hi > t_lo)) throw std::invalid_argument("make_square_pulse: empty support");
  const int n = grid.n_bins();
  CVec amp = CVec::Zero(n);
  for (int k = 0; k < n; ++k) {
    const double t = grid.t(k);
    if (t >= t_lo && t <= t_hi) amp(k) = 1.0;
  }
  if (amp.squaredNorm() == 0.0)
    throw std::invalid_argument("make_square_pulse: support contains no bin center");
  return Pulse(grid, std::move(amp)).normalized();
}

Complex overlap(const Pulse& f, const Pulse& g) {
  require_same_grid(f.grid(), g.grid(), "overlap");
  return f.amp().dot(g.amp()) * f.grid().dt();  // Eigen dot conjugates the left factor
}

RVec survival_edges(const Pulse& f) {
  const int n = f.grid().n_bins();
  RVec surv(n + 1);
  surv(n) = 0.0;
  for (int k = n - 1; k >= 0; --k)
    surv(k) = surv(k + 1) + std::norm(f(k)) * f.grid().dt();
  return surv;
}

}  // namespace tqe
