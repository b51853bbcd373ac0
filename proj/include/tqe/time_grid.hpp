#pragma once

#include <cstddef>
#include <stdexcept>

namespace tqe {

/// Uniform discretization of a time interval into n_bins midpoint bins.
/// All integrals in this library are midpoint sums over such grids, so two
/// values can only be combined when their grids are identical.
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, int n_bins)
      : t_start_(t_start), t_end_(t_end), n_bins_(n_bins) {
    if (n_bins < 2) throw std::invalid_argument("TimeGrid: n_bins must be >= 2");
    if (!(t_end > t_start)) throw std::invalid_argument("TimeGrid: t_end must exceed t_start");
  }

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  int n_bins() const { return n_bins_; }
  double dt() const { return (t_end_ - t_start_) / n_bins_; }
  double span() const { return t_end_ - t_start_; }

  /// Center of bin k.
  double t(int k) const { return t_start_ + (k + 0.5) * dt(); }

  bool operator==(const TimeGrid& o) const {
    return t_start_ == o.t_start_ && t_end_ == o.t_end_ && n_bins_ == o.n_bins_;
  }
  bool operator!=(const TimeGrid& o) const { return !(*this == o); }

  /// Same interval, twice the bins (refinement convergence checks).
  TimeGrid refined() const { return TimeGrid(t_start_, t_end_, 2 * n_bins_); }

 private:
  double t_start_;
  double t_end_;
  int n_bins_;
};

inline void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace tqe
