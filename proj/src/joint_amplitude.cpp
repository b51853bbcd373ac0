#include "tqe/joint_amplitude.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace tqe {

JointAmplitude::JointAmplitude(TimeGrid grid, ModePair modes, CMat amp)
    : grid_(grid), modes_(std::move(modes)), amp_(std::move(amp)) {
  const int n = grid_.n_bins();
  if (amp_.rows() != n || amp_.cols() != n)
    throw std::invalid_argument("JointAmplitude: matrix shape does not match grid");
  if (same_mode() && transpose_asymmetry() > 1e-10)
    throw std::invalid_argument(
        "JointAmplitude: same-mode amplitude must be exchange symmetric");
}

double JointAmplitude::norm_sq() const {
  const double dt = grid_.dt();
  return amp_.squaredNorm() * dt * dt;
}

bool JointAmplitude::is_normalized(double tol) const {
  return std::abs(norm_sq() - 1.0) <= tol;
}

JointAmplitude JointAmplitude::normalized() const {
  double n2 = norm_sq();
  if (n2 <= 0.0) throw std::domain_error("JointAmplitude: cannot normalize zero amplitude");
  return JointAmplitude(grid_, modes_, amp_ / std::sqrt(n2));
}

double JointAmplitude::transpose_asymmetry() const {
  return (amp_ - amp_.transpose()).cwiseAbs().maxCoeff();
}

JointAmplitude JointAmplitude::delayed_second(double tau, double* leakage) const {
  if (std::abs(tau) >= grid_.span())
    throw std::domain_error("JointAmplitude: delay exceeds grid span");
  const int n = grid_.n_bins();
  const int shift = static_cast<int>(std::llround(tau / grid_.dt()));
  CMat out = CMat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    int src = k - shift;
    if (src >= 0 && src < n) out.col(k) = amp_.col(src);
  }
  if (leakage != nullptr) {
    const double before = amp_.squaredNorm();
    *leakage = before > 0.0 ? 1.0 - out.squaredNorm() / before : 0.0;
  }
  return JointAmplitude(grid_, modes_, std::move(out));
}

JointAmplitude product_amplitude(const Pulse& f, const Pulse& g, ModePair modes) {
  require_same_grid(f.grid(), g.grid(), "product_amplitude");
  CMat amp = f.amp() * g.amp().transpose();
  return JointAmplitude(f.grid(), std::move(modes), std::move(amp));
}

SymmetryDecomposition symmetry_decompose(const JointAmplitude& jta) {
  if (jta.same_mode())
    throw std::invalid_argument("symmetry_decompose: input photons share one mode");
  const double dt = jta.grid().dt();
  const CMat& a = jta.amp();
  CMat s = 0.5 * (a + a.transpose());
  CMat t = 0.5 * (a - a.transpose());
  double ws = s.squaredNorm() * dt * dt;
  double wa = t.squaredNorm() * dt * dt;

  constexpr double kEmpty = 1e-14;
  SymmetryDecomposition out{
      JointAmplitude(jta.grid(), jta.modes(), ws < kEmpty ? CMat::Zero(a.rows(), a.cols())
                                                          : CMat(s / std::sqrt(ws))),
      JointAmplitude(jta.grid(), jta.modes(), wa < kEmpty ? CMat::Zero(a.rows(), a.cols())
                                                          : CMat(t / std::sqrt(wa))),
      ws < kEmpty ? 0.0 : ws, wa < kEmpty ? 0.0 : wa};
  return out;
}

SchmidtResult schmidt_analysis(const JointAmplitude& jta) {
  Eigen::BDCSVD<CMat> svd(jta.amp() * jta.grid().dt());
  SchmidtResult r;
  r.coefficients = svd.singularValues();
  double p = 0.0;
  for (int i = 0; i < r.coefficients.size(); ++i) p += std::pow(r.coefficients(i), 4);
  r.purity = p;
  r.schmidt_number = p > 0.0 ? 1.0 / p : 0.0;
  return r;
}

CMat reduced_density_first(const JointAmplitude& jta) {
  return jta.amp() * jta.amp().adjoint() * jta.grid().dt();
}

}  // namespace tqe
