#pragma once

#include <complex>
#include <Eigen/Dense>

namespace tqe {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

// Default tolerance for "equal within numerics" checks on normalized objects.
inline constexpr double kNormTol = 1e-10;

}  // namespace tqe
