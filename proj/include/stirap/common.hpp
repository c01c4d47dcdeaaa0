#pragma once

#include <complex>

#include <Eigen/Dense>

namespace stirap {

using Complex = std::complex<double>;

using Vector12c = Eigen::Matrix<Complex, 12, 1>;
using Matrix12c = Eigen::Matrix<Complex, 12, 12>;
using Matrix6c = Eigen::Matrix<Complex, 6, 6>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

inline constexpr Complex kImag{0.0, 1.0};

}  // namespace stirap
