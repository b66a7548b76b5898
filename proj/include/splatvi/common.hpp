#pragma once

#include <Eigen/Core>
#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace splatvi {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat36 = Eigen::Matrix<double, 3, 6>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SPLATVI_DEFINE_ERROR(NAME)          \
  class NAME : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

SPLATVI_DEFINE_ERROR(AngleNearPi);
SPLATVI_DEFINE_ERROR(EmptyBatch);
SPLATVI_DEFINE_ERROR(DimensionMismatch);
SPLATVI_DEFINE_ERROR(NonPsdScale);
SPLATVI_DEFINE_ERROR(TooFewPairs);
SPLATVI_DEFINE_ERROR(MissingIndexFile);
SPLATVI_DEFINE_ERROR(ParseError);
SPLATVI_DEFINE_ERROR(IoError);
SPLATVI_DEFINE_ERROR(ConfigError);

#undef SPLATVI_DEFINE_ERROR

template <typename Derived>
inline Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>
symmetrized(const Eigen::MatrixBase<Derived>& m) {
  return ((m + m.transpose()) * typename Derived::Scalar(0.5)).eval();
}

// Clamps the eigenvalues of a symmetric matrix from below.
inline Mat3 floor_spd(const Mat3& m, double min_eigenvalue) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(symmetrized(m));
  Vec3 ev = es.eigenvalues().cwiseMax(min_eigenvalue);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace splatvi
