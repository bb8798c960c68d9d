// types.hpp — Eigen aliases and small dense-matrix helpers

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace twomode {

using cplx = std::complex<double>;

using Vector2d = Eigen::Vector2d;
using Vector4d = Eigen::Vector4d;
using Matrix2d = Eigen::Matrix2d;
using Matrix4d = Eigen::Matrix4d;
using Matrix2cd = Eigen::Matrix2cd;
using Matrix4cd = Eigen::Matrix4cd;
using MatrixXd = Eigen::MatrixXd;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXd = Eigen::VectorXd;
using VectorXcd = Eigen::VectorXcd;

// Index of an eigenmode gamma_+ / gamma_- inside 2x2 coefficient tensors.
enum Mode : int { Plus = 0, Minus = 1 };

inline constexpr double pi = 3.14159265358979323846;

// Determinant by LU with partial pivoting; works for real and complex square expressions.
template <typename Derived>
typename Derived::Scalar lu_determinant(const Eigen::MatrixBase<Derived>& m) {
    using Plain = typename Derived::PlainObject;
    return Eigen::PartialPivLU<Plain>(m.eval()).determinant();
}

// Largest absolute entry of A - A^H.
template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace twomode
