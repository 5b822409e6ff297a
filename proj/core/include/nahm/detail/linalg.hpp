#pragma once

#include <Eigen/Dense>
#include <complex>

namespace nahm::detail {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

inline long rank_of(const Matrix& m, double rel_tol = 1e-8) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    const double thresh = rel_tol * sv(0);
    long r = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++r;
    return r;
}

/// Orthonormal basis of the kernel (full SVD, relative threshold).
inline Matrix kernel_basis(const Matrix& m, double rel_tol = 1e-8) {
    if (m.rows() == 0 || m.cols() == 0) return Matrix::Identity(m.cols(), m.cols());
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double thresh = rel_tol * sv(0);
    long r = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++r;
    return svd.matrixV().rightCols(m.cols() - r);
}

/// Orthonormal basis of the column span.
inline Matrix image_basis(const Matrix& m, double rel_tol = 1e-8) {
    if (m.rows() == 0 || m.cols() == 0) return Matrix(m.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double thresh = rel_tol * sv(0);
    long r = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++r;
    return svd.matrixU().leftCols(r);
}

inline Complex ipow(Complex c, long e) {
    if (e < 0) return Complex(1.0, 0.0) / ipow(c, -e);
    Complex r(1.0, 0.0);
    while (e-- > 0) r *= c;
    return r;
}

} // namespace nahm::detail
