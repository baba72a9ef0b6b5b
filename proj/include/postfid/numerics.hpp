#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "postfid/errors.hpp"

namespace postfid {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kSupportTol = 1e-10;

/// Result of a Hermitian eigendecomposition, eigenvalues ascending.
struct EigenSystem {
    RealVector eigenvalues;
    Matrix eigenvectors; // orthonormal columns, A = V diag(w) V^dag
};

inline double max_abs(const Matrix& a) {
    return a.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& a, double tol = kHermitianTol) {
    return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

/// Eigendecomposition of a Hermitian matrix. Throws if the input is not
/// Hermitian within tolerance.
inline EigenSystem hermitian_eig(const Matrix& a) {
    if (a.rows() != a.cols())
        throw numeric_error("hermitian_eig: matrix is not square");
    const double scale = std::max(1.0, max_abs(a));
    if (max_abs(a - a.adjoint()) > kHermitianTol * std::max(1.0, scale))
        throw convention_error("hermitian_eig: input is not Hermitian within 1e-12");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(((a + a.adjoint()) / 2.0).eval());
    if (solver.info() != Eigen::Success)
        throw numeric_error("hermitian_eig: eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// True iff the smallest eigenvalue of a Hermitian matrix is >= -tol.
inline bool is_psd(const Matrix& a, double tol) {
    return hermitian_eig(a).eigenvalues.minCoeff() >= -tol;
}

/// Positive-semidefinite square root. Eigenvalues in [-1e-8, 0) are clipped
/// to zero; anything more negative is rejected.
inline Matrix psd_sqrt(const Matrix& a) {
    EigenSystem es = hermitian_eig(a);
    const int n = static_cast<int>(es.eigenvalues.size());
    RealVector roots(n);
    for (int i = 0; i < n; ++i) {
        double w = es.eigenvalues[i];
        if (w < -1e-8)
            throw numeric_error("psd_sqrt: eigenvalue " + std::to_string(w) +
                                " below PSD tolerance");
        roots[i] = std::sqrt(std::max(w, 0.0));
    }
    return es.eigenvectors * roots.asDiagonal() * es.eigenvectors.adjoint();
}

/// Largest p >= 0 such that rho - p*rho_c stays PSD within tol.
///
/// rho_c is projected onto the support of rho (eigenvalue cutoff tol). Any
/// rho_c weight above tol outside that support forces the result to zero;
/// otherwise p is the reciprocal of the largest eigenvalue of
/// rho^{-1/2} rho_c rho^{-1/2} on the support, clamped to [0, 1].
inline double max_mixing_weight(const Matrix& rho, const Matrix& rho_c,
                                double tol = kSupportTol) {
    if (rho.rows() != rho_c.rows() || rho.cols() != rho_c.cols())
        throw numeric_error("max_mixing_weight: dimension mismatch");
    EigenSystem es = hermitian_eig(rho);
    if (es.eigenvalues.minCoeff() < -1e-8)
        throw numeric_error("max_mixing_weight: rho is not PSD");
    EigenSystem es_c = hermitian_eig(rho_c);
    if (es_c.eigenvalues.minCoeff() < -1e-8)
        throw numeric_error("max_mixing_weight: rho_c is not PSD");

    const int n = static_cast<int>(es.eigenvalues.size());
    int first = 0;
    while (first < n && es.eigenvalues[first] <= tol) ++first;
    const int support = n - first;
    if (support == 0) return 0.0;

    // rho_c mass in the kernel of rho
    double outside = 0.0;
    for (int i = 0; i < first; ++i) {
        const Vector v = es.eigenvectors.col(i);
        outside += std::real((v.adjoint() * rho_c * v)(0, 0));
    }
    if (outside > tol) return 0.0;

    Matrix w(n, support); // columns v_i / sqrt(lambda_i) on the support
    for (int i = 0; i < support; ++i)
        w.col(i) = es.eigenvectors.col(first + i) /
                   std::sqrt(es.eigenvalues[first + i]);
    EigenSystem m = hermitian_eig((w.adjoint() * rho_c * w).eval());
    const double top = m.eigenvalues.maxCoeff();
    if (top <= 0.0) return 1.0;
    return std::clamp(1.0 / top, 0.0, 1.0);
}

} // namespace postfid
