#pragma once

#include <Eigen/Dense>

#include "dqsim/common.hpp"

namespace dqsim {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Pauli axes are encoded 0=I, 1=X, 2=Y, 3=Z throughout.
inline const Matrix& pauli_matrix(int axis) {
    static const Matrix mats[4] = {
        (Matrix(2, 2) << 1, 0, 0, 1).finished(),
        (Matrix(2, 2) << 0, 1, 1, 0).finished(),
        (Matrix(2, 2) << 0, cd(0, -1), cd(0, 1), 0).finished(),
        (Matrix(2, 2) << 1, 0, 0, -1).finished(),
    };
    return mats[axis];
}

// Largest singular value. Deterministic (Jacobi SVD), adequate at desk scale.
inline double matrix_norm(const Matrix& m) {
    if (m.rows() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

inline double operator_distance(const Matrix& u, const Matrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols())
        throw config_error("operator_distance: shape mismatch");
    return matrix_norm(u - v);
}

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const Matrix& m, double tol = 1e-10) {
    Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

// exp(-i * h * t) for Hermitian h, via eigendecomposition.
inline Matrix hermitian_evolution(const Matrix& h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) throw numerical_error("eigendecomposition failed");
    Vector phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        phases(i) = std::exp(cd(0, -es.eigenvalues()(i) * t));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Unitary completion with a prescribed first column (Householder reflection).
// `first_column` must be unit norm with a real non-negative first entry.
inline Matrix prep_unitary(const Vector& first_column) {
    const Eigen::Index n = first_column.size();
    Vector w = first_column;
    w(0) -= 1.0;
    double wn2 = w.squaredNorm();
    if (wn2 < 1e-28) return Matrix::Identity(n, n);
    return Matrix::Identity(n, n) - (2.0 / wn2) * (w * w.adjoint());
}

}  // namespace dqsim
