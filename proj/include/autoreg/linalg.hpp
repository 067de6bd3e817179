#pragma once

#include <Eigen/Dense>

namespace autoreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense real symmetric matrix. Construction symmetrizes (A + A^T) / 2 and
/// rejects non-finite entries or asymmetry beyond roundoff.
class SymmetricMatrix {
public:
    /// Largest tolerated |a_ij - a_ji|, relative to max(1, max|a_ij|).
    static constexpr double kAsymmetryTolerance = 1e-12;

    explicit SymmetricMatrix(const Matrix& entries);

    static SymmetricMatrix identity(Eigen::Index order);
    static SymmetricMatrix diagonal(const Vector& diag);

    Eigen::Index order() const noexcept { return entries_.rows(); }
    const Matrix& matrix() const noexcept { return entries_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

    /// Largest absolute entry.
    double max_abs() const noexcept;

private:
    Matrix entries_;
};

/// Orthonormal eigenbasis (columns of `basis`) with eigenvalues sorted
/// non-increasing.
struct EigenDecomposition {
    Matrix basis;
    Vector eigenvalues;

    /// Q diag(lambda) Q^T.
    Matrix reconstruct() const;
};

/// General symmetric eigendecomposition. Eigenvalues may be negative.
EigenDecomposition sym_eig(const SymmetricMatrix& a);

/// Eigendecomposition of a matrix that is positive semidefinite up to
/// roundoff. Eigenvalues in [-kPsdClamp * lambda_max, 0) are clamped to zero;
/// anything more negative raises DecompositionFailure.
inline constexpr double kPsdClamp = 1e-10;
EigenDecomposition sym_eig_psd(const SymmetricMatrix& a);

/// Solves (A + alpha I) w = b by LDL^T with one step of iterative refinement.
/// Throws Singular when a pivot of A + alpha I vanishes relative to its scale.
Vector solve_regularized(const SymmetricMatrix& a, double alpha, const Vector& b);

/// (A + alpha I)^{-1}, same failure mode as solve_regularized.
Matrix regularized_inverse(const SymmetricMatrix& a, double alpha);

}  // namespace autoreg
