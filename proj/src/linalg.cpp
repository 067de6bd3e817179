#include "autoreg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "autoreg/error.hpp"

namespace autoreg {

SymmetricMatrix::SymmetricMatrix(const Matrix& entries) {
    if (entries.rows() != entries.cols()) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("symmetric matrix must be square, got {}x{}",
                                entries.rows(), entries.cols()));
    }
    if (entries.rows() < 1) {
        throw Error(ErrorKind::InvalidInput, "symmetric matrix must have order >= 1");
    }
    if (!entries.allFinite()) {
        throw Error(ErrorKind::InvalidInput, "symmetric matrix has non-finite entries");
    }
    const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
    const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (asym > kAsymmetryTolerance * scale) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("matrix is not symmetric (max |a_ij - a_ji| = {:.3g})", asym));
    }
    entries_ = 0.5 * (entries + entries.transpose());
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index order) {
    return SymmetricMatrix(Matrix::Identity(order, order));
}

SymmetricMatrix SymmetricMatrix::diagonal(const Vector& diag) {
    return SymmetricMatrix(Matrix(diag.asDiagonal()));
}

double SymmetricMatrix::max_abs() const noexcept {
    return entries_.cwiseAbs().maxCoeff();
}

Matrix EigenDecomposition::reconstruct() const {
    return basis * eigenvalues.asDiagonal() * basis.transpose();
}

EigenDecomposition sym_eig(const SymmetricMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::DecompositionFailure,
                    fmt::format("symmetric eigensolver did not converge (order {})", a.order()));
    }
    // Eigen returns ascending order; flip to descending.
    EigenDecomposition out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.basis = solver.eigenvectors().rowwise().reverse();
    return out;
}

EigenDecomposition sym_eig_psd(const SymmetricMatrix& a) {
    EigenDecomposition out = sym_eig(a);
    const double scale = out.eigenvalues.cwiseAbs().maxCoeff();
    const double floor = -kPsdClamp * scale;
    for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
        double& lam = out.eigenvalues[i];
        if (lam >= 0.0) continue;
        if (lam < floor) {
            throw Error(ErrorKind::DecompositionFailure,
                        fmt::format("matrix is not positive semidefinite: eigenvalue {:.6g} "
                                    "below clamp threshold {:.3g}",
                                    lam, floor));
        }
        lam = 0.0;
    }
    return out;
}

namespace {

Eigen::LDLT<Matrix> factor_regularized(const SymmetricMatrix& a, double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("regularization must be finite and >= 0, got {}", alpha));
    }
    Matrix shifted = a.matrix();
    shifted.diagonal().array() += alpha;

    Eigen::LDLT<Matrix> ldlt(shifted);
    const Vector pivots = ldlt.vectorD().cwiseAbs();
    const double largest = pivots.maxCoeff();
    const double smallest = pivots.minCoeff();
    const double tol = static_cast<double>(a.order()) * std::numeric_limits<double>::epsilon() *
                       std::max(largest, std::numeric_limits<double>::min());
    if (ldlt.info() != Eigen::Success || !(smallest > tol)) {
        throw Error(ErrorKind::Singular,
                    fmt::format("singular system at alpha = {}: smallest pivot {:.3g} "
                                "(largest {:.3g})",
                                alpha, smallest, largest));
    }
    return ldlt;
}

}  // namespace

Vector solve_regularized(const SymmetricMatrix& a, double alpha, const Vector& b) {
    if (b.size() != a.order()) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("right-hand side has length {}, expected {}", b.size(), a.order()));
    }
    const auto ldlt = factor_regularized(a, alpha);
    Vector w = ldlt.solve(b);

    Vector residual = b - a.matrix() * w - alpha * w;
    w += ldlt.solve(residual);
    return w;
}

Matrix regularized_inverse(const SymmetricMatrix& a, double alpha) {
    const auto ldlt = factor_regularized(a, alpha);
    Matrix inv = ldlt.solve(Matrix::Identity(a.order(), a.order()));
    return 0.5 * (inv + inv.transpose());
}

}  // namespace autoreg
