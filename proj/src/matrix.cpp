#include "blockcoh/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace blockcoh {

double max_abs(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

namespace {

void check_finite(const Matrix& m) {
    if (!m.allFinite()) throw InvariantError("matrix has NaN/Inf entries");
}

}  // namespace

HermitianOperator::HermitianOperator(Matrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() == 0)
        throw InvariantError("Hermitian operator must be square and nonempty");
    check_finite(mat_);
    if (max_abs(mat_ - mat_.adjoint()) > kHermTol)
        throw InvariantError("matrix is not Hermitian within tolerance");
    mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
}

DensityOperator::DensityOperator(Matrix m) : mat_(std::move(m)) {
    HermitianOperator h(mat_);
    mat_ = h.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdTol)
        throw InvariantError("density operator is not positive semidefinite");
    if (std::abs(mat_.trace().real() - 1.0) > kTraceTol)
        throw InvariantError("density operator trace differs from 1");
}

PureState::PureState(Vector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) throw InvariantError("empty state vector");
    if (!amps_.allFinite()) throw InvariantError("state vector has NaN/Inf entries");
    if (std::abs(amps_.norm() - 1.0) > kTraceTol)
        throw InvariantError("state vector is not normalised");
}

EigResult eig_hermitian(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    if (es.info() != Eigen::Success)
        throw Error("eigendecomposition failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

HermitianOperator positive_part_projector(const HermitianOperator& h, double threshold) {
    EigResult eig = eig_hermitian(h);
    Matrix proj = Matrix::Zero(h.dim(), h.dim());
    for (Eigen::Index k = 0; k < h.dim(); ++k) {
        if (eig.eigenvalues[k] > threshold) {
            proj += eig.eigenvectors.col(k) * eig.eigenvectors.col(k).adjoint();
        }
    }
    return HermitianOperator(proj);
}

HermitianOperator matrix_sqrt(const HermitianOperator& h) {
    EigResult eig = eig_hermitian(h);
    if (eig.eigenvalues.minCoeff() < -kPsdTol)
        throw InvariantError("matrix_sqrt: operator is not PSD within tolerance");
    RealVector roots = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    Matrix s = eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
    return HermitianOperator(std::move(s));
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim())
        throw DimensionError("fidelity: dimension mismatch");
    Matrix sr = matrix_sqrt(rho.hermitian()).matrix();
    Matrix inner = sr * sigma.matrix() * sr;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (inner + inner.adjoint().eval()),
                                             Eigen::EigenvaluesOnly);
    double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    double f = tr * tr;
    if (f < 0.0) f = 0.0;
    if (f > 1.0 && f < 1.0 + 1e-9) f = 1.0;
    return f;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

std::vector<Matrix> hermitian_basis(Eigen::Index dim) {
    std::vector<Matrix> basis;
    basis.reserve(static_cast<std::size_t>(dim * dim));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < dim; ++i) {
        Matrix b = Matrix::Zero(dim, dim);
        b(i, i) = 1.0;
        basis.push_back(std::move(b));
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = i + 1; j < dim; ++j) {
            Matrix s = Matrix::Zero(dim, dim);
            s(i, j) = inv_sqrt2;
            s(j, i) = inv_sqrt2;
            basis.push_back(std::move(s));
            Matrix a = Matrix::Zero(dim, dim);
            a(i, j) = Complex(0.0, inv_sqrt2);
            a(j, i) = Complex(0.0, -inv_sqrt2);
            basis.push_back(std::move(a));
        }
    }
    return basis;
}

}  // namespace blockcoh
