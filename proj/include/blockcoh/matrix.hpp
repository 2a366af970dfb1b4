#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "blockcoh/error.hpp"

namespace blockcoh {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Uniform tolerance knobs shared across the library.
inline constexpr double kHermTol = 1e-12;   // allowed ||M - M^dag||_max
inline constexpr double kPsdTol = 1e-10;    // allowed dip of the minimum eigenvalue
inline constexpr double kTraceTol = 1e-10;  // allowed |Tr - 1|
inline constexpr double kZeroTol = 1e-10;   // "nonzero" threshold for amplitudes/weights

double max_abs(const Matrix& m);

// Self-adjoint operator; construction enforces squareness, finiteness and
// ||M - M^dag||_max <= kHermTol (the stored matrix is symmetrised).
class HermitianOperator {
public:
    explicit HermitianOperator(Matrix m);

    const Matrix& matrix() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }

private:
    Matrix mat_;
};

// Hermitian, PSD within kPsdTol, unit trace within kTraceTol.
class DensityOperator {
public:
    explicit DensityOperator(Matrix m);

    const Matrix& matrix() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }
    HermitianOperator hermitian() const { return HermitianOperator(mat_); }

private:
    Matrix mat_;
};

// Normalised state vector.
class PureState {
public:
    explicit PureState(Vector amplitudes);

    const Vector& amplitudes() const { return amps_; }
    Eigen::Index dim() const { return amps_.size(); }
    DensityOperator projector() const { return DensityOperator(amps_ * amps_.adjoint()); }

private:
    Vector amps_;
};

struct EigResult {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // columns, unitary
};

// Eigendecomposition H = U diag(w) U^dag with ascending eigenvalues.
EigResult eig_hermitian(const HermitianOperator& h);

// Sum of v v^dag over eigenvectors with eigenvalue > threshold.
HermitianOperator positive_part_projector(const HermitianOperator& h, double threshold);

// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1].
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

// Principal square root; rejects eigenvalues below -kPsdTol, clamps the rest.
HermitianOperator matrix_sqrt(const HermitianOperator& h);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix direct_sum(const Matrix& a, const Matrix& b);

// Orthonormal Hermitian basis of the d x d self-adjoint matrices
// (diagonal units, then symmetric and antisymmetric pairs), Tr[B_a B_b] = delta_ab.
std::vector<Matrix> hermitian_basis(Eigen::Index dim);

}  // namespace blockcoh
