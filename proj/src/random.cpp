#include "blockcoh/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace blockcoh {

int Rng::uniform_int(int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    return dist(engine_);
}

Matrix Rng::gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = Complex(gaussian(), gaussian());
    return g;
}

Matrix Rng::haar_unitary(Eigen::Index dim) {
    Matrix g = gaussian_matrix(dim, dim);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < dim; ++k) {
        Complex diag = r(k, k);
        double mag = std::abs(diag);
        q.col(k) *= (mag > 0.0) ? diag / mag : Complex(1.0, 0.0);
    }
    return q;
}

PureState random_pure_state(Rng& rng, Eigen::Index dim) {
    Vector v = rng.gaussian_matrix(dim, 1).col(0);
    return PureState(v / v.norm());
}

DensityOperator random_density(Rng& rng, Eigen::Index dim, Eigen::Index rank) {
    if (rank <= 0 || rank > dim) rank = dim;
    Matrix g = rng.gaussian_matrix(dim, rank);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityOperator(0.5 * (rho + rho.adjoint().eval()));
}

BlockPartition random_partition(Rng& rng, Eigen::Index dim, int n_blocks) {
    if (n_blocks < 1 || n_blocks > dim)
        throw InvariantError("block count must lie in [1, dim]");
    std::vector<int> indices(static_cast<std::size_t>(dim));
    std::iota(indices.begin(), indices.end(), 0);
    std::shuffle(indices.begin(), indices.end(), rng.engine());
    std::vector<int> cuts(static_cast<std::size_t>(dim - 1));
    std::iota(cuts.begin(), cuts.end(), 1);
    std::shuffle(cuts.begin(), cuts.end(), rng.engine());
    cuts.resize(static_cast<std::size_t>(n_blocks - 1));
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(static_cast<int>(dim));
    std::vector<std::vector<int>> blocks;
    int start = 0;
    for (int cut : cuts) {
        std::vector<int> block(indices.begin() + start, indices.begin() + cut);
        std::sort(block.begin(), block.end());
        blocks.push_back(std::move(block));
        start = cut;
    }
    return BlockPartition(dim, std::move(blocks));
}

Povm random_povm(Rng& rng, Eigen::Index dim, int outcomes) {
    if (outcomes < 1) throw InvariantError("POVM needs at least one outcome");
    std::vector<Matrix> pieces;
    Matrix total = Matrix::Zero(dim, dim);
    for (int i = 0; i < outcomes; ++i) {
        Matrix g = rng.gaussian_matrix(dim, dim);
        Matrix m = g * g.adjoint();
        total += m;
        pieces.push_back(std::move(m));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (total + total.adjoint().eval()));
    Matrix inv_sqrt = es.eigenvectors() *
                      es.eigenvalues().cwiseMax(1e-14).cwiseSqrt().cwiseInverse().asDiagonal() *
                      es.eigenvectors().adjoint();
    std::vector<HermitianOperator> elements;
    Matrix correction = Matrix::Identity(dim, dim);
    for (int i = 0; i < outcomes; ++i) {
        Matrix e = inv_sqrt * pieces[static_cast<std::size_t>(i)] * inv_sqrt;
        e = 0.5 * (e + e.adjoint().eval());
        if (i + 1 == outcomes) e = correction;  // absorb roundoff into the last element
        else correction -= e;
        elements.emplace_back(std::move(e));
    }
    return Povm(std::move(elements));
}

Povm random_projective_povm(Rng& rng, Eigen::Index dim, int outcomes) {
    if (outcomes < 1 || outcomes > dim)
        throw InvariantError("projective POVM needs outcomes in [1, dim]");
    Matrix u = rng.haar_unitary(dim);
    BlockPartition partition = random_partition(rng, dim, outcomes);
    std::vector<HermitianOperator> elements;
    for (const auto& block : partition.blocks()) {
        Matrix p = Matrix::Zero(dim, dim);
        for (int idx : block) p += u.col(idx) * u.col(idx).adjoint();
        elements.emplace_back(0.5 * (p + p.adjoint().eval()));
    }
    return Povm(std::move(elements));
}

DilutionTarget random_dilution_target(Rng& rng, Eigen::Index dim) {
    // constructive sampling: keep every leading weight at or above 1/d and
    // let the trailing weight absorb the sampled deficit
    const double base = 1.0 / static_cast<double>(dim);
    double last = base * (0.05 + 0.9 * rng.uniform());
    double deficit = base - last;
    RealVector extras(dim - 1);
    double total = 0.0;
    for (Eigen::Index i = 0; i + 1 < dim; ++i) {
        extras[i] = -std::log(std::max(rng.uniform(), 1e-12));
        total += extras[i];
    }
    extras *= deficit / total;
    RealVector weights(dim);
    for (Eigen::Index i = 0; i + 1 < dim; ++i) weights[i] = base + extras[i];
    weights[dim - 1] = last;
    std::sort(weights.data(), weights.data() + dim - 1, std::greater<double>());
    weights /= weights.sum();
    return DilutionTarget(weights.cwiseSqrt());
}

KrausChannel random_block_incoherent_channel(Rng& rng, const ProjectiveMeasurement& p,
                                             int n_kraus) {
    if (n_kraus < 1) throw InvariantError("channel needs at least one Kraus operator");
    const Eigen::Index d = p.dim();
    const int n = p.size();
    std::vector<Matrix> raw;
    // a scaled identity piece keeps the closing normalisation invertible
    raw.push_back(0.4 * Matrix::Identity(d, d));
    for (int m = 0; m < n_kraus; ++m) {
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng.engine());
        Matrix coeff = rng.gaussian_matrix(d, d) / std::sqrt(static_cast<double>(d));
        raw.push_back(make_block_incoherent_kraus(p, perm, coeff));
    }
    Matrix total = Matrix::Zero(d, d);
    for (const Matrix& k : raw) total += k.adjoint() * k;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (total + total.adjoint().eval()));
    Matrix inv_sqrt = es.eigenvectors() *
                      es.eigenvalues().cwiseMax(1e-14).cwiseSqrt().cwiseInverse().asDiagonal() *
                      es.eigenvectors().adjoint();
    // the closing factor is block-diagonal, so the Kraus form is preserved
    inv_sqrt = block_dephase_raw(inv_sqrt, p);
    std::vector<Matrix> ops;
    for (Matrix& k : raw) ops.push_back(k * inv_sqrt);
    return make_block_incoherent_channel(std::move(ops), p, 1e-8);
}

KrausChannel random_channel(Rng& rng, Eigen::Index dim, int n_kraus) {
    if (n_kraus < 1) throw InvariantError("channel needs at least one Kraus operator");
    Matrix g = rng.gaussian_matrix(dim * n_kraus, dim);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix isometry = qr.householderQ() * Matrix::Identity(dim * n_kraus, dim);
    KrausChannel channel;
    channel.dim = dim;
    for (int m = 0; m < n_kraus; ++m)
        channel.operators.push_back(isometry.block(m * dim, 0, dim, dim));
    return channel;
}

DensityOperator random_block_incoherent_state(Rng& rng, const ProjectiveMeasurement& p) {
    return block_dephase(random_density(rng, p.dim()), p);
}

}  // namespace blockcoh
