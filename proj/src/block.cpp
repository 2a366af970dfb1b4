#include "blockcoh/block.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace blockcoh {

namespace {
constexpr double kProjectorTol = 1e-10;
}

BlockPartition::BlockPartition(Eigen::Index dim, std::vector<std::vector<int>> blocks)
    : dim_(dim), blocks_(std::move(blocks)) {
    if (dim_ <= 0) throw InvariantError("partition dimension must be positive");
    if (blocks_.empty()) throw InvariantError("partition needs at least one block");
    std::vector<char> seen(static_cast<std::size_t>(dim_), 0);
    for (const auto& block : blocks_) {
        if (block.empty()) throw InvariantError("empty block in partition");
        for (int idx : block) {
            if (idx < 0 || idx >= dim_) throw InvariantError("block index out of range");
            if (seen[static_cast<std::size_t>(idx)]) throw InvariantError("blocks are not disjoint");
            seen[static_cast<std::size_t>(idx)] = 1;
        }
    }
    for (char s : seen)
        if (!s) throw InvariantError("blocks do not cover every index");
}

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<HermitianOperator> projectors)
    : projectors_(std::move(projectors)) {
    if (projectors_.empty()) throw InvariantError("measurement needs at least one projector");
    dim_ = projectors_.front().dim();
    Matrix sum = Matrix::Zero(dim_, dim_);
    for (std::size_t i = 0; i < projectors_.size(); ++i) {
        const Matrix& pi = projectors_[i].matrix();
        if (projectors_[i].dim() != dim_)
            throw DimensionError("projectors have mixed dimensions");
        if (max_abs(pi * pi - pi) > kProjectorTol)
            throw InvariantError("projector is not idempotent");
        for (std::size_t j = 0; j < i; ++j) {
            if (max_abs(projectors_[j].matrix() * pi) > kProjectorTol)
                throw InvariantError("projectors are not mutually orthogonal");
        }
        sum += pi;
    }
    if (max_abs(sum - Matrix::Identity(dim_, dim_)) > kProjectorTol)
        throw InvariantError("projectors do not sum to the identity");
    bases_.reserve(projectors_.size());
    for (const auto& proj : projectors_) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(proj.matrix());
        int rank = 0;
        for (Eigen::Index k = 0; k < dim_; ++k)
            if (es.eigenvalues()[k] > 0.5) ++rank;
        Matrix basis(dim_, rank);
        int col = 0;
        for (Eigen::Index k = 0; k < dim_; ++k)
            if (es.eigenvalues()[k] > 0.5) basis.col(col++) = es.eigenvectors().col(k);
        bases_.push_back(std::move(basis));
    }
}

ProjectiveMeasurement ProjectiveMeasurement::from_partition(const BlockPartition& partition) {
    std::vector<HermitianOperator> projectors;
    projectors.reserve(partition.blocks().size());
    for (const auto& block : partition.blocks()) {
        Matrix p = Matrix::Zero(partition.dim(), partition.dim());
        for (int idx : block) p(idx, idx) = 1.0;
        projectors.emplace_back(std::move(p));
    }
    return ProjectiveMeasurement(std::move(projectors));
}

Matrix block_dephase_raw(const Matrix& x, const ProjectiveMeasurement& p) {
    if (x.rows() != p.dim() || x.cols() != p.dim())
        throw DimensionError("block_dephase: dimension mismatch");
    Matrix out = Matrix::Zero(p.dim(), p.dim());
    for (const Matrix& basis : p.block_bases())
        out += basis * (basis.adjoint() * x * basis) * basis.adjoint();
    return out;
}

DensityOperator block_dephase(const DensityOperator& rho, const ProjectiveMeasurement& p) {
    return DensityOperator(block_dephase_raw(rho.matrix(), p));
}

bool is_block_incoherent(const DensityOperator& rho, const ProjectiveMeasurement& p, double tol) {
    return max_abs(rho.matrix() - block_dephase_raw(rho.matrix(), p)) <= tol;
}

Matrix make_block_incoherent_kraus(const ProjectiveMeasurement& p, const std::vector<int>& perm,
                                   const Matrix& coefficients) {
    const int n = p.size();
    if (static_cast<int>(perm.size()) != n)
        throw InvariantError("index map length must equal the number of blocks");
    std::vector<char> hit(perm.size(), 0);
    for (int target : perm) {
        if (target < 0 || target >= n || hit[static_cast<std::size_t>(target)])
            throw InvariantError("index map is not a permutation of the blocks");
        hit[static_cast<std::size_t>(target)] = 1;
    }
    if (coefficients.rows() != p.dim() || coefficients.cols() != p.dim())
        throw DimensionError("coefficient matrix dimension mismatch");
    Matrix k = Matrix::Zero(p.dim(), p.dim());
    for (int i = 0; i < n; ++i)
        k += p.projector(perm[static_cast<std::size_t>(i)]).matrix() * coefficients *
             p.projector(i).matrix();
    return k;
}

PureState maximally_block_coherent(const ProjectiveMeasurement& p) {
    const Eigen::Index d = p.dim();
    Vector uniform = Vector::Constant(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
    const int n = p.size();
    Vector psi = Vector::Zero(d);
    for (int k = 0; k < n; ++k) {
        Vector component = p.projector(k).matrix() * uniform;
        double weight = component.squaredNorm();
        if (weight <= 1e-12)
            throw InvariantError("block orthogonal to the uniform state; |psi_N> undefined");
        psi += component / std::sqrt(weight);
    }
    psi /= std::sqrt(static_cast<double>(n));
    return PureState(std::move(psi));
}

DensityOperator apply_channel(const DensityOperator& rho, const KrausChannel& channel) {
    if (rho.dim() != channel.dim)
        throw DimensionError("apply_channel: dimension mismatch");
    Matrix norm = Matrix::Zero(channel.dim, channel.dim);
    for (const Matrix& k : channel.operators) norm += k.adjoint() * k;
    if (max_abs(norm - Matrix::Identity(channel.dim, channel.dim)) > kChannelTol)
        throw InvariantError("Kraus operators do not satisfy the normalisation condition");
    Matrix out = Matrix::Zero(channel.dim, channel.dim);
    for (const Matrix& k : channel.operators) out += k * rho.matrix() * k.adjoint();
    return DensityOperator(std::move(out));
}

KrausBlockStructure kraus_block_structure(const Matrix& k, const ProjectiveMeasurement& p,
                                          double tol) {
    KrausBlockStructure result;
    const int n = p.size();
    result.block_map.assign(static_cast<std::size_t>(n), -1);
    result.ok = true;
    for (int j = 0; j < n; ++j) {
        Matrix column = k * p.projector(j).matrix();
        int target = -1;
        for (int i = 0; i < n; ++i) {
            double weight = max_abs(p.projector(i).matrix() * column);
            if (weight > tol) {
                if (target >= 0) {
                    result.ok = false;  // one input block feeds two output blocks
                    result.leak = std::max(result.leak, weight);
                } else {
                    target = i;
                }
            }
        }
        result.block_map[static_cast<std::size_t>(j)] = target;
    }
    // the defined part of the index map must be injective
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    for (int target : result.block_map) {
        if (target < 0) continue;
        if (used[static_cast<std::size_t>(target)]) result.ok = false;
        used[static_cast<std::size_t>(target)] = 1;
    }
    return result;
}

KrausChannel make_block_incoherent_channel(std::vector<Matrix> operators,
                                           const ProjectiveMeasurement& p, double tol) {
    if (operators.empty()) throw InvariantError("channel needs at least one Kraus operator");
    KrausChannel channel;
    channel.dim = p.dim();
    Matrix norm = Matrix::Zero(channel.dim, channel.dim);
    std::vector<std::vector<int>> maps;
    for (const Matrix& k : operators) {
        if (k.rows() != channel.dim || k.cols() != channel.dim)
            throw DimensionError("Kraus operator dimension mismatch");
        KrausBlockStructure structure = kraus_block_structure(k, p, tol);
        if (!structure.ok)
            throw InvariantError("Kraus operator is not block-incoherent");
        maps.push_back(std::move(structure.block_map));
        norm += k.adjoint() * k;
    }
    if (max_abs(norm - Matrix::Identity(channel.dim, channel.dim)) > kChannelTol)
        throw InvariantError("Kraus operators do not satisfy the normalisation condition");
    channel.operators = std::move(operators);
    channel.block_maps = std::move(maps);
    return channel;
}

}  // namespace blockcoh
