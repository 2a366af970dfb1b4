#pragma once

#include <optional>
#include <vector>

#include "blockcoh/matrix.hpp"

namespace blockcoh {

// Disjoint index groups covering {0, ..., dim-1}.
class BlockPartition {
public:
    BlockPartition(Eigen::Index dim, std::vector<std::vector<int>> blocks);

    Eigen::Index dim() const { return dim_; }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }

private:
    Eigen::Index dim_;
    std::vector<std::vector<int>> blocks_;
};

// Complete family of mutually orthogonal projectors of arbitrary rank.
class ProjectiveMeasurement {
public:
    explicit ProjectiveMeasurement(std::vector<HermitianOperator> projectors);
    static ProjectiveMeasurement from_partition(const BlockPartition& partition);

    Eigen::Index dim() const { return dim_; }
    int size() const { return static_cast<int>(projectors_.size()); }
    const HermitianOperator& projector(int k) const { return projectors_[static_cast<std::size_t>(k)]; }
    const std::vector<HermitianOperator>& projectors() const { return projectors_; }

    // Orthonormal column basis of each block subspace (rank_k columns per
    // block); precomputed so instances are freely shareable across threads.
    const std::vector<Matrix>& block_bases() const { return bases_; }

private:
    Eigen::Index dim_;
    std::vector<HermitianOperator> projectors_;
    std::vector<Matrix> bases_;
};

// Channel in Kraus form; `block_maps`, when present, records the output-block
// index function of each operator as certified by kraus_block_structure.
struct KrausChannel {
    Eigen::Index dim = 0;
    std::vector<Matrix> operators;
    std::optional<std::vector<std::vector<int>>> block_maps;
};

inline constexpr double kChannelTol = 1e-8;  // allowed ||sum K^dag K - I||_max

// sum_i P_i X P_i, for arbitrary square X (used on states and on solver iterates).
Matrix block_dephase_raw(const Matrix& x, const ProjectiveMeasurement& p);
DensityOperator block_dephase(const DensityOperator& rho, const ProjectiveMeasurement& p);

bool is_block_incoherent(const DensityOperator& rho, const ProjectiveMeasurement& p, double tol);

// K = sum_i P_{perm(i)} c P_i; `perm` must be a bijection on {0, ..., N-1}.
Matrix make_block_incoherent_kraus(const ProjectiveMeasurement& p,
                                   const std::vector<int>& perm,
                                   const Matrix& coefficients);

// |psi_N> = (1/sqrt(N)) sum_k P_k|psi_d> / sqrt(<psi_d|P_k|psi_d>).
// Rejects measurements with a block orthogonal to the uniform state.
PureState maximally_block_coherent(const ProjectiveMeasurement& p);

DensityOperator apply_channel(const DensityOperator& rho, const KrausChannel& channel);

// Structural test for the block-incoherent Kraus form: every input block must
// feed at most one output block, and the induced index map must be injective
// where defined. `block_map[j]` is the output block of input block j (-1 if
// K P_j vanishes); `leak` is the largest cross-block remainder found.
struct KrausBlockStructure {
    bool ok = false;
    std::vector<int> block_map;
    double leak = 0.0;
};

KrausBlockStructure kraus_block_structure(const Matrix& k, const ProjectiveMeasurement& p,
                                          double tol);

// Validates sum K^dag K = I and that every operator passes the structural test;
// the resulting channel carries the certified block maps.
KrausChannel make_block_incoherent_channel(std::vector<Matrix> operators,
                                           const ProjectiveMeasurement& p, double tol);

}  // namespace blockcoh
