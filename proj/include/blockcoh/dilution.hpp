#pragma once

#include <vector>

#include "blockcoh/block.hpp"
#include "blockcoh/matrix.hpp"

namespace blockcoh {

// Target coefficients for deterministic dilution of the uniform state:
// non-negative, descending, unit square sum, with coefficients 1..d-1 at or
// above 1/sqrt(d) and the last one at or below it.
class DilutionTarget {
public:
    explicit DilutionTarget(RealVector coefficients);

    Eigen::Index dim() const { return coeffs_.size(); }
    const RealVector& coefficients() const { return coeffs_; }
    RealVector weights() const { return coeffs_.cwiseAbs2(); }
    PureState state() const;
    bool is_uniform() const;

private:
    RealVector coeffs_;
};

struct DilutionProtocol {
    Eigen::Index dim = 0;
    std::vector<std::vector<int>> permutations;  // index maps, entry j -> image of |j>
    RealVector probabilities;
    RealMatrix c_matrix;
    KrausChannel kraus;
};

// True iff sorted-descending prefix sums of `weights` never exceed those of
// the target's squared coefficients (majorisation of the uniform side).
bool majorizes(const DilutionTarget& target, const RealVector& weights);
bool majorizes_weights(const RealVector& dominant, const RealVector& dominated);

// { I_d, |1><->|d>, ..., |d-1><->|d> } as permutation matrices.
std::vector<RealMatrix> permutation_set(int d);

// Outcome probabilities p^i = (phi_{i-1}^2 - 1/d) / (phi_{i-1}^2 - phi_d^2),
// p^1 completing the sum to one.
RealVector dilution_probabilities(const DilutionTarget& target);

// Row i solves U^i (c_i1, ..., c_id)^T = (phi_1, ..., phi_d)^T.
RealMatrix build_c_matrix(const DilutionTarget& target);

// Kraus operators K^i = U^i sqrt(p^i) diag(sqrt(d) c_i1, ..., sqrt(d) c_id);
// the uniform target degenerates to the single-operator identity protocol.
DilutionProtocol synthesize_dilution(const DilutionTarget& target);

struct DilutionReport {
    double normalization_residual = 0.0;  // ||sum K^dag K - I||_max
    double output_fidelity = 0.0;         // channel output vs target projector
    double probability_sum_residual = 0.0;
    double selective_outcome_residual = 0.0;  // worst distance of K|psi_d>/|.| from the target
    std::vector<bool> kraus_block_incoherent;
    double max_kraus_leak = 0.0;
    bool pass = false;
};

DilutionReport verify_dilution(const DilutionProtocol& protocol, const DilutionTarget& target);

}  // namespace blockcoh
