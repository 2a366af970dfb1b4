#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "blockcoh/block.hpp"
#include "blockcoh/matrix.hpp"
#include "blockcoh/measures.hpp"

namespace blockcoh {

// Positive-semidefinite elements summing to the identity.
class Povm {
public:
    explicit Povm(std::vector<HermitianOperator> elements);

    Eigen::Index dim() const { return dim_; }
    int outcomes() const { return static_cast<int>(elements_.size()); }
    const HermitianOperator& element(int i) const { return elements_[static_cast<std::size_t>(i)]; }
    const std::vector<HermitianOperator>& elements() const { return elements_; }

private:
    Eigen::Index dim_;
    std::vector<HermitianOperator> elements_;
};

// Measurement operators A_i with A_i^dag A_i = E_i.
struct MeasurementOperators {
    Povm povm;
    std::vector<Matrix> operators;

    MeasurementOperators(Povm e, std::vector<Matrix> a);
};

// Canonical choice A_i = sqrt(E_i).
MeasurementOperators canonical_measurement_ops(const Povm& e);

// Unitary V = sum_ij A_ij (x) |i><j| on the nd-dimensional Naimark space
// (system (x) probe ordering) together with the extended projectors
// P_i = V^dag (I (x) |i><i|) V.
struct NaimarkExtension {
    int outcomes;
    Eigen::Index base_dim;
    Matrix V;
    std::vector<Matrix> measurement_ops;  // the first block column A_i
    ProjectiveMeasurement projectors;

    Eigen::Index dim() const { return base_dim * outcomes; }
};

// Completes the stacked isometry [A_1; ...; A_n] to a unitary with a seeded,
// deterministic orthonormal complement. Any completion satisfies the defining
// conditions; value-level independence from the seed is asserted in tests.
NaimarkExtension build_naimark_extension(const MeasurementOperators& a,
                                         std::uint64_t completion_seed = 7);

// rho (x) |1><1| with an n-dimensional probe.
DensityOperator embed_tensor(const DensityOperator& rho, int n_outcomes);

// rho (+) 0 into dimension d_prime.
DensityOperator embed_direct_sum(const DensityOperator& rho, Eigen::Index d_prime);

// V (rho (x) |1><1|) V^dag, the embedded-channel image of rho.
DensityOperator embedded_state(const DensityOperator& rho, const NaimarkExtension& ext);

// The fixed Naimark-space blocks {I_d (x) |i><i|}.
ProjectiveMeasurement naimark_blocks(int n_outcomes, Eigen::Index base_dim);

bool is_povm_incoherent(const DensityOperator& rho, const Povm& e, double tol);
bool is_povm_incoherent(const DensityOperator& rho, const MeasurementOperators& a, double tol);

struct PiOperationReport {
    double max_residual = 0.0;  // worst defect of the lifting identity over a basis
    bool structure_ok = false;  // extended operators are block-incoherent
    bool pass = false;
};

// Checks K_l rho K_l^dag (x) |1><1| = K'_l (rho (x) |1><1|) K'_l^dag on a full
// Hermitian basis, with the extended operators validated against ext.projectors.
PiOperationReport verify_pi_operation(const KrausChannel& base, const KrausChannel& extended,
                                      const NaimarkExtension& ext);

// POVM-based coherence: block coherence of the embedded state with respect to
// the fixed Naimark blocks.
MeasureResult c_max_povm(const DensityOperator& rho, const Povm& e, double tol);

struct CostInterval {
    double lower = 0.0;
    double upper = 0.0;
    bool upper_bound_flag = false;  // smoothing on the Naimark space is an upper bound
};

// One-shot cost interval [C^eps_max(rho, E), C^eps_max(rho, E) + 1].
CostInterval one_shot_cost_povm(const DensityOperator& rho, const Povm& e,
                                const SmoothingBall& ball, double tol);

}  // namespace blockcoh
