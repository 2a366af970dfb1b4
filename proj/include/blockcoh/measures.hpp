#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blockcoh/block.hpp"
#include "blockcoh/matrix.hpp"

namespace blockcoh {

// Value in bits, optional optimal block-incoherent certificate, and the
// residual feasibility gap of the certificate (lambda*sigma - rho >= -gap*I).
struct MeasureResult {
    double value = 0.0;
    std::optional<DensityOperator> certificate;
    double gap = 0.0;
    bool upper_bound = false;  // true when the value is only an upper bound

    const char* bound_type() const { return upper_bound ? "upper" : "exact"; }
};

struct SmoothingBall {
    double epsilon = 0.0;

    explicit SmoothingBall(double eps) : epsilon(eps) {
        if (!(eps >= 0.0) || eps >= 1.0)
            throw InvariantError("smoothing parameter must lie in [0, 1)");
    }
};

// log2 of the smallest lambda with rho <= lambda*sigma, computed on the
// support of sigma; +infinity when rho has weight outside that support.
double d_max(const DensityOperator& rho, const DensityOperator& sigma);

struct CMaxOptions {
    double tol = 1e-6;
    int max_bisection = 64;
    int max_ascent = 2000;
};

// min over block-incoherent sigma of D_max(rho || sigma), by bisection over
// lambda with a projected-supergradient feasibility subproblem. The returned
// value sits at the certified-feasible end of the final bracket.
MeasureResult c_max_block(const DensityOperator& rho, const ProjectiveMeasurement& p,
                          double tol);
MeasureResult c_max_block(const DensityOperator& rho, const ProjectiveMeasurement& p,
                          const CMaxOptions& options);

// Smoothed variant over the fidelity ball F >= 1-eps. Candidates are the exact
// input plus renormalised block-truncations of the leading eigenvectors, so
// for mixed inputs the value is an upper bound and flagged as such.
MeasureResult c_max_smoothed(const DensityOperator& rho, const ProjectiveMeasurement& p,
                             const SmoothingBall& ball, double tol);

// Number of amplitudes above kZeroTol.
int coherent_rank(const PureState& psi);

// Number of blocks with weight <psi|P_k|psi> above kZeroTol.
int block_rank(const PureState& psi, const ProjectiveMeasurement& p);

// Coherent-rank measure. Pure inputs are exact: log2 of the block count.
// Mixed inputs give a flagged upper bound via the eigendecomposition and a
// seeded randomised search over decompositions of the purification.
MeasureResult c_0_block(const PureState& psi, const ProjectiveMeasurement& p);
MeasureResult c_0_block(const DensityOperator& rho, const ProjectiveMeasurement& p,
                        std::uint64_t seed = 42, int search_rounds = 64);

// log2 of the least number of blocks whose retained weight reaches 1-eps.
MeasureResult c_0_smoothed(const PureState& psi, const ProjectiveMeasurement& p,
                           const SmoothingBall& ball);

// One-shot block coherence cost under MBI operations; equals the smoothed
// coherent-rank measure for pure states, a flagged upper bound for mixed ones.
MeasureResult one_shot_cost_mbi(const PureState& psi, const ProjectiveMeasurement& p,
                                const SmoothingBall& ball);
MeasureResult one_shot_cost_mbi(const DensityOperator& rho, const ProjectiveMeasurement& p,
                                const SmoothingBall& ball, double tol = 1e-6);

// Linear action on Hermitian operators, stored as a superoperator matrix over
// the orthonormal Hermitian basis of matrix.hpp.
class AffineMap {
public:
    AffineMap(Eigen::Index dim_in, Eigen::Index dim_out, RealMatrix superoperator);

    Eigen::Index dim_in() const { return dim_in_; }
    Eigen::Index dim_out() const { return dim_out_; }
    const RealMatrix& superoperator() const { return super_; }

    Matrix apply_raw(const Matrix& input) const;
    HermitianOperator apply(const HermitianOperator& input) const;

private:
    Eigen::Index dim_in_;
    Eigen::Index dim_out_;
    RealMatrix super_;
};

// The dilution map sending the maximally block-coherent resource state to the
// target while fixing every block-incoherent input at delta.
struct MbiDilutionMap {
    int n_required = 1;     // ceil(2^{D_max(target || delta)})
    PureState resource;     // |psi_{N''}>
    AffineMap map;
};

MbiDilutionMap build_mbi_dilution_map(const DensityOperator& target,
                                      const DensityOperator& delta,
                                      const ProjectiveMeasurement& p);

enum class MeasureKind { CMax, CZero };

struct MonotonicityCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double allowance = 0.0;
    bool pass = false;

    double margin() const { return rhs + allowance - lhs; }
};

struct MonotonicityReport {
    std::vector<double> probabilities;
    std::vector<double> outcome_values;
    double input_value = 0.0;
    double output_value = 0.0;
    std::vector<MonotonicityCheck> checks;
    bool pass = false;
};

// Evaluates monotonicity, selective monotonicity (coherent rank) and
// quasi-convexity (C_max) of the chosen measure under a block-incoherent
// channel; violations beyond the solver allowance plus 1e-6 fail.
MonotonicityReport verify_strong_monotonicity(MeasureKind kind, const DensityOperator& rho,
                                              const KrausChannel& channel,
                                              const ProjectiveMeasurement& p,
                                              double tol = 1e-5);

// Block weights <psi|P_k|psi>.
RealVector block_weights(const PureState& psi, const ProjectiveMeasurement& p);

}  // namespace blockcoh
