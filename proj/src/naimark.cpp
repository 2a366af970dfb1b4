#include "blockcoh/naimark.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

namespace blockcoh {

namespace {
constexpr double kPovmTol = 1e-10;
}

Povm::Povm(std::vector<HermitianOperator> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw InvariantError("POVM needs at least one element");
    dim_ = elements_.front().dim();
    Matrix sum = Matrix::Zero(dim_, dim_);
    for (const auto& e : elements_) {
        if (e.dim() != dim_) throw DimensionError("POVM elements have mixed dimensions");
        Eigen::SelfAdjointEigenSolver<Matrix> es(e.matrix(), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPsdTol)
            throw InvariantError("POVM element is not positive semidefinite");
        sum += e.matrix();
    }
    if (max_abs(sum - Matrix::Identity(dim_, dim_)) > kPovmTol)
        throw InvariantError("POVM elements do not sum to the identity");
}

MeasurementOperators::MeasurementOperators(Povm e, std::vector<Matrix> a)
    : povm(std::move(e)), operators(std::move(a)) {
    if (operators.size() != povm.elements().size())
        throw DimensionError("one measurement operator per POVM element required");
    for (std::size_t i = 0; i < operators.size(); ++i) {
        if (operators[i].rows() != povm.dim() || operators[i].cols() != povm.dim())
            throw DimensionError("measurement operator dimension mismatch");
        if (max_abs(operators[i].adjoint() * operators[i] - povm.element(static_cast<int>(i)).matrix()) >
            kPovmTol)
            throw InvariantError("A_i^dag A_i does not reproduce the POVM element");
    }
}

MeasurementOperators canonical_measurement_ops(const Povm& e) {
    std::vector<Matrix> ops;
    ops.reserve(e.elements().size());
    for (const auto& element : e.elements())
        ops.push_back(matrix_sqrt(element).matrix());
    return MeasurementOperators(e, std::move(ops));
}

NaimarkExtension build_naimark_extension(const MeasurementOperators& a,
                                         std::uint64_t completion_seed) {
    const Eigen::Index d = a.povm.dim();
    const int n = a.povm.outcomes();
    const Eigen::Index nd = d * static_cast<Eigen::Index>(n);

    // stacked first block column; an isometry because the elements sum to I
    Matrix stacked(nd, d);
    for (int i = 0; i < n; ++i)
        stacked.block(static_cast<Eigen::Index>(i) * d, 0, d, d) = a.operators[static_cast<std::size_t>(i)];
    if (max_abs(stacked.adjoint() * stacked - Matrix::Identity(d, d)) > 1e-8)
        throw InvariantError("stacked measurement operators do not form an isometry");

    // deterministic orthonormal completion by Gram-Schmidt with reorthogonalisation
    Matrix block(nd, nd);
    block.leftCols(d) = stacked;
    std::mt19937_64 rng(completion_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Index col = d;
    int attempts = 0;
    while (col < nd) {
        if (++attempts > 64 * static_cast<int>(nd))
            throw Error("unitary completion failed to converge");
        Vector candidate(nd);
        for (Eigen::Index r = 0; r < nd; ++r) candidate[r] = Complex(gauss(rng), gauss(rng));
        for (int pass = 0; pass < 2; ++pass)
            candidate -= block.leftCols(col) * (block.leftCols(col).adjoint() * candidate);
        double norm = candidate.norm();
        if (norm < 1e-6) continue;
        block.col(col++) = candidate / norm;
    }

    // reorder from probe-block layout to the system (x) probe basis
    Matrix v(nd, nd);
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(nd));
    for (int i = 0; i < n; ++i)
        for (Eigen::Index s = 0; s < d; ++s)
            perm[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) +
                 static_cast<std::size_t>(s)] = s * n + i;
    for (Eigen::Index r = 0; r < nd; ++r)
        for (Eigen::Index c = 0; c < nd; ++c)
            v(perm[static_cast<std::size_t>(r)], perm[static_cast<std::size_t>(c)]) = block(r, c);

    std::vector<HermitianOperator> projectors;
    projectors.reserve(static_cast<std::size_t>(n));
    Matrix identity_d = Matrix::Identity(d, d);
    for (int i = 0; i < n; ++i) {
        Matrix probe = Matrix::Zero(n, n);
        probe(i, i) = 1.0;
        Matrix p = v.adjoint() * kron(identity_d, probe) * v;
        projectors.emplace_back(0.5 * (p + p.adjoint().eval()));
    }

    return NaimarkExtension{n, d, std::move(v), a.operators,
                            ProjectiveMeasurement(std::move(projectors))};
}

DensityOperator embed_tensor(const DensityOperator& rho, int n_outcomes) {
    if (n_outcomes < 1) throw InvariantError("probe needs at least one outcome");
    Matrix probe = Matrix::Zero(n_outcomes, n_outcomes);
    probe(0, 0) = 1.0;
    return DensityOperator(kron(rho.matrix(), probe));
}

DensityOperator embed_direct_sum(const DensityOperator& rho, Eigen::Index d_prime) {
    if (d_prime < rho.dim())
        throw DimensionError("direct-sum embedding cannot shrink the space");
    Matrix out = Matrix::Zero(d_prime, d_prime);
    out.topLeftCorner(rho.dim(), rho.dim()) = rho.matrix();
    return DensityOperator(std::move(out));
}

DensityOperator embedded_state(const DensityOperator& rho, const NaimarkExtension& ext) {
    if (rho.dim() != ext.base_dim)
        throw DimensionError("embedded_state: dimension mismatch");
    Matrix in = embed_tensor(rho, ext.outcomes).matrix();
    Matrix out = ext.V * in * ext.V.adjoint();
    return DensityOperator(0.5 * (out + out.adjoint().eval()));
}

ProjectiveMeasurement naimark_blocks(int n_outcomes, Eigen::Index base_dim) {
    std::vector<HermitianOperator> projectors;
    projectors.reserve(static_cast<std::size_t>(n_outcomes));
    Matrix identity_d = Matrix::Identity(base_dim, base_dim);
    for (int i = 0; i < n_outcomes; ++i) {
        Matrix probe = Matrix::Zero(n_outcomes, n_outcomes);
        probe(i, i) = 1.0;
        projectors.emplace_back(kron(identity_d, probe));
    }
    return ProjectiveMeasurement(std::move(projectors));
}

bool is_povm_incoherent(const DensityOperator& rho, const Povm& e, double tol) {
    if (rho.dim() != e.dim()) throw DimensionError("is_povm_incoherent: dimension mismatch");
    for (int i = 0; i < e.outcomes(); ++i)
        for (int j = 0; j < e.outcomes(); ++j) {
            if (i == j) continue;
            if (max_abs(e.element(i).matrix() * rho.matrix() * e.element(j).matrix()) > tol)
                return false;
        }
    return true;
}

bool is_povm_incoherent(const DensityOperator& rho, const MeasurementOperators& a, double tol) {
    bool via_elements = is_povm_incoherent(rho, a.povm, tol);
    bool via_operators = true;
    for (std::size_t i = 0; i < a.operators.size() && via_operators; ++i)
        for (std::size_t j = 0; j < a.operators.size(); ++j) {
            if (i == j) continue;
            if (max_abs(a.operators[i] * rho.matrix() * a.operators[j].adjoint()) > tol) {
                via_operators = false;
                break;
            }
        }
    if (via_elements != via_operators)
        throw InvariantError("element-form and operator-form incoherence tests disagree;"
                             " the measurement operators are inconsistent at this tolerance");
    return via_elements;
}

PiOperationReport verify_pi_operation(const KrausChannel& base, const KrausChannel& extended,
                                      const NaimarkExtension& ext) {
    if (base.operators.size() != extended.operators.size())
        throw DimensionError("base and extended channels must have the same length");
    if (base.dim != ext.base_dim || extended.dim != ext.dim())
        throw DimensionError("channel dimensions do not match the extension");

    PiOperationReport report;
    report.structure_ok = true;
    for (const Matrix& k : extended.operators)
        if (!kraus_block_structure(k, ext.projectors, 1e-9).ok) report.structure_ok = false;

    Matrix probe = Matrix::Zero(ext.outcomes, ext.outcomes);
    probe(0, 0) = 1.0;
    for (std::size_t l = 0; l < base.operators.size(); ++l) {
        for (const Matrix& b : hermitian_basis(ext.base_dim)) {
            Matrix lifted = kron(base.operators[l] * b * base.operators[l].adjoint(), probe);
            Matrix extended_action =
                extended.operators[l] * kron(b, probe) * extended.operators[l].adjoint();
            report.max_residual =
                std::max(report.max_residual, max_abs(lifted - extended_action));
        }
    }
    report.pass = report.structure_ok && report.max_residual <= 1e-9;
    return report;
}

MeasureResult c_max_povm(const DensityOperator& rho, const Povm& e, double tol) {
    if (rho.dim() != e.dim()) throw DimensionError("c_max_povm: dimension mismatch");
    NaimarkExtension ext = build_naimark_extension(canonical_measurement_ops(e));
    DensityOperator embedded = embedded_state(rho, ext);
    return c_max_block(embedded, naimark_blocks(ext.outcomes, ext.base_dim), tol);
}

CostInterval one_shot_cost_povm(const DensityOperator& rho, const Povm& e,
                                const SmoothingBall& ball, double tol) {
    NaimarkExtension ext = build_naimark_extension(canonical_measurement_ops(e));
    DensityOperator embedded = embedded_state(rho, ext);
    MeasureResult lower =
        c_max_smoothed(embedded, naimark_blocks(ext.outcomes, ext.base_dim), ball, tol);
    CostInterval interval;
    interval.lower = lower.value;
    interval.upper = lower.value + 1.0;
    interval.upper_bound_flag = lower.upper_bound;
    return interval;
}

}  // namespace blockcoh
