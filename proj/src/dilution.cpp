#include "blockcoh/dilution.hpp"

#include <algorithm>
#include <cmath>

namespace blockcoh {

namespace {
constexpr double kSumTol = 1e-10;
constexpr double kUniformTol = 1e-12;
}

DilutionTarget::DilutionTarget(RealVector coefficients) : coeffs_(std::move(coefficients)) {
    const Eigen::Index d = coeffs_.size();
    if (d < 2) throw InvariantError("dilution target needs dimension >= 2");
    if (!coeffs_.allFinite() || coeffs_.minCoeff() < 0.0)
        throw InvariantError("dilution coefficients must be non-negative");
    if (std::abs(coeffs_.squaredNorm() - 1.0) > kSumTol)
        throw InvariantError("dilution coefficients must have unit square sum");
    const double uniform = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index i = 0; i + 1 < d; ++i) {
        if (coeffs_[i] < coeffs_[i + 1] - 1e-12)
            throw InvariantError("dilution coefficients must be sorted descending"
                                 " (pre-sort the target before synthesis)");
        if (coeffs_[i] < uniform - 1e-12)
            throw InvariantError("coefficients 1..d-1 must lie at or above 1/sqrt(d)");
    }
    if (coeffs_[d - 1] > uniform + 1e-12)
        throw InvariantError("last coefficient must lie at or below 1/sqrt(d)");
}

PureState DilutionTarget::state() const {
    return PureState(coeffs_.cast<Complex>());
}

bool DilutionTarget::is_uniform() const {
    const double w = 1.0 / static_cast<double>(dim());
    return (weights().array() - w).abs().maxCoeff() <= kUniformTol;
}

bool majorizes_weights(const RealVector& dominant, const RealVector& dominated) {
    if (dominant.size() != dominated.size())
        throw DimensionError("majorization: length mismatch");
    if (std::abs(dominant.sum() - 1.0) > kSumTol || std::abs(dominated.sum() - 1.0) > kSumTol)
        throw InvariantError("majorization inputs must sum to one");
    std::vector<double> a(dominant.data(), dominant.data() + dominant.size());
    std::vector<double> b(dominated.data(), dominated.data() + dominated.size());
    std::sort(a.begin(), a.end(), std::greater<double>());
    std::sort(b.begin(), b.end(), std::greater<double>());
    double pa = 0.0, pb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        pa += a[k];
        pb += b[k];
        if (pb > pa + 1e-12) return false;
    }
    return true;
}

bool majorizes(const DilutionTarget& target, const RealVector& weights) {
    return majorizes_weights(target.weights(), weights);
}

std::vector<RealMatrix> permutation_set(int d) {
    if (d < 2) throw InvariantError("permutation set requires d >= 2");
    std::vector<RealMatrix> out;
    out.reserve(static_cast<std::size_t>(d));
    out.push_back(RealMatrix::Identity(d, d));
    for (int i = 2; i <= d; ++i) {
        RealMatrix u = RealMatrix::Identity(d, d);
        u(i - 2, i - 2) = 0.0;
        u(d - 1, d - 1) = 0.0;
        u(i - 2, d - 1) = 1.0;
        u(d - 1, i - 2) = 1.0;
        out.push_back(std::move(u));
    }
    return out;
}

RealVector dilution_probabilities(const DilutionTarget& target) {
    const Eigen::Index d = target.dim();
    if (target.is_uniform()) {
        RealVector p = RealVector::Zero(d);
        p[0] = 1.0;
        return p;
    }
    RealVector w = target.weights();
    RealVector p(d);
    const double uniform = 1.0 / static_cast<double>(d);
    double tail = 0.0;
    for (Eigen::Index i = 1; i < d; ++i) {
        double denom = w[i - 1] - w[d - 1];
        if (denom <= 1e-14)
            throw InvariantError("coefficient ties with the last entry make the"
                                 " outcome probabilities undefined");
        p[i] = (w[i - 1] - uniform) / denom;
        tail += p[i];
    }
    p[0] = 1.0 - tail;
    return p;
}

RealMatrix build_c_matrix(const DilutionTarget& target) {
    const Eigen::Index d = target.dim();
    const RealVector& phi = target.coefficients();
    RealMatrix c(d, d);
    c.row(0) = phi.transpose();
    for (Eigen::Index i = 1; i < d; ++i) {
        RealVector row = phi;
        std::swap(row[i - 1], row[d - 1]);  // the transpositions are involutions
        c.row(i) = row.transpose();
    }
    return c;
}

DilutionProtocol synthesize_dilution(const DilutionTarget& target) {
    const Eigen::Index d = target.dim();
    RealVector uniform_weights =
        RealVector::Constant(d, 1.0 / static_cast<double>(d));
    if (!majorizes(target, uniform_weights))
        throw InvariantError("target does not majorize the uniform weights;"
                             " deterministic dilution is impossible");

    DilutionProtocol protocol;
    protocol.dim = d;

    if (target.is_uniform()) {
        protocol.permutations = {std::vector<int>(static_cast<std::size_t>(d))};
        for (int j = 0; j < d; ++j) protocol.permutations[0][static_cast<std::size_t>(j)] = j;
        protocol.probabilities = RealVector::Zero(d);
        protocol.probabilities[0] = 1.0;
        protocol.c_matrix = build_c_matrix(target);
        protocol.kraus.dim = d;
        protocol.kraus.operators = {Matrix::Identity(d, d)};
        return protocol;
    }

    std::vector<RealMatrix> permutations = permutation_set(static_cast<int>(d));
    RealVector probabilities = dilution_probabilities(target);
    RealMatrix c = build_c_matrix(target);
    const double scale = std::sqrt(static_cast<double>(d));

    protocol.probabilities = probabilities;
    protocol.c_matrix = c;
    protocol.kraus.dim = d;
    for (Eigen::Index i = 0; i < d; ++i) {
        RealMatrix diag = (scale * c.row(i)).asDiagonal();
        RealMatrix k = permutations[static_cast<std::size_t>(i)] *
                       std::sqrt(std::max(probabilities[i], 0.0)) * diag;
        protocol.kraus.operators.push_back(k.cast<Complex>());
        std::vector<int> index_map(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) index_map[static_cast<std::size_t>(j)] = j;
        if (i >= 1) std::swap(index_map[static_cast<std::size_t>(i - 1)],
                              index_map[static_cast<std::size_t>(d - 1)]);
        protocol.permutations.push_back(std::move(index_map));
    }
    return protocol;
}

DilutionReport verify_dilution(const DilutionProtocol& protocol, const DilutionTarget& target) {
    const Eigen::Index d = protocol.dim;
    if (d != target.dim()) throw DimensionError("protocol/target dimension mismatch");
    DilutionReport report;

    Matrix norm = Matrix::Zero(d, d);
    for (const Matrix& k : protocol.kraus.operators) norm += k.adjoint() * k;
    report.normalization_residual = max_abs(norm - Matrix::Identity(d, d));

    report.probability_sum_residual = std::abs(protocol.probabilities.sum() - 1.0);

    Vector uniform = Vector::Constant(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
    Matrix input = uniform * uniform.adjoint();
    Matrix output = Matrix::Zero(d, d);
    for (const Matrix& k : protocol.kraus.operators) output += k * input * k.adjoint();
    Vector phi = target.coefficients().cast<Complex>();
    report.output_fidelity = (phi.adjoint() * output * phi).value().real();

    // every outcome must land on the target ray
    ProjectiveMeasurement rank_one = ProjectiveMeasurement::from_partition(
        BlockPartition(d, [&] {
            std::vector<std::vector<int>> blocks;
            for (int j = 0; j < d; ++j) blocks.push_back({j});
            return blocks;
        }()));
    for (const Matrix& k : protocol.kraus.operators) {
        Vector out = k * uniform;
        double n = out.norm();
        if (n > 1e-12) {
            double overlap = std::abs((phi.adjoint() * out).value()) / n;
            report.selective_outcome_residual =
                std::max(report.selective_outcome_residual, 1.0 - overlap * overlap);
        }
        KrausBlockStructure structure = kraus_block_structure(k, rank_one, 1e-9);
        report.kraus_block_incoherent.push_back(structure.ok);
        report.max_kraus_leak = std::max(report.max_kraus_leak, structure.leak);
    }

    bool all_bi = std::all_of(report.kraus_block_incoherent.begin(),
                              report.kraus_block_incoherent.end(), [](bool b) { return b; });
    report.pass = report.normalization_residual <= 1e-9 &&
                  report.probability_sum_residual <= 1e-9 &&
                  report.output_fidelity >= 1.0 - 1e-9 &&
                  report.selective_outcome_residual <= 1e-9 && all_bi;
    return report;
}

}  // namespace blockcoh
