#include <doctest.h>

#include <cmath>

#include "blockcoh/dilution.hpp"
#include "blockcoh/random.hpp"

using namespace blockcoh;

namespace {

RealVector vec(std::initializer_list<double> values) {
    RealVector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

DilutionTarget reference_target() {
    return DilutionTarget(
        vec({std::sqrt(0.4), std::sqrt(0.3), std::sqrt(0.28), std::sqrt(0.02)}));
}

// exact rationals stored as numerator/denominator pairs
struct Rational {
    long long num;
    long long den;
    double value() const { return double(num) / double(den); }
};

}  // namespace

TEST_CASE("target validation") {
    CHECK_THROWS_AS(DilutionTarget(vec({0.9, 0.1})), InvariantError);  // not unit norm
    CHECK_THROWS_AS(DilutionTarget(vec({std::sqrt(0.3), std::sqrt(0.7)})),
                    InvariantError);  // ascending order
    CHECK_THROWS_AS(DilutionTarget(vec({std::sqrt(0.60), std::sqrt(0.25), std::sqrt(0.15)})),
                    InvariantError);  // middle weight 0.25 below 1/3
    CHECK_THROWS_AS(DilutionTarget(vec({1.0})), InvariantError);
    CHECK_NOTHROW(reference_target());
}

TEST_CASE("majorization") {
    DilutionTarget phi = reference_target();
    CHECK(majorizes(phi, vec({0.25, 0.25, 0.25, 0.25})));
    CHECK(majorizes_weights(vec({0.4, 0.3, 0.28, 0.02}), vec({0.4, 0.3, 0.28, 0.02})));
    CHECK(majorizes_weights(vec({0.6, 0.4}), vec({0.5, 0.5})));
    CHECK_FALSE(majorizes_weights(vec({0.5, 0.5}), vec({0.6, 0.4})));
    CHECK_THROWS_AS(majorizes_weights(vec({1.0}), vec({0.5, 0.5})), DimensionError);
}

TEST_CASE("permutation_set") {
    auto two = permutation_set(2);
    REQUIRE(two.size() == 2);
    CHECK(max_abs(two[0].cast<Complex>() - Matrix::Identity(2, 2)) < 1e-15);
    CHECK(two[1](0, 1) == doctest::Approx(1.0));
    CHECK(two[1](1, 0) == doctest::Approx(1.0));

    auto four = permutation_set(4);
    REQUIRE(four.size() == 4);
    CHECK(max_abs(four[0].cast<Complex>() - Matrix::Identity(4, 4)) < 1e-15);
    for (std::size_t i = 1; i < 4; ++i) {
        RealMatrix expected = RealMatrix::Identity(4, 4);
        expected(i - 1, i - 1) = 0.0;
        expected(3, 3) = 0.0;
        expected(i - 1, 3) = 1.0;
        expected(3, i - 1) = 1.0;
        CHECK((four[i] - expected).cwiseAbs().maxCoeff() < 1e-15);
    }
    for (const auto& u : four)
        CHECK((u * u - RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);

    CHECK_THROWS_AS(permutation_set(1), InvariantError);
}

TEST_CASE("dilution probabilities reproduce the reference rationals exactly") {
    RealVector p = dilution_probabilities(reference_target());
    const Rational expected[] = {{2153, 6916}, {15, 38}, {5, 28}, {3, 26}};
    REQUIRE(p.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(p[i] - expected[i].value()) <= 1e-12);

    RealVector q = dilution_probabilities(DilutionTarget(vec({std::sqrt(0.75), std::sqrt(0.25)})));
    CHECK(q[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("probabilities on random targets form a distribution") {
    Rng rng(107);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::Index dim = 2 + trial % 5;
        DilutionTarget target = random_dilution_target(rng, dim);
        RealVector p = dilution_probabilities(target);
        CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
        CHECK(p.minCoeff() >= -1e-12);
        CHECK(p.maxCoeff() <= 1.0 + 1e-12);
    }
}

TEST_CASE("c matrix") {
    DilutionTarget phi = reference_target();
    RealMatrix c = build_c_matrix(phi);
    const double p1 = std::sqrt(0.4), p2 = std::sqrt(0.3), p3 = std::sqrt(0.28),
                 p4 = std::sqrt(0.02);
    // rows are phi with entries i-1 and d swapped
    RealMatrix expected(4, 4);
    expected << p1, p2, p3, p4,
                p4, p2, p3, p1,
                p1, p4, p3, p2,
                p1, p2, p4, p3;
    CHECK((c - expected).cwiseAbs().maxCoeff() <= 1e-15);
    // the closed-form radicals of the d=4 reference case
    CHECK(c(0, 0) == doctest::Approx(std::sqrt(2.0 / 5.0)).epsilon(1e-14));
    CHECK(c(0, 1) == doctest::Approx(std::sqrt(3.0 / 10.0)).epsilon(1e-14));
    CHECK(c(0, 2) == doctest::Approx(std::sqrt(7.0) / 5.0).epsilon(1e-14));
    CHECK(c(0, 3) == doctest::Approx(1.0 / (5.0 * std::sqrt(2.0))).epsilon(1e-14));

    Rng rng(109);
    for (int trial = 0; trial < 20; ++trial) {
        DilutionTarget target = random_dilution_target(rng, 2 + trial % 4);
        RealMatrix cm = build_c_matrix(target);
        CHECK((cm.row(0).transpose() - target.coefficients()).cwiseAbs().maxCoeff() <= 1e-15);
        for (Eigen::Index i = 0; i < cm.rows(); ++i) {
            RealVector row = cm.row(i).transpose();
            std::sort(row.data(), row.data() + row.size());
            RealVector sorted = target.coefficients();
            std::sort(sorted.data(), sorted.data() + sorted.size());
            CHECK((row - sorted).cwiseAbs().maxCoeff() <= 1e-15);
        }
    }
}

TEST_CASE("synthesized d=4 protocol matches the reference values") {
    DilutionProtocol protocol = synthesize_dilution(reference_target());
    REQUIRE(protocol.kraus.operators.size() == 4);

    const double k1[] = {std::sqrt(4306.0 / 8645.0), std::sqrt(6459.0 / 17290.0),
                         std::sqrt(2153.0) / (5.0 * std::sqrt(247.0)),
                         std::sqrt(2153.0) / (5.0 * std::sqrt(3458.0))};
    const double k2[] = {std::sqrt(3.0 / 95.0), 3.0 / std::sqrt(19.0),
                         std::sqrt(42.0 / 95.0), 2.0 * std::sqrt(3.0) / std::sqrt(19.0)};
    const double k3[] = {std::sqrt(2.0 / 7.0), 1.0 / std::sqrt(70.0), 1.0 / std::sqrt(5.0),
                         std::sqrt(3.0 / 14.0)};
    const double k4[] = {2.0 * std::sqrt(3.0) / std::sqrt(65.0), 3.0 / std::sqrt(65.0),
                         std::sqrt(3.0) / (5.0 * std::sqrt(13.0)),
                         std::sqrt(42.0) / (5.0 * std::sqrt(13.0))};
    const double* expected[] = {k1, k2, k3, k4};
    auto perms = permutation_set(4);
    for (int i = 0; i < 4; ++i) {
        // K^i = U^i diag(entries): undo the permutation and read the diagonal
        Matrix diag = perms[static_cast<std::size_t>(i)].cast<Complex>().transpose() *
                      protocol.kraus.operators[static_cast<std::size_t>(i)];
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(diag(j, j).real() - expected[i][j]) <= 1e-10);
    }

    Matrix norm = Matrix::Zero(4, 4);
    for (const Matrix& k : protocol.kraus.operators) norm += k.adjoint() * k;
    CHECK(max_abs(norm - Matrix::Identity(4, 4)) <= 1e-10);

    DilutionReport report = verify_dilution(protocol, reference_target());
    CHECK(report.normalization_residual <= 1e-10);
    CHECK(report.output_fidelity >= 1.0 - 1e-10);
    CHECK(report.probability_sum_residual <= 1e-12);
    CHECK(report.selective_outcome_residual <= 1e-10);
    CHECK(report.pass);
}

TEST_CASE("d=2 synthesis maps the uniform state to the target") {
    DilutionTarget target(vec({std::sqrt(0.75), std::sqrt(0.25)}));
    DilutionProtocol protocol = synthesize_dilution(target);
    REQUIRE(protocol.kraus.operators.size() == 2);
    Vector uniform = Vector::Constant(2, Complex(1.0 / std::sqrt(2.0), 0.0));
    for (const Matrix& k : protocol.kraus.operators) {
        Vector out = k * uniform;
        out /= out.norm();
        CHECK(std::abs(std::abs(out[0]) - std::sqrt(0.75)) <= 1e-12);
        CHECK(std::abs(std::abs(out[1]) - std::sqrt(0.25)) <= 1e-12);
    }
}

TEST_CASE("uniform target degenerates to the identity protocol") {
    DilutionTarget uniform(RealVector::Constant(3, 1.0 / std::sqrt(3.0)));
    DilutionProtocol protocol = synthesize_dilution(uniform);
    REQUIRE(protocol.kraus.operators.size() == 1);
    CHECK(max_abs(protocol.kraus.operators[0] - Matrix::Identity(3, 3)) <= 1e-12);
    CHECK(protocol.probabilities[0] == doctest::Approx(1.0));
    CHECK(verify_dilution(protocol, uniform).pass);
}

TEST_CASE("every synthesized Kraus operator is block-incoherent with the expected index map") {
    DilutionProtocol protocol = synthesize_dilution(reference_target());
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < 4; ++i) blocks.push_back({i});
    ProjectiveMeasurement p =
        ProjectiveMeasurement::from_partition(BlockPartition(4, blocks));
    for (std::size_t i = 0; i < protocol.kraus.operators.size(); ++i) {
        KrausBlockStructure structure =
            kraus_block_structure(protocol.kraus.operators[i], p, 1e-9);
        CHECK(structure.ok);
        CHECK(structure.block_map == protocol.permutations[i]);
    }
}

TEST_CASE("seeded end-to-end synthesis across d = 2..6") {
    Rng rng(113);
    int verified = 0;
    for (int trial = 0; trial < 500; ++trial) {
        Eigen::Index dim = 2 + trial % 5;
        DilutionTarget target = random_dilution_target(rng, dim);
        DilutionProtocol protocol = synthesize_dilution(target);
        DilutionReport report = verify_dilution(protocol, target);
        CHECK(report.normalization_residual <= 1e-9);
        CHECK(report.output_fidelity >= 1.0 - 1e-9);
        CHECK(report.probability_sum_residual <= 1e-9);
        CHECK(report.selective_outcome_residual <= 1e-9);
        if (report.pass) ++verified;
    }
    CHECK(verified == 500);
}

TEST_CASE("tampering is detected") {
    DilutionProtocol protocol = synthesize_dilution(reference_target());
    protocol.kraus.operators[0] *= 1.01;
    DilutionReport report = verify_dilution(protocol, reference_target());
    CHECK(report.normalization_residual >= 0.005);
    CHECK_FALSE(report.pass);
}
