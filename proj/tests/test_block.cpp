#include <doctest.h>

#include <cmath>

#include "blockcoh/block.hpp"
#include "blockcoh/random.hpp"

using namespace blockcoh;

namespace {

ProjectiveMeasurement rank_one_blocks(Eigen::Index dim) {
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < dim; ++i) blocks.push_back({i});
    return ProjectiveMeasurement::from_partition(BlockPartition(dim, blocks));
}

ProjectiveMeasurement paired_blocks_dim4() {
    return ProjectiveMeasurement::from_partition(BlockPartition(4, {{0, 1}, {2, 3}}));
}

PureState uniform_state(Eigen::Index dim) {
    return PureState(Vector::Constant(dim, Complex(1.0 / std::sqrt(double(dim)), 0.0)));
}

}  // namespace

TEST_CASE("partition validation") {
    CHECK_THROWS_AS(BlockPartition(4, {{0, 1}, {1, 2, 3}}), InvariantError);
    CHECK_THROWS_AS(BlockPartition(4, {{0, 1}, {2}}), InvariantError);
    CHECK_THROWS_AS(BlockPartition(4, {{0, 1, 2, 4}}), InvariantError);
    CHECK_NOTHROW(BlockPartition(4, {{2, 0}, {1, 3}}));
}

TEST_CASE("projector family validation") {
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 0.5;  // not idempotent
    p(1, 1) = 0.5;
    CHECK_THROWS_AS(ProjectiveMeasurement({HermitianOperator(p), HermitianOperator(p)}),
                    InvariantError);
}

TEST_CASE("block_dephase examples") {
    Rng rng(5);
    DensityOperator rho = random_density(rng, 2);
    ProjectiveMeasurement p2 = rank_one_blocks(2);
    Matrix dephased = block_dephase(rho, p2).matrix();
    CHECK(std::abs(dephased(0, 1)) < 1e-14);
    CHECK(dephased(0, 0).real() == doctest::Approx(rho.matrix()(0, 0).real()));

    ProjectiveMeasurement trivial(
        {HermitianOperator(Matrix::Identity(3, 3))});
    DensityOperator rho3 = random_density(rng, 3);
    CHECK(max_abs(block_dephase(rho3, trivial).matrix() - rho3.matrix()) < 1e-14);

    DensityOperator psi4 = uniform_state(4).projector();
    Matrix out = block_dephase(psi4, paired_blocks_dim4()).matrix();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            bool same_block = (r < 2) == (c < 2);
            CHECK(std::abs(out(r, c) - (same_block ? Complex(0.25, 0.0) : Complex(0.0, 0.0))) <
                  1e-12);
        }
}

TEST_CASE("dephasing is an idempotent trace-preserving projection") {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        Eigen::Index dim = 2 + trial % 5;
        int n = rng.uniform_int(1, static_cast<int>(dim));
        ProjectiveMeasurement p =
            ProjectiveMeasurement::from_partition(random_partition(rng, dim, n));
        DensityOperator rho = random_density(rng, dim);
        DensityOperator once = block_dephase(rho, p);
        DensityOperator twice = block_dephase(once, p);
        CHECK(max_abs(once.matrix() - twice.matrix()) <= 1e-10);
        CHECK(std::abs(once.matrix().trace().real() - 1.0) <= 1e-10);
        // DensityOperator construction already certifies positivity
        CHECK(is_block_incoherent(once, p, 1e-10));
    }
}

TEST_CASE("is_block_incoherent examples") {
    Rng rng(9);
    ProjectiveMeasurement p = rank_one_blocks(4);
    DensityOperator rho = random_density(rng, 4);
    CHECK(is_block_incoherent(block_dephase(rho, p), p, 1e-10));
    CHECK_FALSE(is_block_incoherent(uniform_state(4).projector(), p, 1e-6));
    DensityOperator mixed(Matrix::Identity(4, 4) / 4.0);
    CHECK(is_block_incoherent(mixed, p, 1e-12));
}

TEST_CASE("make_block_incoherent_kraus") {
    ProjectiveMeasurement p = rank_one_blocks(2);
    Matrix id = Matrix::Identity(2, 2);

    CHECK(max_abs(make_block_incoherent_kraus(p, {0, 1}, id) - id) < 1e-14);

    // orthogonality kills P_{pi(i)} c P_i unless c connects the blocks, so the
    // relabeling operator comes from uniform coefficients, not from c = I
    Matrix swap = make_block_incoherent_kraus(p, {1, 0}, Matrix::Ones(2, 2));
    Matrix x = Matrix::Zero(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    CHECK(max_abs(swap - x) < 1e-14);
    CHECK(max_abs(make_block_incoherent_kraus(p, {1, 0}, id)) < 1e-14);

    CHECK_THROWS_AS(make_block_incoherent_kraus(p, {0, 0}, id), InvariantError);
    CHECK_THROWS_AS(make_block_incoherent_kraus(p, {0}, id), InvariantError);
}

TEST_CASE("block-incoherent Kraus operators map incoherent states to incoherent states") {
    Rng rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        Eigen::Index dim = 3 + trial % 4;
        int n = rng.uniform_int(2, static_cast<int>(dim));
        ProjectiveMeasurement p =
            ProjectiveMeasurement::from_partition(random_partition(rng, dim, n));
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        std::shuffle(perm.begin(), perm.end(), rng.engine());
        Matrix k = make_block_incoherent_kraus(p, perm, rng.gaussian_matrix(dim, dim));

        DensityOperator sigma = random_block_incoherent_state(rng, p);
        Matrix mapped = k * sigma.matrix() * k.adjoint();
        CHECK(max_abs(mapped - block_dephase_raw(mapped, p)) <= 1e-9);
        CHECK(kraus_block_structure(k, p, 1e-9).ok);
    }
}

TEST_CASE("maximally_block_coherent") {
    for (Eigen::Index d : {2, 3, 5}) {
        PureState psi = maximally_block_coherent(rank_one_blocks(d));
        for (Eigen::Index i = 0; i < d; ++i)
            CHECK(std::abs(psi.amplitudes()[i] - Complex(1.0 / std::sqrt(double(d)), 0.0)) <
                  1e-12);
    }

    PureState psi4 = maximally_block_coherent(rank_one_blocks(4));
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(std::abs(psi4.amplitudes()[i] - Complex(0.5, 0.0)) < 1e-12);

    PureState paired = maximally_block_coherent(paired_blocks_dim4());
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(std::abs(paired.amplitudes()[i] - Complex(0.5, 0.0)) < 1e-12);
}

TEST_CASE("maximally_block_coherent has equal block weights") {
    Rng rng(15);
    for (int trial = 0; trial < 25; ++trial) {
        Eigen::Index dim = 3 + trial % 5;
        int n = rng.uniform_int(2, static_cast<int>(dim));
        ProjectiveMeasurement p =
            ProjectiveMeasurement::from_partition(random_partition(rng, dim, n));
        PureState psi = maximally_block_coherent(p);
        for (int k = 0; k < n; ++k) {
            double weight = (p.projector(k).matrix() * psi.amplitudes()).squaredNorm();
            CHECK(std::abs(weight - 1.0 / n) <= 1e-10);
        }
    }
}

TEST_CASE("a block orthogonal to the uniform state is rejected") {
    Matrix plus(2, 2), minus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    minus << 0.5, -0.5, -0.5, 0.5;
    ProjectiveMeasurement p({HermitianOperator(plus), HermitianOperator(minus)});
    CHECK_THROWS_AS(maximally_block_coherent(p), InvariantError);
}

TEST_CASE("apply_channel") {
    Rng rng(19);
    DensityOperator rho = random_density(rng, 3);

    KrausChannel identity{3, {Matrix::Identity(3, 3)}, std::nullopt};
    CHECK(max_abs(apply_channel(rho, identity).matrix() - rho.matrix()) < 1e-14);

    ProjectiveMeasurement p =
        ProjectiveMeasurement::from_partition(BlockPartition(3, {{0, 1}, {2}}));
    KrausChannel dephasing{3, {p.projector(0).matrix(), p.projector(1).matrix()}, std::nullopt};
    CHECK(max_abs(apply_channel(rho, dephasing).matrix() - block_dephase(rho, p).matrix()) <
          1e-12);

    KrausChannel broken{3, {0.5 * Matrix::Identity(3, 3)}, std::nullopt};
    CHECK_THROWS_AS(apply_channel(rho, broken), InvariantError);
}

TEST_CASE("random block-incoherent channels are trace preserving and structure certified") {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::Index dim = 3 + trial % 3;
        int n = rng.uniform_int(2, static_cast<int>(dim));
        ProjectiveMeasurement p =
            ProjectiveMeasurement::from_partition(random_partition(rng, dim, n));
        KrausChannel channel = random_block_incoherent_channel(rng, p, 3);
        REQUIRE(channel.block_maps.has_value());
        DensityOperator rho = random_density(rng, dim);
        DensityOperator out = apply_channel(rho, channel);
        CHECK(std::abs(out.matrix().trace().real() - 1.0) <= 1e-9);
        DensityOperator sigma = random_block_incoherent_state(rng, p);
        CHECK(is_block_incoherent(apply_channel(sigma, channel), p, 1e-8));
    }
}
