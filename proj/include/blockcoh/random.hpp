#pragma once

#include <cstdint>
#include <random>

#include "blockcoh/block.hpp"
#include "blockcoh/dilution.hpp"
#include "blockcoh/matrix.hpp"
#include "blockcoh/naimark.hpp"

namespace blockcoh {

// All library randomness flows through this explicitly seeded engine.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::mt19937_64& engine() { return engine_; }
    double uniform() { return uniform_(engine_); }
    double gaussian() { return gauss_(engine_); }
    int uniform_int(int lo, int hi);  // inclusive bounds

    Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols);
    Matrix haar_unitary(Eigen::Index dim);

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

PureState random_pure_state(Rng& rng, Eigen::Index dim);
DensityOperator random_density(Rng& rng, Eigen::Index dim, Eigen::Index rank = 0);
BlockPartition random_partition(Rng& rng, Eigen::Index dim, int n_blocks);
Povm random_povm(Rng& rng, Eigen::Index dim, int outcomes);
Povm random_projective_povm(Rng& rng, Eigen::Index dim, int outcomes);
DilutionTarget random_dilution_target(Rng& rng, Eigen::Index dim);

// Random block-incoherent channel: permutation-structured Kraus operators with
// Haar-random coefficient matrices, closed to sum K^dag K = I.
KrausChannel random_block_incoherent_channel(Rng& rng, const ProjectiveMeasurement& p,
                                             int n_kraus);

// Generic CPTP channel from a random isometry (not block-incoherent).
KrausChannel random_channel(Rng& rng, Eigen::Index dim, int n_kraus);

// Random block-incoherent density operator.
DensityOperator random_block_incoherent_state(Rng& rng, const ProjectiveMeasurement& p);

}  // namespace blockcoh
