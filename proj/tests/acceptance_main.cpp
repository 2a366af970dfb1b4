// Acceptance suite: one line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "blockcoh/block.hpp"
#include "blockcoh/dilution.hpp"
#include "blockcoh/matrix.hpp"
#include "blockcoh/measures.hpp"
#include "blockcoh/naimark.hpp"
#include "blockcoh/random.hpp"
#include "oracles.hpp"

using namespace blockcoh;

namespace {

constexpr std::uint64_t kSeed = 42;

int failures = 0;

void criterion(int number, const std::string& label, const std::function<bool(std::string&)>& fn) {
    std::string detail;
    bool ok = false;
    auto start = std::chrono::steady_clock::now();
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s (%s; %.2fs)\n", ok ? "PASS" : "FAIL", number,
                label.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
}

ProjectiveMeasurement rank_one_blocks(Eigen::Index dim) {
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < dim; ++i) blocks.push_back({i});
    return ProjectiveMeasurement::from_partition(BlockPartition(dim, blocks));
}

// integer partitions of total into exactly parts parts, nonincreasing
void partitions_into(int total, int parts, int max_part, std::vector<int>& current,
                     std::vector<std::vector<int>>& out) {
    if (parts == 0) {
        if (total == 0) out.push_back(current);
        return;
    }
    for (int first = std::min(total - (parts - 1), max_part); first >= 1; --first) {
        current.push_back(first);
        partitions_into(total - first, parts - 1, first, current, out);
        current.pop_back();
    }
}

ProjectiveMeasurement measurement_from_sizes(const std::vector<int>& sizes) {
    int dim = 0;
    for (int s : sizes) dim += s;
    std::vector<std::vector<int>> blocks;
    int at = 0;
    for (int s : sizes) {
        std::vector<int> block;
        for (int i = 0; i < s; ++i) block.push_back(at++);
        blocks.push_back(std::move(block));
    }
    return ProjectiveMeasurement::from_partition(BlockPartition(dim, blocks));
}

bool criterion1(std::string& detail) {
    auto start = std::chrono::steady_clock::now();
    RealVector coeffs(4);
    coeffs << std::sqrt(0.4), std::sqrt(0.3), std::sqrt(0.28), std::sqrt(0.02);
    DilutionTarget target(coeffs);
    DilutionProtocol protocol = synthesize_dilution(target);

    const double expected_probs[] = {2153.0 / 6916.0, 15.0 / 38.0, 5.0 / 28.0, 3.0 / 26.0};
    double prob_err = 0.0;
    for (int i = 0; i < 4; ++i)
        prob_err = std::max(prob_err, std::abs(protocol.probabilities[i] - expected_probs[i]));

    const double k1[] = {std::sqrt(4306.0 / 8645.0), std::sqrt(6459.0 / 17290.0),
                         std::sqrt(2153.0) / (5.0 * std::sqrt(247.0)),
                         std::sqrt(2153.0) / (5.0 * std::sqrt(3458.0))};
    const double k2[] = {std::sqrt(3.0 / 95.0), 3.0 / std::sqrt(19.0), std::sqrt(42.0 / 95.0),
                         2.0 * std::sqrt(3.0) / std::sqrt(19.0)};
    const double k3[] = {std::sqrt(2.0 / 7.0), 1.0 / std::sqrt(70.0), 1.0 / std::sqrt(5.0),
                         std::sqrt(3.0 / 14.0)};
    const double k4[] = {2.0 * std::sqrt(3.0) / std::sqrt(65.0), 3.0 / std::sqrt(65.0),
                         std::sqrt(3.0) / (5.0 * std::sqrt(13.0)),
                         std::sqrt(42.0) / (5.0 * std::sqrt(13.0))};
    const double* expected_kraus[] = {k1, k2, k3, k4};
    auto perms = permutation_set(4);
    double kraus_err = 0.0;
    for (int i = 0; i < 4; ++i) {
        Matrix diag = perms[static_cast<std::size_t>(i)].cast<Complex>().transpose() *
                      protocol.kraus.operators[static_cast<std::size_t>(i)];
        for (int j = 0; j < 4; ++j)
            kraus_err = std::max(kraus_err, std::abs(diag(j, j).real() - expected_kraus[i][j]));
    }

    Matrix norm = Matrix::Zero(4, 4);
    for (const Matrix& k : protocol.kraus.operators) norm += k.adjoint() * k;
    double norm_err = max_abs(norm - Matrix::Identity(4, 4));

    DilutionReport report = verify_dilution(protocol, target);
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "prob err %.2e <= 1e-12, kraus err %.2e <= 1e-10, norm err %.2e <= 1e-10, "
                  "fidelity %.12f >= 1-1e-10",
                  prob_err, kraus_err, norm_err, report.output_fidelity);
    detail = buf;
    return prob_err <= 1e-12 && kraus_err <= 1e-10 && norm_err <= 1e-10 &&
           report.output_fidelity >= 1.0 - 1e-10 && seconds < 1.0;
}

bool criterion2(std::string& detail) {
    auto start = std::chrono::steady_clock::now();
    const double tol = 1e-4;
    double worst = 0.0;
    int structures = 0;
    Rng rng(kSeed);
    for (int dim = 2; dim <= 8; ++dim) {
        for (int n = 2; n <= std::min(6, dim); ++n) {
            std::vector<std::vector<int>> shapes;
            std::vector<int> scratch;
            partitions_into(dim, n, dim, scratch, shapes);
            for (const auto& sizes : shapes) {
                ProjectiveMeasurement p = measurement_from_sizes(sizes);
                PureState psi = maximally_block_coherent(p);
                double value = c_max_block(psi.projector(), p, tol).value;
                worst = std::max(worst, std::abs(value - std::log2(double(n))));
                ++structures;

                // also exercise a rotated copy of the same structure
                if (structures % 5 == 0) {
                    Matrix u = rng.haar_unitary(dim);
                    std::vector<HermitianOperator> rotated;
                    for (const auto& proj : p.projectors())
                        rotated.emplace_back(u * proj.matrix() * u.adjoint());
                    ProjectiveMeasurement rp(std::move(rotated));
                    PureState rpsi = maximally_block_coherent(rp);
                    double rvalue = c_max_block(rpsi.projector(), rp, tol).value;
                    worst = std::max(worst, std::abs(rvalue - std::log2(double(n))));
                }
            }
        }
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d structures, worst |value - log2 N| = %.2e <= 1e-3",
                  structures, worst);
    detail = buf;
    return worst <= 1e-3 && seconds < 60.0;
}

bool criterion3(std::string& detail) {
    auto start = std::chrono::steady_clock::now();
    const double tol = 2e-4;
    const double epsilons[] = {0.01, 0.1, 0.3};
    int violations = 0;
    double worst_left = -1e300, worst_right = -1e300;
    for (int dim = 2; dim <= 6; ++dim) {
        Rng rng(kSeed + static_cast<std::uint64_t>(dim) * 1009);
        for (int trial = 0; trial < 50; ++trial) {
            int n = rng.uniform_int(2, dim);
            ProjectiveMeasurement p =
                ProjectiveMeasurement::from_partition(random_partition(rng, dim, n));
            PureState psi = random_pure_state(rng, dim);
            for (double eps : epsilons) {
                double cost = c_0_smoothed(psi, p, SmoothingBall(eps)).value;
                double cmax = c_max_smoothed(psi.projector(), p, SmoothingBall(eps), tol).value;
                worst_left = std::max(worst_left, cmax - cost);
                worst_right = std::max(worst_right, cost - cmax - 1.0);
                if (cmax > cost + 1e-12 || cost > cmax + 1.0 + 2e-3) ++violations;
            }
        }
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "750 sandwich checks, violations %d, worst left %.2e, worst right %.2e",
                  violations, worst_left, worst_right);
    detail = buf;
    return violations == 0 && seconds < 300.0;
}

bool criterion4(std::string& detail) {
    const double tol = 1e-4;
    double worst = 0.0;
    double worst_lower = 0.0;
    Rng rng(kSeed);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::Index dim = 2 + trial % 2;
        ProjectiveMeasurement p = rank_one_blocks(dim);
        DensityOperator rho = random_density(rng, dim);
        double solver = c_max_block(rho, p, tol).value;
        double grid = oracles::c_max_grid_oracle(rho.matrix(), 1e-3);
        worst = std::max(worst, std::abs(solver - grid));
        worst_lower = std::max(worst_lower, solver - 5.0 * tol - grid);
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "50 states, worst |solver - grid| = %.2e <= 5e-3, lower-bound slack %.2e",
                  worst, worst_lower);
    detail = buf;
    return worst <= 5e-3 && worst_lower <= 0.0;
}

bool criterion5(std::string& detail) {
    auto start = std::chrono::steady_clock::now();
    Rng rng(kSeed);
    double unitarity = 0.0, probability = 0.0, conjugation = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::Index d = 2 + trial % 2;
        int n = 2 + trial % 3;
        Povm povm = random_povm(rng, d, n);
        NaimarkExtension ext = build_naimark_extension(canonical_measurement_ops(povm));
        const Eigen::Index nd = ext.dim();
        unitarity = std::max(unitarity,
                             max_abs(ext.V.adjoint() * ext.V - Matrix::Identity(nd, nd)));
        for (int s = 0; s < 100; ++s) {
            DensityOperator rho = random_density(rng, d);
            Matrix embedded = embed_tensor(rho, n).matrix();
            for (int i = 0; i < n; ++i) {
                double direct = (povm.element(i).matrix() * rho.matrix()).trace().real();
                double lifted =
                    (ext.projectors.projector(i).matrix() * embedded).trace().real();
                probability = std::max(probability, std::abs(direct - lifted));
            }
            if (s % 10 == 0) {
                Matrix conjugated = ext.V * embedded * ext.V.adjoint();
                Matrix expansion = Matrix::Zero(nd, nd);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        Matrix probe = Matrix::Zero(n, n);
                        probe(i, j) = 1.0;
                        expansion += kron(
                            ext.measurement_ops[static_cast<std::size_t>(i)] * rho.matrix() *
                                ext.measurement_ops[static_cast<std::size_t>(j)].adjoint(),
                            probe);
                    }
                conjugation = std::max(conjugation, max_abs(conjugated - expansion));
            }
        }
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "unitarity %.2e <= 1e-10, probability %.2e <= 1e-10, conjugation %.2e <= 1e-9",
                  unitarity, probability, conjugation);
    detail = buf;
    return unitarity <= 1e-10 && probability <= 1e-10 && conjugation <= 1e-9 && seconds < 30.0;
}

bool criterion6(std::string& detail) {
    const double tol = 1e-4;
    const double eps = 0.1;
    Rng rng(kSeed);
    const std::vector<std::pair<int, Eigen::Index>> shapes = {{2, 2}, {3, 2}, {2, 3}};
    double worst_width = 0.0, worst_lower = 0.0, worst_containment = 0.0;
    int projective_pairs = 0;
    for (int trial = 0; trial < 25; ++trial) {
        auto [n, d] = shapes[static_cast<std::size_t>(trial) % shapes.size()];
        bool projective = (trial % 3 == 2) && n <= d;
        Povm povm =
            projective ? random_projective_povm(rng, d, n) : random_povm(rng, d, n);
        PureState psi = random_pure_state(rng, d);
        CostInterval interval =
            one_shot_cost_povm(psi.projector(), povm, SmoothingBall(eps), tol);
        worst_width = std::max(worst_width, std::abs(interval.upper - interval.lower - 1.0));
        worst_lower = std::max(worst_lower, -interval.lower);
        if (projective) {
            ++projective_pairs;
            std::vector<HermitianOperator> projectors;
            for (const auto& e : povm.elements()) projectors.push_back(e);
            ProjectiveMeasurement base(std::move(projectors));
            double base_cost = one_shot_cost_mbi(psi, base, SmoothingBall(eps)).value;
            worst_containment = std::max(
                {worst_containment, interval.lower - base_cost, base_cost - interval.upper});
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "width err %.2e <= 2e-4, lower dip %.2e <= 1e-4, containment (%d projective)"
                  " %.2e <= 2e-4",
                  worst_width, worst_lower, projective_pairs, worst_containment);
    detail = buf;
    return worst_width <= 2.0 * tol && worst_lower <= tol && worst_containment <= 2.0 * tol;
}

bool criterion7(std::string& detail) {
    Rng rng(kSeed);
    int violations = 0;
    std::string failing;

    auto record = [&](bool ok, const char* what) {
        if (!ok) {
            ++violations;
            if (failing.empty()) failing = what;
        }
    };

    // dephasing is an idempotent, trace-preserving, positivity-preserving projection
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::Index dim = 2 + trial % 7;
        ProjectiveMeasurement p = ProjectiveMeasurement::from_partition(
            random_partition(rng, dim, rng.uniform_int(1, static_cast<int>(dim))));
        DensityOperator rho = random_density(rng, dim);
        DensityOperator once = block_dephase(rho, p);
        record(max_abs(once.matrix() - block_dephase(once, p).matrix()) <= 1e-10,
               "dephase idempotence");
        record(std::abs(once.matrix().trace().real() - 1.0) <= 1e-10, "dephase trace");
    }

    // max-relative-entropy data processing
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::Index dim = 2 + trial % 3;
        DensityOperator rho = random_density(rng, dim);
        DensityOperator sigma = random_density(rng, dim);
        KrausChannel channel = random_channel(rng, dim, rng.uniform_int(1, 3));
        double before = d_max(rho, sigma);
        double after = d_max(apply_channel(rho, channel), apply_channel(sigma, channel));
        record(after <= before + 1e-8, "d_max data processing");
    }

    // faithfulness: block-incoherent states score zero, coherent states do not
    const double tol = 1e-6;
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::Index dim = 2 + trial % 7;
        ProjectiveMeasurement p = ProjectiveMeasurement::from_partition(
            random_partition(rng, dim, rng.uniform_int(2, static_cast<int>(dim))));
        record(c_max_block(random_block_incoherent_state(rng, p), p, tol).value <= tol,
               "faithfulness on incoherent states");
    }
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::Index dim = 2 + trial % 7;
        ProjectiveMeasurement p = ProjectiveMeasurement::from_partition(
            random_partition(rng, dim, rng.uniform_int(2, static_cast<int>(dim))));
        PureState psi = random_pure_state(rng, dim);
        DensityOperator rho = psi.projector();
        if (max_abs(rho.matrix() - block_dephase(rho, p).matrix()) < 0.01) {
            --trial;  // visibly coherent ensemble
            continue;
        }
        record(c_max_block(rho, p, 1e-4).value > 0.01, "faithfulness on coherent states");
    }

    // measurement faithfulness through the Naimark embedding
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::Index d = 2 + trial % 2;
        // POVM whose later elements annihilate the first basis direction
        Matrix e1 = Matrix::Zero(d, d);
        e1(0, 0) = 1.0;
        int rest = 2;
        std::vector<Matrix> tail_pieces;
        Matrix tail_total = Matrix::Zero(d - 1, d - 1);
        for (int i = 0; i < rest; ++i) {
            Matrix g = rng.gaussian_matrix(d - 1, d - 1);
            Matrix m = g * g.adjoint();
            tail_total += m;
            tail_pieces.push_back(std::move(m));
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(tail_total);
        Matrix fix = es.eigenvectors() *
                     es.eigenvalues().cwiseMax(1e-12).cwiseSqrt().cwiseInverse().asDiagonal() *
                     es.eigenvectors().adjoint();
        std::vector<HermitianOperator> elements;
        elements.emplace_back(e1);
        Matrix budget = Matrix::Identity(d - 1, d - 1);
        for (int i = 0; i < rest; ++i) {
            Matrix scaled = fix * tail_pieces[static_cast<std::size_t>(i)] * fix;
            if (i + 1 == rest) scaled = budget;
            else budget -= scaled;
            Matrix full = Matrix::Zero(d, d);
            full.bottomRightCorner(d - 1, d - 1) = 0.5 * (scaled + scaled.adjoint().eval());
            elements.emplace_back(full);
        }
        Povm povm(std::move(elements));
        Vector head = Vector::Zero(d);
        head[0] = 1.0;
        DensityOperator pi_state = PureState(head).projector();
        record(is_povm_incoherent(pi_state, povm, 1e-10), "measurement faithfulness construction");
        record(c_max_povm(pi_state, povm, tol).value <= tol, "measurement faithfulness on incoherent states");
    }
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::Index d = 2 + trial % 2;
        int n = 2 + trial % 2;
        Povm povm = random_povm(rng, d, n);
        PureState psi = random_pure_state(rng, d);
        RealVector weights(n);
        for (int i = 0; i < n; ++i)
            weights[i] = (povm.element(i).matrix() * psi.projector().matrix()).trace().real();
        std::sort(weights.data(), weights.data() + n, std::greater<double>());
        if (weights[1] < 0.01) {
            --trial;
            continue;
        }
        record(c_max_povm(psi.projector(), povm, 1e-4).value > 0.01, "measurement faithfulness on coherent states");
    }

    // quasi-convexity of c_max on random mixtures
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::Index dim = 2 + trial % 4;
        ProjectiveMeasurement p = ProjectiveMeasurement::from_partition(
            random_partition(rng, dim, rng.uniform_int(2, static_cast<int>(dim))));
        const double qtol = 1e-5;
        double w = rng.uniform();
        DensityOperator a = random_density(rng, dim);
        DensityOperator b = random_density(rng, dim);
        DensityOperator mix(w * a.matrix() + (1.0 - w) * b.matrix());
        double lhs = c_max_block(mix, p, qtol).value;
        double rhs = std::max(c_max_block(a, p, qtol).value, c_max_block(b, p, qtol).value);
        record(lhs <= rhs + 2.0 * qtol, "quasi-convexity");
    }

    // monotonicity under random block-incoherent channels
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::Index dim = 2 + trial % 5;
        ProjectiveMeasurement p = ProjectiveMeasurement::from_partition(
            random_partition(rng, dim, rng.uniform_int(2, static_cast<int>(dim))));
        KrausChannel channel = random_block_incoherent_channel(rng, p, rng.uniform_int(1, 3));
        DensityOperator rho = random_pure_state(rng, dim).projector();
        record(verify_strong_monotonicity(MeasureKind::CMax, rho, channel, p, 1e-5).pass,
               "monotonicity c_max");
        record(verify_strong_monotonicity(MeasureKind::CZero, rho, channel, p, 1e-5).pass,
               "monotonicity c_0");
    }

    char buf[200];
    std::snprintf(buf, sizeof(buf), "violations %d%s%s", violations,
                  failing.empty() ? "" : ", first: ", failing.c_str());
    detail = buf;
    return violations == 0;
}

}  // namespace

int main() {
    criterion(1, "worked d=4 dilution example", criterion1);
    criterion(2, "c_max of maximally block-coherent states equals log2 N", criterion2);
    criterion(3, "one-shot cost sandwich on random pure states", criterion3);
    criterion(4, "solver agrees with the diagonal grid oracle", criterion4);
    criterion(5, "Naimark extension residuals", criterion5);
    criterion(6, "one-shot POVM cost interval", criterion6);
    criterion(7, "property suites", criterion7);
    if (failures == 0) std::printf("acceptance: all criteria passed\n");
    else std::printf("acceptance: %d criteria failed\n", failures);
    return failures;
}
