// Command-line front end: loads states and measurements from JSON, evaluates
// coherence measures, synthesises and verifies dilution protocols, builds
// Naimark extensions and runs the theorem-verification ensembles.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 parse/schema error,
// 3 solver non-convergence (best bounds included in the report).

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "blockcoh/block.hpp"
#include "blockcoh/dilution.hpp"
#include "blockcoh/json_io.hpp"
#include "blockcoh/matrix.hpp"
#include "blockcoh/measures.hpp"
#include "blockcoh/naimark.hpp"
#include "blockcoh/random.hpp"

using nlohmann::json;
using namespace blockcoh;

namespace {

struct Report {
    json body;
    bool pass = true;

    Report(const std::string& command, std::uint64_t seed, double epsilon, double tol) {
        body["schema"] = 1;
        body["command"] = command;
        body["seed"] = seed;
        body["epsilon"] = epsilon;
        body["tol"] = tol;
        body["checks"] = json::array();
    }

    void check(const std::string& name, double value, double threshold, bool ok) {
        body["checks"].push_back(
            {{"name", name}, {"value", value}, {"threshold", threshold}, {"pass", ok}});
        pass = pass && ok;
    }

    // value must not exceed threshold
    void check_le(const std::string& name, double value, double threshold) {
        check(name, value, threshold, value <= threshold);
    }

    void check_ge(const std::string& name, double value, double threshold) {
        check(name, value, threshold, value >= threshold);
    }

    int finish(const std::string& out_path, std::chrono::steady_clock::time_point t0) {
        body["pass"] = pass;
        auto elapsed = std::chrono::steady_clock::now() - t0;
        body["wall_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
        if (!out_path.empty()) write_json_file(out_path, body);
        std::cout << body.dump(2) << "\n";
        return pass ? 0 : 1;
    }
};

std::pair<int, int> parse_dim_range(const std::string& spec) {
    auto dots = spec.find("..");
    if (dots == std::string::npos) {
        int d = std::stoi(spec);
        return {d, d};
    }
    return {std::stoi(spec.substr(0, dots)), std::stoi(spec.substr(dots + 2))};
}

ProjectiveMeasurement load_measurement(const std::string& path) {
    return measurement_from_json(load_json_file(path));
}

json measure_result_json(const std::string& name, const MeasureResult& result,
                         bool include_certificate) {
    json j;
    j["measure"] = name;
    j["value"] = result.value;
    j["gap"] = result.gap;
    j["bound_type"] = result.bound_type();
    if (include_certificate && result.certificate)
        j["certificate"] = state_to_json(*result.certificate);
    return j;
}

// minimal block count whose retained weight reaches 1 - eps, by subset
// enumeration; independent of the sorted-prefix implementation
int smoothing_oracle_subsets(const RealVector& weights, double epsilon) {
    const int n = static_cast<int>(weights.size());
    int best = n;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        double retained = 0.0;
        int size = 0;
        for (int k = 0; k < n; ++k)
            if (mask & (1u << k)) {
                retained += weights[k];
                ++size;
            }
        if (retained >= 1.0 - epsilon - 1e-12) best = std::min(best, size);
    }
    return best;
}

int cmd_measure(const std::string& which, const std::string& state_path,
                const std::string& measurement_path, const std::string& sigma_path,
                double epsilon, double tol, std::uint64_t seed, const std::string& out,
                bool with_certificate) {
    auto t0 = std::chrono::steady_clock::now();
    Report report("measure " + which, seed, epsilon, tol);
    DensityOperator rho = density_from_json(load_json_file(state_path));

    if (which == "d_max") {
        if (sigma_path.empty()) throw ParseError("d_max requires --sigma");
        DensityOperator sigma = density_from_json(load_json_file(sigma_path));
        double value = d_max(rho, sigma);
        report.body["result"] = {{"measure", "d_max"},
                                 {"value", std::isfinite(value) ? json(value) : json("inf")},
                                 {"gap", 0.0},
                                 {"bound_type", "exact"}};
        report.check("finite_or_flagged", std::isfinite(value) ? 1.0 : 0.0, 0.0, true);
        return report.finish(out, t0);
    }

    ProjectiveMeasurement p = load_measurement(measurement_path);
    SmoothingBall ball(epsilon);

    auto to_pure = [&](const DensityOperator& state) -> std::optional<PureState> {
        Eigen::SelfAdjointEigenSolver<Matrix> es(state.matrix());
        if (es.eigenvalues().maxCoeff() < 1.0 - 1e-9) return std::nullopt;
        return PureState(es.eigenvectors().col(state.dim() - 1));
    };

    MeasureResult result;
    if (which == "c_max") {
        result = (epsilon > 0.0) ? c_max_smoothed(rho, p, ball, tol) : c_max_block(rho, p, tol);
        if (result.certificate) {
            report.check_le("certificate_gap", result.gap, tol);
        }
    } else if (which == "c_0") {
        auto pure = to_pure(rho);
        if (epsilon > 0.0) {
            if (!pure) throw ParseError("smoothed c_0 requires a pure state input");
            result = c_0_smoothed(*pure, p, ball);
        } else {
            result = pure ? c_0_block(*pure, p) : c_0_block(rho, p, seed);
        }
    } else if (which == "one_shot_mbi") {
        auto pure = to_pure(rho);
        result = pure ? one_shot_cost_mbi(*pure, p, ball) : one_shot_cost_mbi(rho, p, ball, tol);
    } else if (which == "coherent_rank") {
        auto pure = to_pure(rho);
        if (!pure) throw ParseError("coherent_rank requires a pure state input");
        result.value = static_cast<double>(coherent_rank(*pure));
    } else {
        throw ParseError("unknown measure: " + which);
    }
    report.body["result"] = measure_result_json(which, result, with_certificate);
    report.check_ge("value_nonnegative", result.value, -1e-9);
    return report.finish(out, t0);
}

int cmd_dilute(const std::string& target_path, double /*tol*/, std::uint64_t seed,
               const std::string& out) {
    auto t0 = std::chrono::steady_clock::now();
    Report report("dilute", seed, 0.0, 0.0);
    DilutionTarget target = target_from_json(load_json_file(target_path));
    DilutionProtocol protocol = synthesize_dilution(target);
    DilutionReport verification = verify_dilution(protocol, target);
    report.body["protocol"] = protocol_to_json(protocol);
    report.check_le("normalization_residual", verification.normalization_residual, 1e-10);
    report.check_le("probability_sum_residual", verification.probability_sum_residual, 1e-12);
    report.check_ge("output_fidelity", verification.output_fidelity, 1.0 - 1e-10);
    report.check_le("selective_outcome_residual", verification.selective_outcome_residual,
                    1e-9);
    // --out receives the bare protocol file suitable for verify-dilution
    if (!out.empty()) write_json_file(out, report.body["protocol"]);
    return report.finish("", t0);
}

int cmd_verify_dilution(const std::string& protocol_path, const std::string& target_path,
                        std::uint64_t seed, const std::string& out) {
    auto t0 = std::chrono::steady_clock::now();
    Report report("verify-dilution", seed, 0.0, 0.0);
    DilutionProtocol protocol = protocol_from_json(load_json_file(protocol_path));
    DilutionTarget target = target_from_json(load_json_file(target_path));
    DilutionReport verification = verify_dilution(protocol, target);
    report.body["result"] = {
        {"normalization_residual", verification.normalization_residual},
        {"probability_sum_residual", verification.probability_sum_residual},
        {"output_fidelity", verification.output_fidelity},
        {"selective_outcome_residual", verification.selective_outcome_residual},
        {"max_kraus_leak", verification.max_kraus_leak}};
    report.check_le("normalization_residual", verification.normalization_residual, 1e-9);
    report.check_le("probability_sum_residual", verification.probability_sum_residual, 1e-9);
    report.check_ge("output_fidelity", verification.output_fidelity, 1.0 - 1e-9);
    report.check_le("selective_outcome_residual", verification.selective_outcome_residual,
                    1e-9);
    bool all_bi = true;
    for (bool b : verification.kraus_block_incoherent) all_bi = all_bi && b;
    report.check("kraus_block_incoherent", all_bi ? 1.0 : 0.0, 1.0, all_bi);
    return report.finish(out, t0);
}

int cmd_naimark(const std::string& povm_path, const std::string& state_path,
                std::uint64_t seed, const std::string& out) {
    auto t0 = std::chrono::steady_clock::now();
    Report report("naimark", seed, 0.0, 0.0);
    Povm povm = povm_from_json(load_json_file(povm_path));
    NaimarkExtension ext = build_naimark_extension(canonical_measurement_ops(povm), seed);
    report.body["extension"] = extension_to_json(ext);

    const Eigen::Index nd = ext.dim();
    report.check_le("unitarity_residual",
                    max_abs(ext.V.adjoint() * ext.V - Matrix::Identity(nd, nd)), 1e-10);

    Rng rng(seed);
    double prob_residual = 0.0;
    double conj_residual = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        DensityOperator rho = random_density(rng, ext.base_dim);
        Matrix embedded_in = embed_tensor(rho, ext.outcomes).matrix();
        Matrix conjugated = ext.V * embedded_in * ext.V.adjoint();
        Matrix expansion = Matrix::Zero(nd, nd);
        for (int i = 0; i < ext.outcomes; ++i)
            for (int j = 0; j < ext.outcomes; ++j) {
                Matrix probe = Matrix::Zero(ext.outcomes, ext.outcomes);
                probe(i, j) = 1.0;
                expansion += kron(ext.measurement_ops[static_cast<std::size_t>(i)] *
                                      rho.matrix() *
                                      ext.measurement_ops[static_cast<std::size_t>(j)].adjoint(),
                                  probe);
            }
        conj_residual = std::max(conj_residual, max_abs(conjugated - expansion));
        for (int i = 0; i < ext.outcomes; ++i) {
            double direct = (povm.element(i).matrix() * rho.matrix()).trace().real();
            double extended =
                (ext.projectors.projector(i).matrix() * embedded_in).trace().real();
            prob_residual = std::max(prob_residual, std::abs(direct - extended));
        }
    }
    report.check_le("probability_reproduction_residual", prob_residual, 1e-10);
    report.check_le("conjugation_identity_residual", conj_residual, 1e-9);

    if (!state_path.empty()) {
        DensityOperator rho = density_from_json(load_json_file(state_path));
        report.body["embedded_state"] = state_to_json(embedded_state(rho, ext));
    }
    return report.finish(out, t0);
}

int cmd_povm_coherence(const std::string& state_path, const std::string& povm_path,
                       double epsilon, double tol, std::uint64_t seed,
                       const std::string& out) {
    auto t0 = std::chrono::steady_clock::now();
    Report report("povm-coherence", seed, epsilon, tol);
    DensityOperator rho = density_from_json(load_json_file(state_path));
    Povm povm = povm_from_json(load_json_file(povm_path));
    MeasureResult cmax = c_max_povm(rho, povm, tol);
    report.body["result"] = measure_result_json("c_max_povm", cmax, false);
    report.body["povm_incoherent"] = is_povm_incoherent(rho, povm, tol);
    CostInterval interval = one_shot_cost_povm(rho, povm, SmoothingBall(epsilon), tol);
    report.body["one_shot_interval"] = {{"lower", interval.lower},
                                        {"upper", interval.upper},
                                        {"bound_type",
                                         interval.upper_bound_flag ? "upper" : "exact"}};
    report.check_ge("interval_lower", interval.lower, -tol);
    report.check_le("interval_width_error", std::abs(interval.upper - interval.lower - 1.0),
                    2.0 * tol);
    return report.finish(out, t0);
}

int cmd_verify_theorems(int theorem, const std::string& dims, int trials, double epsilon,
                        double tol, std::uint64_t seed, const std::string& out) {
    auto t0 = std::chrono::steady_clock::now();
    Report report("verify-theorems " + std::to_string(theorem), seed, epsilon, tol);
    auto [dim_lo, dim_hi] = parse_dim_range(dims);
    if (dim_lo < 2 || dim_hi < dim_lo) throw ParseError("bad --dims range");
    SmoothingBall ball(epsilon);

    if (theorem == 1) {
        for (int dim = dim_lo; dim <= dim_hi; ++dim) {
            Rng rng(seed + static_cast<std::uint64_t>(dim) * 1009);
            double worst_left = -1e300;
            double worst_right = -1e300;
            for (int trial = 0; trial < trials; ++trial) {
                int blocks = rng.uniform_int(2, dim);
                ProjectiveMeasurement p = ProjectiveMeasurement::from_partition(
                    random_partition(rng, dim, blocks));
                PureState psi = random_pure_state(rng, dim);
                double cost = c_0_smoothed(psi, p, ball).value;  // C^eps_MBI via equality
                double cmax = c_max_smoothed(psi.projector(), p, ball, tol).value;
                worst_left = std::max(worst_left, cmax - cost);
                worst_right = std::max(worst_right, cost - cmax - 1.0);
            }
            std::string prefix = "thm1/dim=" + std::to_string(dim);
            report.check_le(prefix + "/lower_violation", worst_left, 1e-9);
            report.check_le(prefix + "/upper_violation", worst_right, 2e-3);
        }
    } else if (theorem == 2) {
        for (int dim = dim_lo; dim <= dim_hi; ++dim) {
            Rng rng(seed + static_cast<std::uint64_t>(dim) * 1013);
            double worst = 0.0;
            for (int trial = 0; trial < trials; ++trial) {
                int blocks = rng.uniform_int(2, std::min(dim, 12));
                ProjectiveMeasurement p = ProjectiveMeasurement::from_partition(
                    random_partition(rng, dim, blocks));
                PureState psi = random_pure_state(rng, dim);
                double cost = one_shot_cost_mbi(psi, p, ball).value;
                double smoothed = c_0_smoothed(psi, p, ball).value;
                double oracle =
                    std::log2(smoothing_oracle_subsets(block_weights(psi, p), epsilon));
                worst = std::max({worst, std::abs(cost - smoothed),
                                  std::abs(cost - oracle)});
            }
            report.check_le("thm2/dim=" + std::to_string(dim) + "/max_deviation", worst, 1e-12);
        }
    } else if (theorem == 3) {
        const std::vector<std::pair<int, Eigen::Index>> shapes = {{2, 2}, {3, 2}, {2, 3}};
        Rng rng(seed);
        double worst_width = 0.0;
        double worst_lower = 0.0;
        double worst_containment = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            auto [n, d] = shapes[static_cast<std::size_t>(trial) % shapes.size()];
            bool projective = (trial % 3 == 2) && n <= d;
            Povm povm = projective ? random_projective_povm(rng, d, n)
                                   : random_povm(rng, d, n);
            PureState psi = random_pure_state(rng, d);
            CostInterval interval =
                one_shot_cost_povm(psi.projector(), povm, ball, tol);
            worst_width = std::max(worst_width,
                                   std::abs(interval.upper - interval.lower - 1.0));
            worst_lower = std::max(worst_lower, -interval.lower);
            if (projective) {
                std::vector<HermitianOperator> projectors;
                for (const auto& e : povm.elements()) projectors.push_back(e);
                ProjectiveMeasurement base(std::move(projectors));
                double base_cost = one_shot_cost_mbi(psi, base, ball).value;
                worst_containment =
                    std::max({worst_containment, interval.lower - base_cost,
                              base_cost - interval.upper});
            }
        }
        report.check_le("thm3/max_width_error", worst_width, 2.0 * tol);
        report.check_le("thm3/max_lower_violation", worst_lower, tol);
        report.check_le("thm3/max_containment_violation", worst_containment, 2.0 * tol);
    } else {
        throw ParseError("--theorem must be 1, 2 or 3");
    }
    return report.finish(out, t0);
}

int cmd_gen(const std::string& kind, int dim, std::uint64_t seed, int blocks, int outcomes,
            bool mixed, const std::string& out) {
    auto t0 = std::chrono::steady_clock::now();
    Report report("gen " + kind, seed, 0.0, 0.0);
    if (dim < 2 || dim > 16) throw ParseError("gen: dim must lie in [2, 16]");
    Rng rng(seed);
    json payload;
    if (kind == "state") {
        if (mixed) payload = state_to_json(random_density(rng, dim));
        else payload = state_to_json(random_pure_state(rng, dim));
    } else if (kind == "block-structure") {
        int n = (blocks > 0) ? blocks : rng.uniform_int(2, dim);
        BlockPartition partition = random_partition(rng, dim, n);
        payload["dim"] = dim;
        json arr = json::array();
        for (const auto& block : partition.blocks()) {
            json b = json::array();
            for (int idx : block) b.push_back(idx + 1);
            arr.push_back(std::move(b));
        }
        payload["blocks"] = std::move(arr);
    } else if (kind == "povm") {
        int n = (outcomes > 0) ? outcomes : rng.uniform_int(2, 4);
        payload = povm_to_json(random_povm(rng, dim, n));
    } else if (kind == "target") {
        payload = target_to_json(random_dilution_target(rng, dim));
    } else {
        throw ParseError("gen: unknown kind " + kind);
    }
    report.body["instance"] = payload;
    if (!out.empty()) write_json_file(out, payload);
    report.body["pass"] = true;
    auto elapsed = std::chrono::steady_clock::now() - t0;
    report.body["wall_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    std::cout << report.body.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"block-coherence and POVM-coherence toolkit"};
    app.require_subcommand(1);

    std::string state_path, measurement_path, sigma_path, povm_path, target_path,
        protocol_path, out_path, which, kind, dims = "2..6";
    double epsilon = 0.0, tol = 1e-6;
    std::uint64_t seed = 42;
    int theorem = 1, trials = 50, dim = 4, blocks = 0, outcomes = 0;
    bool mixed = false, with_certificate = false;

    auto* measure = app.add_subcommand("measure", "evaluate a coherence measure");
    measure->add_option("which", which, "c_max | c_0 | one_shot_mbi | d_max | coherent_rank")
        ->required();
    measure->add_option("--state", state_path)->required();
    measure->add_option("--blocks,--measurement", measurement_path);
    measure->add_option("--sigma", sigma_path);
    measure->add_option("--epsilon", epsilon);
    measure->add_option("--tol", tol);
    measure->add_option("--seed", seed);
    measure->add_option("--out", out_path);
    measure->add_flag("--certificate", with_certificate);

    auto* dilute = app.add_subcommand("dilute", "synthesise a dilution protocol");
    dilute->add_option("--target", target_path)->required();
    dilute->add_option("--tol", tol);
    dilute->add_option("--seed", seed);
    dilute->add_option("--out", out_path);

    auto* verify_dilution_cmd =
        app.add_subcommand("verify-dilution", "verify a stored protocol");
    verify_dilution_cmd->add_option("--protocol", protocol_path)->required();
    verify_dilution_cmd->add_option("--target", target_path)->required();
    verify_dilution_cmd->add_option("--seed", seed);
    verify_dilution_cmd->add_option("--out", out_path);

    auto* naimark = app.add_subcommand("naimark", "build a canonical Naimark extension");
    naimark->add_option("--povm", povm_path)->required();
    naimark->add_option("--state", state_path);
    naimark->add_option("--seed", seed);
    naimark->add_option("--out", out_path);

    auto* povm_coherence =
        app.add_subcommand("povm-coherence", "POVM-based coherence and cost interval");
    povm_coherence->add_option("--state", state_path)->required();
    povm_coherence->add_option("--povm", povm_path)->required();
    povm_coherence->add_option("--epsilon", epsilon);
    povm_coherence->add_option("--tol", tol);
    povm_coherence->add_option("--seed", seed);
    povm_coherence->add_option("--out", out_path);

    auto* verify_theorems =
        app.add_subcommand("verify-theorems", "run a theorem-verification ensemble");
    verify_theorems->add_option("--theorem", theorem)->required();
    verify_theorems->add_option("--dims", dims);
    verify_theorems->add_option("--trials", trials);
    verify_theorems->add_option("--epsilon", epsilon);
    verify_theorems->add_option("--tol", tol);
    verify_theorems->add_option("--seed", seed);
    verify_theorems->add_option("--out", out_path);

    auto* gen = app.add_subcommand("gen", "generate a random instance file");
    gen->add_option("--kind", kind, "state | block-structure | povm | target")->required();
    gen->add_option("--dim", dim);
    gen->add_option("--seed", seed);
    gen->add_option("--blocks", blocks);
    gen->add_option("--outcomes", outcomes);
    gen->add_flag("--mixed", mixed);
    gen->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (measure->parsed())
            return cmd_measure(which, state_path, measurement_path, sigma_path, epsilon, tol,
                               seed, out_path, with_certificate);
        if (dilute->parsed()) return cmd_dilute(target_path, tol, seed, out_path);
        if (verify_dilution_cmd->parsed())
            return cmd_verify_dilution(protocol_path, target_path, seed, out_path);
        if (naimark->parsed()) return cmd_naimark(povm_path, state_path, seed, out_path);
        if (povm_coherence->parsed())
            return cmd_povm_coherence(state_path, povm_path, epsilon, tol, seed, out_path);
        if (verify_theorems->parsed())
            return cmd_verify_theorems(theorem, dims, trials, epsilon, tol, seed, out_path);
        if (gen->parsed())
            return cmd_gen(kind, dim, seed, blocks, outcomes, mixed, out_path);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        json body = {{"schema", 1},
                     {"error", e.what()},
                     {"best_bounds", {{"lower", e.lower}, {"upper", e.upper}}},
                     {"pass", false}};
        std::cout << body.dump(2) << "\n";
        if (!out_path.empty()) write_json_file(out_path, body);
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
