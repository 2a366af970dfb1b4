#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blockcoh/block.hpp"
#include "blockcoh/dilution.hpp"
#include "blockcoh/matrix.hpp"
#include "blockcoh/measures.hpp"
#include "blockcoh/naimark.hpp"
#include "blockcoh/random.hpp"

namespace py = pybind11;
using namespace blockcoh;

namespace {

ProjectiveMeasurement measurement_from_blocks(Eigen::Index dim,
                                              const std::vector<std::vector<int>>& blocks) {
    return ProjectiveMeasurement::from_partition(BlockPartition(dim, blocks));
}

}  // namespace

PYBIND11_MODULE(_blockcoh, m) {
    m.doc() = "block-coherence measures, dilution synthesis and Naimark extensions";

    py::register_exception<Error>(m, "BlockcohError");

    py::class_<DensityOperator>(m, "DensityOperator")
        .def(py::init<Matrix>())
        .def_property_readonly("matrix", &DensityOperator::matrix)
        .def_property_readonly("dim", &DensityOperator::dim);

    py::class_<PureState>(m, "PureState")
        .def(py::init<Vector>())
        .def_property_readonly("amplitudes", &PureState::amplitudes)
        .def("projector", &PureState::projector);

    py::class_<ProjectiveMeasurement>(m, "ProjectiveMeasurement")
        .def(py::init(&measurement_from_blocks), py::arg("dim"), py::arg("blocks"))
        .def(py::init([](const std::vector<Matrix>& projectors) {
                 std::vector<HermitianOperator> ops;
                 for (const Matrix& p : projectors) ops.emplace_back(p);
                 return ProjectiveMeasurement(std::move(ops));
             }),
             py::arg("projectors"))
        .def_property_readonly("dim", &ProjectiveMeasurement::dim)
        .def_property_readonly("size", &ProjectiveMeasurement::size)
        .def("projector",
             [](const ProjectiveMeasurement& p, int k) { return p.projector(k).matrix(); });

    py::class_<KrausChannel>(m, "KrausChannel")
        .def(py::init([](Eigen::Index dim, std::vector<Matrix> operators) {
                 return KrausChannel{dim, std::move(operators), std::nullopt};
             }),
             py::arg("dim"), py::arg("operators"))
        .def_readonly("dim", &KrausChannel::dim)
        .def_readonly("operators", &KrausChannel::operators);

    py::class_<MeasureResult>(m, "MeasureResult")
        .def_readonly("value", &MeasureResult::value)
        .def_readonly("gap", &MeasureResult::gap)
        .def_property_readonly("bound_type", &MeasureResult::bound_type)
        .def_property_readonly("certificate",
                               [](const MeasureResult& r) -> py::object {
                                   if (!r.certificate) return py::none();
                                   return py::cast(r.certificate->matrix());
                               });

    m.def("fidelity", &fidelity);
    m.def("matrix_sqrt",
          [](const Matrix& h) { return matrix_sqrt(HermitianOperator(h)).matrix(); });
    m.def("eig_hermitian", [](const Matrix& h) {
        EigResult r = eig_hermitian(HermitianOperator(h));
        return py::make_tuple(r.eigenvalues, r.eigenvectors);
    });
    m.def("kron", &kron);
    m.def("direct_sum", &direct_sum);

    m.def("block_dephase", &block_dephase);
    m.def("is_block_incoherent", &is_block_incoherent, py::arg("rho"), py::arg("measurement"),
          py::arg("tol") = 1e-9);
    m.def("maximally_block_coherent", &maximally_block_coherent);
    m.def("apply_channel", &apply_channel);
    m.def("make_block_incoherent_kraus", &make_block_incoherent_kraus);

    m.def("d_max", &d_max);
    m.def(
        "c_max_block",
        [](const DensityOperator& rho, const ProjectiveMeasurement& p, double tol) {
            return c_max_block(rho, p, tol);
        },
        py::arg("rho"), py::arg("measurement"), py::arg("tol") = 1e-6);
    m.def(
        "c_max_smoothed",
        [](const DensityOperator& rho, const ProjectiveMeasurement& p, double epsilon,
           double tol) { return c_max_smoothed(rho, p, SmoothingBall(epsilon), tol); },
        py::arg("rho"), py::arg("measurement"), py::arg("epsilon"), py::arg("tol") = 1e-6);
    m.def("coherent_rank", &coherent_rank);
    m.def("c_0_block",
          [](const PureState& psi, const ProjectiveMeasurement& p) { return c_0_block(psi, p); });
    m.def(
        "c_0_mixed",
        [](const DensityOperator& rho, const ProjectiveMeasurement& p, std::uint64_t seed) {
            return c_0_block(rho, p, seed);
        },
        py::arg("rho"), py::arg("measurement"), py::arg("seed") = 42);
    m.def(
        "c_0_smoothed",
        [](const PureState& psi, const ProjectiveMeasurement& p, double epsilon) {
            return c_0_smoothed(psi, p, SmoothingBall(epsilon));
        },
        py::arg("psi"), py::arg("measurement"), py::arg("epsilon"));
    m.def(
        "one_shot_cost_mbi",
        [](const PureState& psi, const ProjectiveMeasurement& p, double epsilon) {
            return one_shot_cost_mbi(psi, p, SmoothingBall(epsilon));
        },
        py::arg("psi"), py::arg("measurement"), py::arg("epsilon"));

    py::class_<DilutionTarget>(m, "DilutionTarget")
        .def(py::init<RealVector>())
        .def_property_readonly("coefficients", &DilutionTarget::coefficients)
        .def_property_readonly("dim", &DilutionTarget::dim);

    py::class_<DilutionProtocol>(m, "DilutionProtocol")
        .def_readonly("dim", &DilutionProtocol::dim)
        .def_readonly("permutations", &DilutionProtocol::permutations)
        .def_readonly("probabilities", &DilutionProtocol::probabilities)
        .def_readonly("c_matrix", &DilutionProtocol::c_matrix)
        .def_property_readonly("kraus_operators", [](const DilutionProtocol& p) {
            return p.kraus.operators;
        });

    py::class_<DilutionReport>(m, "DilutionReport")
        .def_readonly("normalization_residual", &DilutionReport::normalization_residual)
        .def_readonly("output_fidelity", &DilutionReport::output_fidelity)
        .def_readonly("probability_sum_residual", &DilutionReport::probability_sum_residual)
        .def_readonly("selective_outcome_residual",
                      &DilutionReport::selective_outcome_residual)
        .def_readonly("passed", &DilutionReport::pass);

    m.def("majorizes", &majorizes);
    m.def("permutation_set", &permutation_set);
    m.def("dilution_probabilities", &dilution_probabilities);
    m.def("build_c_matrix", &build_c_matrix);
    m.def("synthesize_dilution", &synthesize_dilution);
    m.def("verify_dilution", &verify_dilution);

    py::class_<Povm>(m, "Povm")
        .def(py::init([](const std::vector<Matrix>& elements) {
                 std::vector<HermitianOperator> ops;
                 for (const Matrix& e : elements) ops.emplace_back(e);
                 return Povm(std::move(ops));
             }),
             py::arg("elements"))
        .def_property_readonly("dim", &Povm::dim)
        .def_property_readonly("outcomes", &Povm::outcomes)
        .def("element", [](const Povm& e, int i) { return e.element(i).matrix(); });

    py::class_<NaimarkExtension>(m, "NaimarkExtension")
        .def_readonly("outcomes", &NaimarkExtension::outcomes)
        .def_readonly("base_dim", &NaimarkExtension::base_dim)
        .def_readonly("V", &NaimarkExtension::V)
        .def_property_readonly("projectors", [](const NaimarkExtension& ext) {
            std::vector<Matrix> out;
            for (const auto& p : ext.projectors.projectors()) out.push_back(p.matrix());
            return out;
        });

    py::class_<CostInterval>(m, "CostInterval")
        .def_readonly("lower", &CostInterval::lower)
        .def_readonly("upper", &CostInterval::upper)
        .def_readonly("upper_bound_flag", &CostInterval::upper_bound_flag);

    m.def(
        "build_naimark_extension",
        [](const Povm& e, std::uint64_t seed) {
            return build_naimark_extension(canonical_measurement_ops(e), seed);
        },
        py::arg("povm"), py::arg("completion_seed") = 7);
    m.def("embed_tensor", &embed_tensor);
    m.def("embed_direct_sum", &embed_direct_sum);
    m.def("embedded_state", &embedded_state);
    m.def("is_povm_incoherent",
          [](const DensityOperator& rho, const Povm& e, double tol) {
              return is_povm_incoherent(rho, e, tol);
          },
          py::arg("rho"), py::arg("povm"), py::arg("tol") = 1e-9);
    m.def(
        "c_max_povm",
        [](const DensityOperator& rho, const Povm& e, double tol) {
            return c_max_povm(rho, e, tol);
        },
        py::arg("rho"), py::arg("povm"), py::arg("tol") = 1e-6);
    m.def(
        "one_shot_cost_povm",
        [](const DensityOperator& rho, const Povm& e, double epsilon, double tol) {
            return one_shot_cost_povm(rho, e, SmoothingBall(epsilon), tol);
        },
        py::arg("rho"), py::arg("povm"), py::arg("epsilon"), py::arg("tol") = 1e-6);

    m.def(
        "random_pure_state",
        [](Eigen::Index dim, std::uint64_t seed) {
            Rng rng(seed);
            return random_pure_state(rng, dim);
        },
        py::arg("dim"), py::arg("seed") = 42);
    m.def(
        "random_density",
        [](Eigen::Index dim, std::uint64_t seed) {
            Rng rng(seed);
            return random_density(rng, dim);
        },
        py::arg("dim"), py::arg("seed") = 42);
    m.def(
        "random_povm",
        [](Eigen::Index dim, int outcomes, std::uint64_t seed) {
            Rng rng(seed);
            return random_povm(rng, dim, outcomes);
        },
        py::arg("dim"), py::arg("outcomes"), py::arg("seed") = 42);
}
