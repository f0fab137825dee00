#include <optional>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcoh/channels.hpp"
#include "qcoh/coherence.hpp"
#include "qcoh/dilation.hpp"
#include "qcoh/instruments.hpp"
#include "qcoh/verify.hpp"

namespace py = pybind11;
using namespace qcoh;

namespace {

using Kraus = std::vector<ComplexMatrix>;
using OptBasis = std::optional<ComplexMatrix>;

ComplexMatrix basis_or_default(const OptBasis& basis, int dim) {
  return basis ? *basis : computational_basis(dim);
}

py::dict measure(const ComplexMatrix& state, const ComplexMatrix& observable, bool optimal) {
  const DensityMatrix rho(state);
  const Observable r = spectral_decompose(observable);
  const FineGraining fg = optimal ? optimal_fine_grain(r, rho) : FineGraining::of(r);
  py::dict out;
  out["eigenvalues"] = r.eigenvalues();
  out["probabilities"] = born_probabilities(rho, r);
  out["luders"] = luders(rho, r).matrix();
  out["c_l1"] = c_l1_coarse(rho, r, fg);
  out["c_l1_fine"] = c_l1(rho, fg.basis());
  out["c_re"] = c_re_coarse(rho, r);
  out["c_re_fine"] = c_re(rho, fg.basis());
  out["hierarchy_gap"] = hierarchy_gap(rho, r, fg);
  return out;
}

py::dict dilate_channel(const Kraus& ops, const OptBasis& basis) {
  const KrausChannel ch(ops);
  const DilationModel m = dilate(ch, basis_or_default(basis, ch.dim()));
  py::dict out;
  out["system_dim"] = m.system_dim;
  out["ancilla_dim"] = m.ancilla_dim;
  out["apparatus_init"] = m.apparatus_init;
  out["joint_unitary"] = m.joint_unitary;
  out["readout"] = m.readout;
  out["kraus"] = extract_kraus(m).kraus_ops();
  return out;
}

py::dict discord(const ComplexMatrix& state, int dim_a, int dim_b, const ComplexMatrix& observable_b) {
  const BipartiteState rho(dim_a, dim_b, DensityMatrix(state));
  const Observable r = spectral_decompose(observable_b);
  const ClassicalCorrelationTerms terms = classical_correlation_terms(rho, r);
  py::dict out;
  out["mutual_information"] = mutual_information(rho);
  out["discord"] = luders_discord(rho, r);
  out["classical_correlation"] = terms.total();
  out["holevo_term"] = terms.holevo;
  out["branch_correlation_term"] = terms.residual;
  out["qi_coherence"] = qi_coherence(rho, r);
  out["local_coherence"] = c_re_coarse(rho.reduced_b(), r);
  return out;
}

py::tuple run_verify(std::uint64_t seed, int trials, int dim_max, bool corrupt) {
  verify::Options opt;
  opt.seed = seed;
  opt.trials = trials;
  opt.dim_max = dim_max;
  opt.corrupt = corrupt;
  const verify::Report report = verify::run(opt);
  return py::make_tuple(report.passed(), verify::format_text(report));
}

}  // namespace

PYBIND11_MODULE(_qcoh, m) {
  m.doc() = "Coherence, discord and incoherent-channel toolkit";
  py::register_exception<Error>(m, "QcohError", PyExc_ValueError);

  m.def("c_l1", [](const ComplexMatrix& rho, const OptBasis& basis) {
        return c_l1(DensityMatrix(rho), basis_or_default(basis, static_cast<int>(rho.rows())));
      }, py::arg("rho"), py::arg("basis") = py::none());
  m.def("c_re", [](const ComplexMatrix& rho, const OptBasis& basis) {
        return c_re(DensityMatrix(rho), basis_or_default(basis, static_cast<int>(rho.rows())));
      }, py::arg("rho"), py::arg("basis") = py::none());
  m.def("von_neumann_entropy", [](const ComplexMatrix& rho) { return von_neumann_entropy(DensityMatrix(rho)); });
  m.def("luders", [](const ComplexMatrix& rho, const ComplexMatrix& observable) {
        return luders(DensityMatrix(rho), spectral_decompose(observable)).matrix();
      });
  m.def("measure", &measure, py::arg("rho"), py::arg("observable"), py::arg("optimal") = false);

  m.def("apply", [](const Kraus& ops, const ComplexMatrix& rho) {
        return apply(KrausChannel(ops), DensityMatrix(rho)).matrix();
      });
  m.def("iterate", [](const Kraus& ops, const ComplexMatrix& rho, int steps) {
        return iterate(KrausChannel(ops), DensityMatrix(rho), steps).matrix();
      });
  m.def("classify", [](const Kraus& ops, const OptBasis& basis) {
        const KrausChannel ch(ops);
        return std::string(to_string(classify(ch, basis_or_default(basis, ch.dim()))));
      }, py::arg("kraus"), py::arg("basis") = py::none());
  m.def("correlation_matrix", [](const Kraus& ops) { return correlation_matrix_of(KrausChannel(ops)).entries; });
  m.def("gio_from_correlation", [](const ComplexMatrix& c) { return gio_from_correlation(c).kraus_ops(); });
  m.def("commutant", [](const Kraus& ops) { return commutant(KrausChannel(ops)); });
  m.def("dilate", &dilate_channel, py::arg("kraus"), py::arg("basis") = py::none());

  m.def("discord", &discord, py::arg("rho"), py::arg("dim_a"), py::arg("dim_b"), py::arg("observable_b"));
  m.def("povm_coherence", [](const ComplexMatrix& rho, const Kraus& effects, bool modified) {
        const DensityMatrix state(rho);
        const Povm povm(effects);
        return modified ? povm_coherence_modified(state, povm) : povm_coherence(state, povm);
      }, py::arg("rho"), py::arg("effects"), py::arg("modified") = false);

  m.def("phase_damping", [](double p) { return phase_damping(p).kraus_ops(); });
  m.def("bit_flip", [](double p) { return bit_flip(p).kraus_ops(); });
  m.def("amplitude_damping", [](double g) { return amplitude_damping(g).kraus_ops(); });

  m.def("verify", &run_verify, py::arg("seed") = 1, py::arg("trials") = 0, py::arg("dim_max") = 8,
        py::arg("corrupt") = false);
}
