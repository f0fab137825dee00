#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qcoh/coherence.hpp"
#include "qcoh/io.hpp"
#include "qcoh/verify.hpp"

using namespace qcoh;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string entry(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.6f%+.6fi", z.real(), z.imag());
  return buf;
}

void print_matrix(std::ostream& os, const ComplexMatrix& m, const std::string& indent = "  ") {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << indent;
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "  " : "") << entry(m(i, j));
    os << '\n';
  }
}

ComplexMatrix basis_or_default(const std::string& path, int dim) {
  if (path.empty()) return computational_basis(dim);
  return io::basis_from_json(io::read_file(path));
}

// ---------------------------------------------------------------- measure

struct MeasureArgs {
  std::string state, observable, fine_grain;
  bool optimal = false;
  bool json = false;
};

int cmd_measure(const MeasureArgs& a) {
  const DensityMatrix rho = io::state_from_json(io::read_file(a.state));
  const Observable r = io::observable_from_json(io::read_file(a.observable));
  if (r.dim() != rho.dim()) throw Error(ErrorCode::DimMismatch, "state and observable dimensions differ");
  const FineGraining fg = a.optimal                 ? optimal_fine_grain(r, rho)
                          : !a.fine_grain.empty()   ? FineGraining::from_basis(
                                                        r, io::basis_from_json(io::read_file(a.fine_grain)))
                                                    : FineGraining::of(r);
  const RealVector p = born_probabilities(rho, r);
  const DensityMatrix image = luders(rho, r);
  const double l1_coarse = c_l1_coarse(rho, r, fg);
  const double l1_fine = c_l1(rho, fg.basis());
  const double re_coarse = c_re_coarse(rho, r);
  const double re_fine = c_re(rho, fg.basis());
  const double gap = hierarchy_gap(rho, r, fg);

  if (a.json) {
    json j{{"probabilities", p},
           {"eigenvalues", r.eigenvalues()},
           {"luders", io::to_json(image)},
           {"c_l1", l1_coarse},
           {"c_l1_fine", l1_fine},
           {"c_re", re_coarse},
           {"c_re_fine", re_fine},
           {"hierarchy_gap", gap},
           {"fine_graining", a.optimal ? "optimal" : a.fine_grain.empty() ? "eigenbasis" : "file"}};
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "outcomes: " << r.outcomes() << '\n';
  for (int n = 0; n < r.outcomes(); ++n) {
    std::cout << "  r = " << num(r.eigenvalues()[n]) << "  (degeneracy " << r.degeneracies()[n]
              << ")  p = " << num(p[n]) << '\n';
  }
  std::cout << "Lueders image:\n";
  print_matrix(std::cout, image.matrix());
  std::cout << "C_l1(R)         = " << num(l1_coarse) << '\n'
            << "C_l1(fine)      = " << num(l1_fine) << '\n'
            << "C_re(R)         = " << num(re_coarse) << '\n'
            << "C_re(fine)      = " << num(re_fine) << '\n'
            << "hierarchy gap   = " << num(gap) << "  (C_re(fine) - C_re(R))\n";
  return kExitOk;
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
  std::string channel, basis;
  bool json = false;
};

std::string kind_name(IndexMapKind k) { return k == IndexMapKind::Permutation ? "permutation" : "relabeling"; }

int cmd_classify(const ClassifyArgs& a) {
  const KrausChannel ch = io::channel_from_json(io::read_file(a.channel));
  const ComplexMatrix basis = basis_or_default(a.basis, ch.dim());
  const IncoherenceClass cls = classify(ch, basis);
  json j{{"class", std::string(to_string(cls))}, {"dim", ch.dim()}, {"kraus_count", ch.rank()}};
  std::ostringstream text;
  text << "class: " << to_string(cls) << '\n';
  if (cls == IncoherenceClass::GIO) {
    const CorrelationMatrix c = correlation_matrix_of(ch, basis);
    j["correlation"] = io::to_json(c.entries);
    text << "correlation matrix C:\n";
    print_matrix(text, c.entries);
  }
  if (cls != IncoherenceClass::NotIO) {
    json table = json::array();
    text << "factorization K = M(f) K_GIO:\n";
    for (int n = 0; n < ch.rank(); ++n) {
      const KrausFactor f = factor_kraus(ch.kraus_ops()[n], basis);
      text << "  K" << n << ": " << kind_name(f.index_map.kind) << " f = [";
      for (int i = 0; i < f.index_map.dim; ++i) text << (i ? " " : "") << f.index_map.map[i];
      text << "]  diag = [";
      json entries = json::array();
      for (Eigen::Index i = 0; i < f.diagonal.rows(); ++i) {
        text << (i ? " " : "") << entry(f.diagonal(i, i));
        entries.push_back({f.diagonal(i, i).real(), f.diagonal(i, i).imag()});
      }
      text << "]\n";
      table.push_back({{"kind", kind_name(f.index_map.kind)}, {"map", f.index_map.map}, {"diagonal", entries}});
    }
    const double residual = io_completeness_residual(ch, basis);
    const bool complete = io_completeness_check(ch, basis);
    j["factors"] = table;
    j["io_completeness"] = {{"holds", complete}, {"residual", residual}, {"tolerance", kDefaultTol}};
    text << "IO completeness: " << (complete ? "holds" : "fails") << "  (residual " << num(residual)
         << ", tol " << num(kDefaultTol) << ")\n";
  }
  std::cout << (a.json ? j.dump(2) + "\n" : text.str());
  return kExitOk;
}

// ---------------------------------------------------------------- dilate

struct DilateArgs {
  std::string channel, basis, out;
  bool json = false;
};

int cmd_dilate(const DilateArgs& a) {
  const KrausChannel ch = io::channel_from_json(io::read_file(a.channel));
  const ComplexMatrix basis = basis_or_default(a.basis, ch.dim());
  const IncoherenceClass cls = classify(ch, basis);
  const DilationModel m = dilate(ch, basis);
  const double residual = action_distance(extract_kraus(m), ch);
  const double unitarity = isometry_defect(m.joint_unitary);
  if (!a.out.empty()) io::write_file(a.out, io::to_json(m));

  json j{{"class", std::string(to_string(cls))},
         {"system_dim", m.system_dim},
         {"ancilla_dim", m.ancilla_dim},
         {"readout_count", m.readout.cols()},
         {"round_trip_residual", residual},
         {"unitarity_defect", unitarity}};
  std::ostringstream text;
  text << "class: " << to_string(cls) << '\n'
       << "system dim " << m.system_dim << ", apparatus dim " << m.ancilla_dim << ", readout outcomes "
       << m.readout.cols() << '\n'
       << "round-trip residual = " << num(residual) << '\n'
       << "||U^dagger U - I||  = " << num(unitarity) << '\n';
  if (cls == IncoherenceClass::GIO) {
    json blocks = json::array();
    text << "controlled-unitary blocks U_n (apparatus side):\n";
    for (int n = 0; n < m.system_dim; ++n) {
      const ComplexMatrix bra = tensor(ComplexMatrix(basis.col(n).adjoint()),
                                       ComplexMatrix::Identity(m.ancilla_dim, m.ancilla_dim));
      const ComplexMatrix block = bra * m.joint_unitary * bra.adjoint();
      blocks.push_back(io::to_json(block));
      text << "  U_" << n << ":\n";
      print_matrix(text, block, "    ");
    }
    j["controlled_blocks"] = blocks;
  }
  if (!a.out.empty()) text << "model written to " << a.out << '\n';
  std::cout << (a.json ? j.dump(2) + "\n" : text.str());
  return kExitOk;
}

// ---------------------------------------------------------------- evolve

struct EvolveArgs {
  std::string channel, state, basis, out;
  int steps = 10;
};

int cmd_evolve(const EvolveArgs& a) {
  const KrausChannel ch = io::channel_from_json(io::read_file(a.channel));
  DensityMatrix rho = io::state_from_json(io::read_file(a.state));
  const ComplexMatrix basis = basis_or_default(a.basis, ch.dim());
  if (rho.dim() != ch.dim()) throw Error(ErrorCode::DimMismatch, "state and channel dimensions differ");
  if (a.steps < 0) throw Error(ErrorCode::BadParameter, "--steps must be non-negative");
  if (classify(ch, basis) != IncoherenceClass::GIO) {
    throw Error(ErrorCode::NotGIO, "evolve requires a GIO channel");
  }
  std::ostringstream csv;
  csv << "step,max_offdiag,entropy\n";
  char row[128];
  for (int step = 0; step <= a.steps; ++step) {
    if (step > 0) rho = iterate(ch, rho, 1, basis);
    std::snprintf(row, sizeof row, "%d,%.17g,%.17g\n", step, max_offdiagonal(rho.matrix(), basis),
                  von_neumann_entropy(rho));
    csv << row;
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(a.out);
    if (!f) throw Error(ErrorCode::BadParameter, "cannot write " + a.out);
    f << csv.str();
    std::cout << "wrote " << a.steps + 1 << " rows to " << a.out << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- discord

struct DiscordArgs {
  std::string state, observable;
  bool json = false;
};

int cmd_discord(const DiscordArgs& a) {
  const BipartiteState rho = io::bipartite_from_json(io::read_file(a.state));
  const Observable r = io::observable_from_json(io::read_file(a.observable));
  const double mi = mutual_information(rho);
  const double delta = luders_discord(rho, r);
  const ClassicalCorrelationTerms terms = classical_correlation_terms(rho, r);
  const double c_ab = qi_coherence(rho, r);
  const double c_b = c_re_coarse(rho.reduced_b(), r);
  const double id1 = std::abs(delta - (c_ab - c_b));
  const double id2 = std::abs(terms.total() + delta - mi);
  if (a.json) {
    json j{{"mutual_information", mi},
           {"discord", delta},
           {"classical_correlation", terms.total()},
           {"holevo_term", terms.holevo},
           {"branch_correlation_term", terms.residual},
           {"c_ab", c_ab},
           {"c_b", c_b},
           {"identity_residual", id1},
           {"decomposition_residual", id2}};
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "I(A:B)                  = " << num(mi) << '\n'
            << "discord delta           = " << num(delta) << '\n'
            << "classical J             = " << num(terms.total()) << '\n'
            << "  Holevo term           = " << num(terms.holevo) << '\n'
            << "  branch correlations   = " << num(terms.residual) << '\n'
            << "C^{A|B}                 = " << num(c_ab) << '\n'
            << "C(rho_B)                = " << num(c_b) << '\n'
            << "|delta - (C^{A|B} - C(rho_B))| = " << num(id1) << '\n'
            << "|J + delta - I|         = " << num(id2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  verify::Options options;
  bool json = false;
};

int cmd_verify(const VerifyArgs& a) {
  const verify::Report report = verify::run(a.options);
  std::cout << (a.json ? verify::format_json(report) + "\n" : verify::format_text(report));
  return report.passed() ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string kind, out;
  std::uint64_t seed = 1;
  int dim = 2;
  int rank = 0;
  int outcomes = 3;
  double p = 0.75;
  std::vector<int> profile;
  std::vector<int> dims{2, 2};
};

json generate(const GenArgs& a) {
  Rng rng(derive_seed(a.seed, 0));
  const int d = a.dim;
  const int rank = a.rank > 0 ? a.rank : d;
  const std::string& k = a.kind;
  if (k == "state") return io::to_json(random_density(d, rank, rng));
  if (k == "pure") return io::to_json(pure_state(rng.unit_vector(d)));
  if (k == "basis") return io::to_json(random_unitary(d, rng));
  if (k == "observable") {
    return io::to_json(random_observable(d, a.profile.empty() ? std::vector<int>(d, 1) : a.profile, rng));
  }
  if (k == "bipartite") {
    if (a.dims.size() != 2) throw Error(ErrorCode::BadParameter, "--dims takes two values");
    const int total = a.dims[0] * a.dims[1];
    return io::to_json(random_bipartite(a.dims[0], a.dims[1], a.rank > 0 ? a.rank : total, rng));
  }
  if (k == "povm") return io::to_json(random_povm(d, a.outcomes, rng));
  if (k == "gio") return io::to_json(random_gio(d, rank, rng));
  if (k == "sio") return io::to_json(random_sio(d, rank, rng));
  if (k == "io") return io::to_json(random_io(d, rank, rng));
  if (k == "mixture") return io::to_json(random_unitary_mixture(d, rank, rng));
  if (k == "identity") return io::to_json(identity_channel(d));
  if (k == "dephasing") return io::to_json(complete_dephasing(computational_basis(d)));
  if (k == "phase-damping") return io::to_json(phase_damping(a.p));
  if (k == "bit-flip") return io::to_json(bit_flip(a.p));
  if (k == "amplitude-damping") return io::to_json(amplitude_damping(a.p));
  if (k == "relabeling") return io::to_json(relabeling_example());
  throw Error(ErrorCode::BadParameter, "unknown kind " + k);
}

int cmd_gen(const GenArgs& a) {
  const json j = generate(a);
  if (a.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    io::write_file(a.out, j);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcoh: coherence, discord and incoherent-channel toolkit"};
  app.require_subcommand(1);

  MeasureArgs measure;
  auto* m = app.add_subcommand("measure", "Born statistics, Lueders image and coherences of a state");
  m->add_option("state", measure.state, "state file")->required();
  m->add_option("observable", measure.observable, "observable file")->required();
  auto* fg_opt = m->add_option("--fine-grain", measure.fine_grain, "basis file refining the observable");
  m->add_flag("--optimal", measure.optimal, "use the state-dependent optimal fine-graining")->excludes(fg_opt);
  m->add_flag("--json", measure.json, "machine-readable output");

  ClassifyArgs cls;
  auto* c = app.add_subcommand("classify", "GIO/SIO/IO class, correlation matrix and factorization");
  c->add_option("channel", cls.channel, "channel file")->required();
  c->add_option("--basis", cls.basis, "incoherent basis file (default computational)");
  c->add_flag("--json", cls.json, "machine-readable output");

  DilateArgs dil;
  auto* dl = app.add_subcommand("dilate", "system-apparatus model of a GIO, SIO or IO channel");
  dl->add_option("channel", dil.channel, "channel file")->required();
  dl->add_option("--out", dil.out, "where to write the model");
  dl->add_option("--basis", dil.basis, "incoherent basis file (default computational)");
  dl->add_flag("--json", dil.json, "machine-readable output");

  EvolveArgs ev;
  auto* e = app.add_subcommand("evolve", "repeated application of a GIO channel, as CSV");
  e->add_option("channel", ev.channel, "channel file")->required();
  e->add_option("state", ev.state, "state file")->required();
  e->add_option("--steps", ev.steps, "number of applications")->capture_default_str();
  e->add_option("--out", ev.out, "CSV file (default stdout)");
  e->add_option("--basis", ev.basis, "incoherent basis file (default computational)");

  DiscordArgs disc;
  auto* ds = app.add_subcommand("discord", "Lueders discord of a bipartite state measured on B");
  ds->add_option("state", disc.state, "bipartite state file")->required();
  ds->add_option("observable", disc.observable, "observable on B")->required();
  ds->add_flag("--json", disc.json, "machine-readable output");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "run the property suite");
  v->add_option("--seed", ver.options.seed, "64-bit seed")->capture_default_str();
  v->add_option("--trials", ver.options.trials, "instances per property (0 = defaults)")->capture_default_str();
  v->add_option("--dim-max", ver.options.dim_max, "largest random dimension")->capture_default_str();
  v->add_flag("--corrupt", ver.options.corrupt, "flip a sign in the discord identity");
  v->add_flag("--json", ver.json, "machine-readable output");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "write a seeded random or named instance");
  g->add_option("kind", gen.kind,
                "state | pure | basis | observable | bipartite | povm | gio | sio | io | mixture | "
                "identity | dephasing | phase-damping | bit-flip | amplitude-damping | relabeling")
      ->required();
  g->add_option("--seed", gen.seed, "64-bit seed")->capture_default_str();
  g->add_option("--dim", gen.dim, "dimension")->capture_default_str();
  g->add_option("--rank", gen.rank, "state rank or Kraus count (default dim)");
  g->add_option("--outcomes", gen.outcomes, "POVM outcomes")->capture_default_str();
  g->add_option("--p", gen.p, "channel parameter")->capture_default_str();
  g->add_option("--profile", gen.profile, "observable degeneracies, e.g. 2,1")->delimiter(',');
  g->add_option("--dims", gen.dims, "bipartite dimensions dA,dB")->delimiter(',');
  g->add_option("--out", gen.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*m) return cmd_measure(measure);
    if (*c) return cmd_classify(cls);
    if (*dl) return cmd_dilate(dil);
    if (*e) return cmd_evolve(ev);
    if (*ds) return cmd_discord(disc);
    if (*v) return cmd_verify(ver);
    if (*g) return cmd_gen(gen);
  } catch (const Error& err) {
    std::cerr << "error [" << to_string(err.code()) << "]: " << err.what() << '\n';
    return err.code() == ErrorCode::ParseError ? kExitParse : kExitValidation;
  }
  return kExitOk;
}
