// galdual: run verification checks, dump Galois images, and evaluate lattice
// operations from the command line.

#include "CLI11.hpp"

#include "galdual/groupengine.hpp"
#include "galdual/lattice.hpp"
#include "galdual/paramgroups.hpp"
#include "galdual/verifier.hpp"

#include <fstream>
#include <iostream>

using namespace galdual;

namespace {

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string join_ints(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Galois images of a glued abelian surface and its dual"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "run one named check");
  std::string check_id, twist_text, out_path, profile_text = "quick";
  unsigned ell = 0;
  verify->add_option("check-id", check_id, "check identifier")->required();
  verify->add_option("--ell", ell, "prime l");
  verify->add_option("--twist", twist_text, "generic or trivial");
  verify->add_option("--out", out_path, "write the report to a file");
  verify->add_option("--profile", profile_text, "quick or full")->check(CLI::IsMember({"quick", "full"}));

  // verify-all
  auto* verify_all = app.add_subcommand("verify-all", "run the whole suite");
  unsigned threads = 0;
  verify_all->add_option("--profile", profile_text, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));
  verify_all->add_option("--threads", threads, "worker threads (0: all cores)");
  verify_all->add_option("--out", out_path, "write the report to a file");
  bool no_runtime = false;
  verify_all->add_flag("--no-runtime", no_runtime, "omit runtime_ms lines");
  verify->add_flag("--no-runtime", no_runtime, "omit runtime_ms lines");

  // dump-group
  auto* dump = app.add_subcommand("dump-group", "print an image group, one matrix per line");
  std::string side_text = "A";
  twist_text.clear();
  dump->add_option("--ell", ell, "prime l")->required();
  dump->add_option("--side", side_text, "A or Adual")->check(CLI::IsMember({"A", "Adual"}));
  dump->add_option("--twist", twist_text, "generic or trivial");
  bool generators_only = false;
  dump->add_flag("--generators", generators_only, "print generators only");

  // lattice
  auto* lattice = app.add_subcommand("lattice", "lattice operations");
  lattice->require_subcommand(1);
  std::string matrix_text, polarization_text, isogeny_text, kernel_text;

  auto* transformation = lattice->add_subcommand("transformation", "M_f = N_f^-1");
  transformation->add_option("--ell", ell)->required();
  transformation->add_option("--matrix", matrix_text, "N_f, rows separated by ';'")->required();

  auto* kernel = lattice->add_subcommand("kernel", "change of basis for a quotient by a kernel");
  kernel->add_option("--kernel", kernel_text, "e.g. 'ell=3 n=1 dim=4 gens=(1,0,1,0)'")->required();

  auto* pullback = lattice->add_subcommand("pullback", "N_f^T N_lambda N_f");
  pullback->add_option("--ell", ell)->required();
  pullback->add_option("--polarization", polarization_text)->required();
  pullback->add_option("--isogeny", isogeny_text)->required();

  auto* pushforward = lattice->add_subcommand("pushforward", "push a polarization along an isogeny");
  pushforward->add_option("--ell", ell)->required();
  pushforward->add_option("--polarization", polarization_text)->required();
  pushforward->add_option("--isogeny", isogeny_text)->required();
  pushforward->add_option("--kernel", kernel_text)->required();

  auto* type = lattice->add_subcommand("type", "polarization type and Smith valuations");
  type->add_option("--ell", ell)->required();
  type->add_option("--matrix", matrix_text)->required();

  auto* dual = lattice->add_subcommand("dual", "N of the dual isogeny");
  dual->add_option("--ell", ell)->required();
  dual->add_option("--matrix", matrix_text)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      CheckParams params;
      if (ell != 0) params.ell = ell;
      if (!twist_text.empty()) params.twist = parse_twist(twist_text);
      params.profile = parse_profile(profile_text);
      const auto report = run_check(check_id, params);
      emit(render(report, !no_runtime), out_path);
      return report.status == Status::fail ? 1 : 0;
    }
    if (*verify_all) {
      const auto reports = run_all(parse_profile(profile_text), threads);
      emit(render(reports, !no_runtime), out_path);
      return all_passed(reports) ? 0 : 1;
    }
    if (*dump) {
      const Prime l(ell);
      const Twist t = twist_text.empty() ? Twist::generic : parse_twist(twist_text);
      const bool a = parse_side(side_text) == Side::A;
      ImageGroup g = generators_only
                         ? image_generators(l, t, a ? Route::quotient : Route::isogeny)
                         : (a ? image_rho_A(l, t) : image_rho_Adual_isogeny(l, t));
      const auto& list = generators_only ? g.generators : g.elements;
      for (const auto& m : list) std::cout << m.str() << '\n';
      return 0;
    }
    if (transformation->parsed()) {
      std::cout << change_basis_from_transformation(LAdicMatrix::parse(matrix_text, Prime(ell))).str()
                << '\n';
    } else if (kernel->parsed()) {
      std::cout << change_basis_from_kernel(KernelSpec::parse(kernel_text)).str() << '\n';
    } else if (pullback->parsed()) {
      const Prime l(ell);
      std::cout << pullback_polarization(LAdicMatrix::parse(polarization_text, l),
                                         LAdicMatrix::parse(isogeny_text, l))
                       .str()
                << '\n';
    } else if (pushforward->parsed()) {
      const Prime l(ell);
      const auto r = pushforward_polarization(LAdicMatrix::parse(polarization_text, l),
                                              LAdicMatrix::parse(isogeny_text, l),
                                              KernelSpec::parse(kernel_text));
      std::cout << "d=" << r.d << '\n' << r.matrix.str() << '\n';
    } else if (type->parsed()) {
      const auto n = LAdicMatrix::parse(matrix_text, Prime(ell));
      std::vector<std::int64_t> vals;
      for (int v : smith_normal_form(n).valuations) vals.push_back(v);
      std::cout << "smith=" << join_ints(vals) << '\n';
      std::cout << "type=" << join_ints(polarization_type(n)) << '\n';
    } else if (dual->parsed()) {
      std::cout << dual_isogeny_matrix(LAdicMatrix::parse(matrix_text, Prime(ell))).str() << '\n';
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
