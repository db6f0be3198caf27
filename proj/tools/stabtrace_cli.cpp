#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stabtrace/banded.hpp"
#include "stabtrace/fixtures.hpp"
#include "stabtrace/shadow.hpp"
#include "stabtrace/tubing.hpp"

namespace {

using namespace stabtrace;

// exit codes: 0 success, 1 parse/validation error, 2 bound violation or
// lemma failure, 3 unknown unlink status

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io_error, "cannot write " + path);
  out << text;
}

std::string extension(const std::string& path) {
  auto dot = path.rfind('.');
  return dot == std::string::npos ? "" : path.substr(dot);
}

std::string stats_line(const SurfaceStats& st) {
  std::ostringstream out;
  out << "min=" << st.minima << " saddle=" << st.saddles
      << " max=" << st.maxima << " chi=" << st.chi
      << " boundary=" << st.boundary << " genus=" << st.genus;
  return out.str();
}

int run_shadow(const std::string& script_path, const std::string& out_path,
               bool check_bound) {
  HomotopyScript script = parse_script(slurp(script_path));
  Certificate cert;
  try {
    cert = compile_shadow(script);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::bound_violated) {
      std::cout << "bound violated: " << e.what() << "\n";
      return 2;
    }
    throw;
  }
  std::string trace = render_trace(cert);
  if (!out_path.empty()) spill(out_path, trace);
  std::cout << "events=" << cert.trace.size()
            << " max_genus=" << cert.max_genus << " bound=" << cert.bound
            << " ok=" << (cert.ok ? "true" : "false") << "\n";
  if (!cert.case2_license.empty())
    std::cout << "case2 license: " << cert.case2_license << "\n";
  if (check_bound && !cert.ok) return 2;
  return 0;
}

int run_band(const std::string& diagram_path, const std::string& moves_path,
             const std::string& out_path) {
  BandedLink b = parse_bld(slurp(diagram_path));
  std::vector<BandMove> moves = parse_bmv(slurp(moves_path));
  RunResult res = run_script(b, moves);
  for (size_t i = 0; i < res.per_step.size(); ++i)
    std::cout << "step " << (i + 1) << ": " << stats_line(res.per_step[i])
              << "\n";
  std::cout << "destabilisations=" << res.destab_count << "\n";
  if (!out_path.empty()) spill(out_path, write_bld(res.final));
  return 0;
}

int run_verify_k() {
  LemmaCertificate cert = verify_k_lemma();
  std::cout << cert.report;
  std::cout << "digest=" << cert.digest << "\n";
  std::cout << (cert.ok ? "lemma verified: both surfaces destabilise to the "
                          "standard disc\n"
                        : "lemma verification failed\n");
  return cert.ok ? 0 : 2;
}

int run_stats(const std::string& diagram_path) {
  BandedLink b = parse_bld(slurp(diagram_path));
  std::cout << stats_line(stats(b)) << "\n";
  return 0;
}

int run_validate(const std::string& path, int budget) {
  std::string ext = extension(path);
  if (ext == ".surf") {
    Surface s = parse_surf(slurp(path));
    auto e = euler_genus(s);
    std::cout << "valid surface: V=" << e.vertices << " E=" << e.edges
              << " chi=" << e.chi << " genus=" << e.genus
              << " boundary=" << e.boundary_faces << "\n";
    return 0;
  }
  if (ext == ".tub") {
    TubingDiagram d = parse_tub(slurp(path));
    ValidationReport rep = validate_diagram(d);
    std::cout << rep.to_string();
    if (!rep.ok()) return 1;
    std::cout << "associated genus " << associated_genus(d) << "\n";
    return 0;
  }
  if (ext == ".htpy") {
    HomotopyScript s = parse_script(slurp(path));
    std::cout << "valid script: genus=" << s.genus << " bound=" << s.bound
              << " events=" << s.events.size() << "\n";
    return 0;
  }
  if (ext == ".bld") {
    BandedLink b = parse_bld(slurp(path));
    BandedReport rep = validate_banded(b, budget);
    std::cout << rep.to_string();
    if (!rep.structurally_ok()) return 1;
    if (rep.unlink.status == UnlinkResult::Status::unknown) return 3;
    if (rep.unlink.status == UnlinkResult::Status::refuted) return 1;
    std::cout << stats_line(stats(b)) << "\n";
    return 0;
  }
  if (ext == ".bmv") {
    auto moves = parse_bmv(slurp(path));
    std::cout << "valid move script: " << moves.size() << " moves\n";
    return 0;
  }
  throw Error(ErrorKind::io_error, "unknown input extension " + ext);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stabtrace: certified stabilisation traces for knotted-surface "
               "homotopy scripts and banded link presentations"};
  app.require_subcommand(1);

  int budget = 12;
  uint64_t seed = 0;
  app.add_option("--budget", budget,
                 "depth budget for bounded unlink verification");
  app.add_option("--seed", seed,
                 "seed for randomized corpora (reserved for test tooling)");

  std::string script_path, out_path;
  bool check_bound = false;
  auto* shadow = app.add_subcommand(
      "shadow", "compile a homotopy script into a certified trace");
  shadow->add_option("--script", script_path, "input .htpy script")
      ->required();
  shadow->add_option("--out", out_path, "output .trace path");
  shadow->add_flag("--check-bound", check_bound,
                   "exit 2 unless the certified bound holds");

  std::string diagram_path, moves_path, band_out;
  auto* band = app.add_subcommand(
      "band", "replay a move script on a banded link presentation");
  band->add_option("--diagram", diagram_path, "input .bld diagram")
      ->required();
  band->add_option("--moves", moves_path, "input .bmv move script")
      ->required();
  band->add_option("--out", band_out, "output .bld path");

  app.add_subcommand("verify-k",
                     "check that both built-in slice surfaces destabilise "
                     "to the standard disc");

  std::string stats_path;
  auto* stats_cmd =
      app.add_subcommand("stats", "surface statistics of a banded link");
  stats_cmd->add_option("--diagram", stats_path, "input .bld diagram")
      ->required();

  std::string validate_path;
  auto* validate_cmd =
      app.add_subcommand("validate", "validate any input file");
  validate_cmd->add_option("path", validate_path, "input file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("shadow"))
      return run_shadow(script_path, out_path, check_bound);
    if (app.got_subcommand("band"))
      return run_band(diagram_path, moves_path, band_out);
    if (app.got_subcommand("verify-k")) return run_verify_k();
    if (app.got_subcommand("stats")) return run_stats(stats_path);
    if (app.got_subcommand("validate"))
      return run_validate(validate_path, budget);
  } catch (const stabtrace::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case stabtrace::ErrorKind::bound_violated:
      case stabtrace::ErrorKind::script_failed:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
