#include "stabtrace/fixtures.hpp"

#include <mutex>
#include <sstream>

#include "stabtrace/shadow.hpp"
#include "stabtrace/tubing.hpp"

namespace stabtrace {

BandedLink builtin_k() {
  BandedLink k;
  k.diagram.n_edges = 2;
  k.diagram.loop_edges = {0, 1};  // 0: the boundary unknot, 1: the minimum
  k.comp_flags = {'L', 'U'};
  k.maxima = 2;

  Band b1;  // joins the minimum circle to the boundary strand
  b1.id = 1;
  b1.end0 = {1, 0.50, 'r'};
  b1.end1 = {0, 0.52, 'r'};
  b1.core = {{'e', 0, 0.80, true, 'r'}, {'e', 0, 0.90, true, 'l'}};

  Band b2;  // the cap band, hanging off the far side of the strand
  b2.id = 2;
  b2.end0 = {0, 0.05, 'r'};
  b2.end1 = {0, 0.20, 'r'};

  Band b3;  // the tube bridge
  b3.id = 3;
  b3.end0 = {0, 0.40, 'l'};
  b3.end1 = {0, 0.50, 'l'};

  Band b4;  // the tube threader: under the bridge, tail caught in b1's arch
  b4.id = 4;
  b4.end0 = {0, 0.45, 'l'};
  b4.end1 = {0, 0.85, 'l'};
  b4.core = {{'b', 3, 0.5, false, 'r'}, {'b', 1, 0.45, true, 'l'}};

  k.bands = {b1, b2, b3, b4};
  return k;
}

BandedLink builtin_k_prime() {
  // the other orientation of the double-tube cut: every crossing record
  // flips, and the threader carries the trace of the half twist, a
  // cancelling pair that one band swim removes
  BandedLink kp = mirror_banded(builtin_k());
  for (auto& band : kp.bands) {
    if (band.id != 4) continue;
    band.core.insert(band.core.begin() + 1, {'e', 0, 0.58, false, 'r'});
    band.core.insert(band.core.begin() + 1, {'e', 0, 0.55, false, 'l'});
  }
  return kp;
}

std::vector<BandMove> k_simplification_moves() {
  const char* text =
      "slide 4.1-\n"   // free the threader's tail from the arch
      "slide 4.1-\n"   // bring it home across the minimum's band
      "swim 1@0\n"     // push the minimum's band off the boundary strand
      "slide 1.1-\n"   // shift that band clear (slide plus isotopy)
      "cancelmin 1 1\n"
      "slide 4.1+\n"   // carry the loose end around the far side
      "slide 4.1+\n"   // and past the cap band into place
      "destab 3 4\n"
      "cancelmax 2\n";
  return parse_bmv(text);
}

std::vector<BandMove> k_prime_simplification_moves() {
  std::vector<BandMove> out = parse_bmv(
      "swim 4@1\n"  // remove the half-twist trace
      "iso mirror-normal-form\n");
  for (const BandMove& m : k_simplification_moves())
    out.push_back(mirror_move(m));
  return out;
}

namespace {

void check_run(const char* name, const BandedLink& start,
               const std::vector<BandMove>& moves, std::ostringstream& report,
               const std::vector<int>& expected_genus_profile) {
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::script_failed, std::string(name) + ": " + msg);
  };
  RunResult run;
  try {
    run = run_script(start, moves);
  } catch (const Error& e) {
    fail(e.what());
  }
  if (run.destab_count != 1)
    fail("expected exactly one destabilisation, saw " +
         std::to_string(run.destab_count));
  std::vector<int> profile;
  for (const auto& st : run.per_step) profile.push_back(st.genus);
  if (!expected_genus_profile.empty() && profile != expected_genus_profile) {
    std::string got;
    for (int g : profile) got += std::to_string(g) + ",";
    fail("genus profile mismatch: " + got);
  }
  int max_genus = 0;
  for (int g : profile) max_genus = std::max(max_genus, g);
  if (max_genus != 1) fail("max intermediate genus is not 1");
  const BandedLink& fin = run.final;
  if (!fin.bands.empty()) fail("bands remain after the script");
  auto st = stats(fin);
  if (st.minima != 0 || st.saddles != 0 || st.maxima != 1)
    fail("final surface is not a single cap over the boundary");
  if (fin.diagram.crossing_count() != 0 ||
      link_components(fin.diagram).count != 1)
    fail("final boundary is not a single crossingless circle");
  auto rep = validate_banded(fin, 12);
  if (!rep.ok()) fail("final presentation fails validation");
  report << name << ": destabilisations=1 final=unknot-disc max_genus=1"
         << " steps=" << moves.size() << "\n";
  report << name << " profile=";
  for (size_t i = 0; i < profile.size(); ++i)
    report << (i ? "," : "") << profile[i];
  report << "\n";
}

}  // namespace

LemmaCertificate verify_k_lemma() {
  std::ostringstream report;
  BandedLink k = builtin_k();
  {
    auto rep = validate_banded(k, 12);
    if (!rep.ok())
      throw Error(ErrorKind::script_failed,
                  "builtin K fails validation: " + rep.to_string());
    report << "K: " << rep.resolved_components
           << " circles after surgery, unlink verified\n";
  }
  BandedLink kp = builtin_k_prime();
  {
    auto rep = validate_banded(kp, 12);
    if (!rep.ok())
      throw Error(ErrorKind::script_failed,
                  "builtin K' fails validation: " + rep.to_string());
    report << "K': " << rep.resolved_components
           << " circles after surgery, unlink verified\n";
  }
  check_run("K", k, k_simplification_moves(), report,
            {1, 1, 1, 1, 1, 1, 1, 0, 0});
  check_run("K'", kp, k_prime_simplification_moves(), report,
            {1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0});

  LemmaCertificate cert;
  cert.ok = true;
  cert.report = report.str();
  cert.digest = fnv1a(cert.report);
  return cert;
}

uint64_t case2_license_digest() {
  static std::once_flag flag;
  static uint64_t digest = 0;
  std::call_once(flag, [] { digest = verify_k_lemma().digest; });
  return digest;
}

}  // namespace stabtrace
