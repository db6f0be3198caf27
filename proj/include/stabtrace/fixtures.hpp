#pragma once

#include <string>

#include "stabtrace/banded.hpp"

namespace stabtrace {

// The two genus-1 slice surfaces of the unknot produced by cutting the
// double tube, as banded link presentations: an unknotted boundary circle,
// one minimum circle, and four bands (one minimum and two saddles, then two
// further saddles and two maxima).
BandedLink builtin_k();
BandedLink builtin_k_prime();

// The nine-move simplification taking builtin_k to the standard disc:
// slide, slide, swim, slide, cancel-min-saddle, slide, slide, destabilise,
// cancel-max-saddle. Exactly one destabilisation; the genus profile is
// 1,1,1,1,1,1,1,0,0.
std::vector<BandMove> k_simplification_moves();

// The variant run: one swim and a relabelling isotopy bring builtin_k_prime
// to the record-mirror of builtin_k, then the mirrored nine moves run.
std::vector<BandMove> k_prime_simplification_moves();

struct LemmaCertificate {
  bool ok = false;
  std::string report;
  uint64_t digest = 0;
};

// Replays both simplification scripts and checks: final presentation is the
// unknot with zero bands and one maximum, exactly one destabilisation per
// script, and maximum intermediate genus 1. Throws script_failed when a
// fixture is mis-transcribed.
LemmaCertificate verify_k_lemma();

}  // namespace stabtrace
