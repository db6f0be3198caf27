#pragma once

#include <map>
#include <vector>

#include "stabtrace/banded.hpp"

namespace stabtrace::detail {

// A band end or a ribbon passage sitting on an edge, ordered by position.
struct Feature {
  double pos;
  bool is_attach;
  int band;
  int end;       // attach: which band end
  int item_idx;  // ribbon crossing: index into the band's core
  bool operator<(const Feature& o) const { return pos < o.pos; }
};

std::map<EdgeId, std::vector<Feature>> edge_features(const BandedLink& b);

double own_param(const Band& b, int k);

// Events along a band's core, framing twists first.
struct BandEvent {
  double pos;
  int kind;        // 0 twist, 1 own item, 2 foreign crossing
  int item_idx;
  int other_band;
  int other_idx;
  bool operator<(const BandEvent& o) const {
    if (pos != o.pos) return pos < o.pos;
    if (kind != o.kind) return kind < o.kind;
    return std::tie(item_idx, other_band, other_idx) <
           std::tie(o.item_idx, o.other_band, o.other_idx);
  }
};

std::vector<BandEvent> band_events(const BandedLink& bl, const Band& b);

}  // namespace stabtrace::detail
