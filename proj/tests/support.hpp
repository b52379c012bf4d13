#pragma once

// Shared helpers for the test suites: closing-note site sets and the
// constructive symmetry word that relabels them into I_BE form.

#include <random>
#include <vector>

#include "pptes/states.hpp"

namespace pptes::testing {

// I(gd) = { s | s_c != gd_c for every coordinate }, the relabeled core set.
inline SiteSet avoiding_set(const LatticeShape& shape, const LatticeSite& gd) {
  SiteSet set(shape);
  for (std::int64_t i = 0; i < shape.lattice_size(); ++i) {
    const LatticeSite s = site_from_index(shape, i);
    bool avoids = true;
    for (int c = 0; c < shape.num_coords(); ++c) {
      if (site_coord(shape, s, c) == site_coord(shape, gd, c)) {
        avoids = false;
        break;
      }
    }
    if (avoids) set.insert(i);
  }
  return set;
}

// J(gd, extra) = I(gd) plus one site outside I(gd) u {gd}.
inline SiteSet closing_note_set(const LatticeShape& shape, const LatticeSite& gd,
                                const LatticeSite& extra) {
  SiteSet set = avoiding_set(shape, gd);
  set.insert(site_index(shape, extra));
  return set;
}

// Elementary word sending I(gd) to I_C: per coordinate, swap the avoided value
// with 0. At N = 2 the relabeled extra site has exactly one zero coordinate;
// a final swap moves it onto the alpha axis if needed.
inline std::vector<SymmetryOp> ibe_canonicalizing_word(const LatticeShape& shape,
                                                       const LatticeSite& gd,
                                                       const LatticeSite& extra) {
  std::vector<SymmetryOp> word;
  for (int c = 0; c < shape.num_coords(); ++c) {
    const int v = site_coord(shape, gd, c);
    if (v == 0) continue;
    ValuePermutation vp{c, {0, 1, 2, 3}};
    std::swap(vp.perm[0], vp.perm[v]);
    word.push_back(vp);
  }
  LatticeSite image = extra;
  for (const auto& op : word) image = apply_symmetry(shape, op, image);
  if (shape.num_coords() == 2 && image.beta[0] == 0) {
    word.push_back(CoordinateSwap{0, 1});
  }
  return word;
}

}  // namespace pptes::testing
