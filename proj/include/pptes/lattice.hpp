#pragma once

// Integer-lattice machinery for the 4^N index lattice L = L^(m) x L^(n):
// multi-indices, canonical site enumeration, sign tables, the +2 mod 4
// bijection, coordinate match counting and the elementary lattice symmetries.

#include <array>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pptes {

// A point of L^(k): k digits, each in {0,1,2,3}.
using MultiIndex = std::vector<int>;

inline void validate_multi_index(const MultiIndex& idx, int arity) {
  if (static_cast<int>(idx.size()) != arity) {
    throw std::invalid_argument("multi-index arity mismatch: expected " +
                                std::to_string(arity) + ", got " +
                                std::to_string(idx.size()));
  }
  for (int v : idx) {
    if (v < 0 || v > 3) {
      throw std::invalid_argument("multi-index entry out of {0,1,2,3}: " +
                                  std::to_string(v));
    }
  }
}

inline bool is_zero_index(const MultiIndex& idx) {
  for (int v : idx) {
    if (v != 0) return false;
  }
  return true;
}

struct LatticeShape {
  int m = 1;
  int n = 1;

  LatticeShape() = default;
  LatticeShape(int m_, int n_) : m(m_), n(n_) {
    if (m < 1 || n < 1) {
      throw std::invalid_argument("lattice shape requires m >= 1 and n >= 1");
    }
    if (m + n > 15) {
      throw std::invalid_argument("lattice shape too large: m + n > 15");
    }
  }

  int num_coords() const { return m + n; }                       // N
  std::int64_t local_dim() const { return 1LL << num_coords(); } // d = 2^N
  std::int64_t lattice_size() const {                            // 4^N
    return 1LL << (2 * num_coords());
  }

  bool operator==(const LatticeShape&) const = default;
};

struct LatticeSite {
  MultiIndex alpha;  // arity m
  MultiIndex beta;   // arity n

  bool operator==(const LatticeSite&) const = default;
};

inline void validate_site(const LatticeShape& shape, const LatticeSite& site) {
  validate_multi_index(site.alpha, shape.m);
  validate_multi_index(site.beta, shape.n);
}

// Coordinate c in [0, N): alpha digits first, then beta digits.
inline int site_coord(const LatticeShape& shape, const LatticeSite& site,
                      int c) {
  return c < shape.m ? site.alpha[c] : site.beta[c - shape.m];
}

inline int& site_coord_ref(const LatticeShape& shape, LatticeSite& site,
                           int c) {
  return c < shape.m ? site.alpha[c] : site.beta[c - shape.m];
}

// Base-4 big-endian enumeration of L: alpha_1 most significant, beta_n least.
inline std::int64_t site_index(const LatticeShape& shape,
                               const LatticeSite& site) {
  validate_site(shape, site);
  std::int64_t idx = 0;
  for (int c = 0; c < shape.num_coords(); ++c) {
    idx = idx * 4 + site_coord(shape, site, c);
  }
  return idx;
}

inline LatticeSite site_from_index(const LatticeShape& shape,
                                   std::int64_t idx) {
  if (idx < 0 || idx >= shape.lattice_size()) {
    throw std::invalid_argument("site index out of range: " +
                                std::to_string(idx));
  }
  const int num = shape.num_coords();
  LatticeSite site{MultiIndex(shape.m), MultiIndex(shape.n)};
  for (int c = num - 1; c >= 0; --c) {
    site_coord_ref(shape, site, c) = static_cast<int>(idx & 3);
    idx >>= 2;
  }
  return site;
}

// Base-4 big-endian enumeration of L^(k), matching site_index on (alpha,beta).
inline std::int64_t flat_from_multi_index(const MultiIndex& idx) {
  validate_multi_index(idx, static_cast<int>(idx.size()));
  std::int64_t flat = 0;
  for (int v : idx) flat = flat * 4 + v;
  return flat;
}

inline MultiIndex multi_index_from_flat(int arity, std::int64_t flat) {
  if (arity < 1 || flat < 0 || flat >= (1LL << (2 * arity))) {
    throw std::invalid_argument("flat multi-index out of range");
  }
  MultiIndex idx(arity);
  for (int c = arity - 1; c >= 0; --c) {
    idx[c] = static_cast<int>(flat & 3);
    flat >>= 2;
  }
  return idx;
}

// epsilon_a = (-1)^{delta_{a,2}}
inline int pauli_conj_sign(int a) { return a == 2 ? -1 : 1; }

// eta table: +1 unless both indices are nonzero and distinct.
inline int eta(int a, int g) {
  return (a != 0 && g != 0 && a != g) ? -1 : 1;
}

// Xi_{ag} = (-1)^{delta_{|a-g|,2}}; factorizes as eps_a * eps_g * eta_{ag}.
inline int xi(int a, int g) {
  if (a < 0 || a > 3 || g < 0 || g > 3) {
    throw std::invalid_argument("xi arguments must lie in {0,1,2,3}");
  }
  return (a - g == 2 || g - a == 2) ? -1 : 1;
}

// The involution mu -> (mu + 2) mod 4, so that Xi_{ag} = (-1)^{delta_{a,~g}}.
inline int tilde(int mu) {
  if (mu < 0 || mu > 3) {
    throw std::invalid_argument("tilde argument must lie in {0,1,2,3}");
  }
  return (mu + 2) & 3;
}

// Number of coordinate positions where the two sites agree (defines L^a).
inline int match_count(const LatticeShape& shape, const LatticeSite& s1,
                       const LatticeSite& s2) {
  validate_site(shape, s1);
  validate_site(shape, s2);
  int matches = 0;
  for (int c = 0; c < shape.num_coords(); ++c) {
    if (site_coord(shape, s1, c) == site_coord(shape, s2, c)) ++matches;
  }
  return matches;
}

// ----------------------------------------------------------------------------
// Elementary lattice symmetries: a value permutation acting on one coordinate
// (exchange of parallel hyperplanes) or the exchange of two coordinates.
// Both are induced by local unitaries and preserve match-count structure.

struct ValuePermutation {
  int coord = 0;                      // 0-based coordinate in [0, N)
  std::array<int, 4> perm{0, 1, 2, 3};
};

struct CoordinateSwap {
  int coord_a = 0;
  int coord_b = 0;
};

using SymmetryOp = std::variant<ValuePermutation, CoordinateSwap>;

inline void validate_symmetry(const LatticeShape& shape, const SymmetryOp& op) {
  const int num = shape.num_coords();
  if (const auto* vp = std::get_if<ValuePermutation>(&op)) {
    if (vp->coord < 0 || vp->coord >= num) {
      throw std::invalid_argument("value permutation coordinate out of range");
    }
    std::array<bool, 4> seen{};
    for (int v : vp->perm) {
      if (v < 0 || v > 3 || seen[v]) {
        throw std::invalid_argument("value permutation is not a bijection of {0,1,2,3}");
      }
      seen[v] = true;
    }
  } else {
    const auto& cs = std::get<CoordinateSwap>(op);
    if (cs.coord_a < 0 || cs.coord_a >= num || cs.coord_b < 0 ||
        cs.coord_b >= num) {
      throw std::invalid_argument("coordinate swap index out of range");
    }
  }
}

inline LatticeSite apply_symmetry(const LatticeShape& shape,
                                  const SymmetryOp& op,
                                  const LatticeSite& site) {
  validate_symmetry(shape, op);
  validate_site(shape, site);
  LatticeSite out = site;
  if (const auto* vp = std::get_if<ValuePermutation>(&op)) {
    int& v = site_coord_ref(shape, out, vp->coord);
    v = vp->perm[v];
  } else {
    const auto& cs = std::get<CoordinateSwap>(op);
    std::swap(site_coord_ref(shape, out, cs.coord_a),
              site_coord_ref(shape, out, cs.coord_b));
  }
  return out;
}

inline SymmetryOp invert_symmetry(const SymmetryOp& op) {
  if (const auto* vp = std::get_if<ValuePermutation>(&op)) {
    ValuePermutation inv{vp->coord, {}};
    for (int v = 0; v < 4; ++v) inv.perm[vp->perm[v]] = v;
    return inv;
  }
  return op;  // a swap is its own inverse
}

// The permutation of [0, 4^N) induced on site indices.
inline std::vector<std::int64_t> symmetry_site_permutation(
    const LatticeShape& shape, const SymmetryOp& op) {
  validate_symmetry(shape, op);
  const std::int64_t size = shape.lattice_size();
  std::vector<std::int64_t> table(size);
  for (std::int64_t i = 0; i < size; ++i) {
    table[i] = site_index(shape, apply_symmetry(shape, op, site_from_index(shape, i)));
  }
  return table;
}

// ----------------------------------------------------------------------------
// Site serialization: comma-separated digits, "|" between alpha and beta,
// e.g. "1,2|3".

inline std::string format_multi_index(const MultiIndex& idx) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(idx[i]);
  }
  return out;
}

inline std::string format_site(const LatticeSite& site) {
  return format_multi_index(site.alpha) + "|" + format_multi_index(site.beta);
}

inline MultiIndex parse_multi_index(const std::string& text) {
  MultiIndex idx;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.size() != 1 || tok[0] < '0' || tok[0] > '3') {
      throw std::runtime_error("bad multi-index digit '" + tok + "' in \"" +
                               text + "\"");
    }
    idx.push_back(tok[0] - '0');
  }
  if (idx.empty()) {
    throw std::runtime_error("empty multi-index in \"" + text + "\"");
  }
  return idx;
}

inline LatticeSite parse_site(const LatticeShape& shape,
                              const std::string& text) {
  const auto bar = text.find('|');
  if (bar == std::string::npos) {
    throw std::runtime_error("site string missing '|': \"" + text + "\"");
  }
  LatticeSite site{parse_multi_index(text.substr(0, bar)),
                   parse_multi_index(text.substr(bar + 1))};
  validate_site(shape, site);
  return site;
}

}  // namespace pptes
