#pragma once

// Lattice states (Bell-diagonal mixtures over L) and their exact PPT theory:
// the separable sign transform J = S^(x)N pi over integers, the equidistributed
// constructions I_C and I_BE, and state/site-set serialization.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "pptes/dense.hpp"
#include "pptes/lattice.hpp"
#include "pptes/rational.hpp"

namespace pptes {

// Exact nonnegative integer weights over L with a common denominator:
// pi_site = weights[site] / denom.
struct LatticeState {
  LatticeShape shape;
  std::vector<long long> weights;  // size 4^N
  long long denom = 1;
};

inline LatticeState make_lattice_state(const LatticeShape& shape,
                                       std::vector<long long> weights,
                                       long long denom) {
  if (denom <= 0) throw std::invalid_argument("state denominator must be positive");
  if (denom > (1LL << 62)) {
    throw std::invalid_argument("state denominator too large for exact arithmetic");
  }
  if (static_cast<std::int64_t>(weights.size()) != shape.lattice_size()) {
    throw std::invalid_argument("state weight vector must cover all 4^N sites");
  }
  __int128 sum = 0;
  for (long long w : weights) {
    if (w < 0) throw std::invalid_argument("state weights must be nonnegative");
    sum += w;
  }
  if (sum != denom) {
    throw std::invalid_argument("state weights do not sum to the denominator " +
                                std::to_string(denom));
  }
  return LatticeState{shape, std::move(weights), denom};
}

// Subset I of L, stored dense.
struct SiteSet {
  LatticeShape shape;
  std::vector<std::uint8_t> bits;  // size 4^N, values 0/1

  SiteSet() = default;
  explicit SiteSet(const LatticeShape& s)
      : shape(s), bits(static_cast<std::size_t>(s.lattice_size()), 0) {}

  bool contains(std::int64_t idx) const { return bits[idx] != 0; }
  void insert(std::int64_t idx) { bits[idx] = 1; }

  std::int64_t cardinality() const {
    std::int64_t c = 0;
    for (auto b : bits) c += b;
    return c;
  }

  std::vector<std::int64_t> members() const {
    std::vector<std::int64_t> out;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(bits.size()); ++i) {
      if (bits[i]) out.push_back(i);
    }
    return out;
  }

  bool operator==(const SiteSet&) const = default;
};

inline LatticeState els_from_set(const SiteSet& set) {
  const std::int64_t card = set.cardinality();
  if (card == 0) throw std::invalid_argument("equidistributed state needs a nonempty site set");
  std::vector<long long> weights(set.bits.begin(), set.bits.end());
  return LatticeState{set.shape, std::move(weights), card};
}

// All sites with every coordinate nonzero; cardinality 3^N.
inline SiteSet build_ic(const LatticeShape& shape) {
  SiteSet set(shape);
  const int num = shape.num_coords();
  for (std::int64_t i = 0; i < shape.lattice_size(); ++i) {
    std::int64_t v = i;
    bool all_nonzero = true;
    for (int c = 0; c < num; ++c) {
      if ((v & 3) == 0) {
        all_nonzero = false;
        break;
      }
      v >>= 2;
    }
    if (all_nonzero) set.insert(i);
  }
  return set;
}

// I_C plus the single extra site (0_m, beta0); cardinality 3^N + 1.
inline SiteSet build_ibe(const LatticeShape& shape, const MultiIndex& beta0) {
  validate_multi_index(beta0, shape.n);
  if (is_zero_index(beta0)) {
    throw std::invalid_argument("build_ibe requires beta0 != 0");
  }
  SiteSet set = build_ic(shape);
  set.insert(site_index(shape, LatticeSite{MultiIndex(shape.m, 0), beta0}));
  return set;
}

// ----------------------------------------------------------------------------
// Exact partial-transpose spectrum data: the PT eigenvalues of the state are
// J_site / 2^N as a multiset.

struct JSpectrum {
  LatticeShape shape;
  std::vector<long long> values;  // numerators over denom
  long long denom = 1;

  Rational at(std::int64_t idx) const { return Rational(values[idx], denom); }
};

// J = S^(x)N pi with per-coordinate S = (all ones) - 2 * identity, evaluated
// exactly over the integer numerators. Intermediate values stay within
// [-denom, denom].
inline JSpectrum j_spectrum(const LatticeState& state) {
  const int num = state.shape.num_coords();
  const std::int64_t size = state.shape.lattice_size();
  std::vector<long long> vals(state.weights);
  std::int64_t stride = size / 4;  // most significant digit first
  for (int c = 0; c < num; ++c, stride /= 4) {
    for (std::int64_t base = 0; base < size; ++base) {
      if ((base / stride) % 4 != 0) continue;
      long long* v0 = &vals[base];
      const long long a = v0[0], b = v0[stride], d = v0[2 * stride],
                      e = v0[3 * stride];
      const long long sum = a + b + d + e;
      v0[0] = sum - 2 * a;
      v0[stride] = sum - 2 * b;
      v0[2 * stride] = sum - 2 * d;
      v0[3 * stride] = sum - 2 * e;
    }
  }
  return JSpectrum{state.shape, std::move(vals), state.denom};
}

struct PptResult {
  bool ppt = false;
  Rational j_min;
  LatticeSite argmin;
};

// PPT iff min J >= 0, decided exactly over integers.
inline PptResult is_ppt(const LatticeState& state) {
  const JSpectrum spec = j_spectrum(state);
  std::int64_t arg = 0;
  for (std::int64_t i = 1; i < static_cast<std::int64_t>(spec.values.size()); ++i) {
    if (spec.values[i] < spec.values[arg]) arg = i;
  }
  return PptResult{spec.values[arg] >= 0, spec.at(arg),
                   site_from_index(state.shape, arg)};
}

// ----------------------------------------------------------------------------
// Dense materialization (oracle side).

inline Matrix materialize_dense(const LatticeState& state, int dense_cap = 5) {
  const int num = state.shape.num_coords();
  if (num > dense_cap) {
    throw std::invalid_argument("dense materialization capped at N = " +
                                std::to_string(dense_cap));
  }
  const std::int64_t dim = state.shape.lattice_size();  // (2^N)^2
  Matrix rho = Matrix::Zero(dim, dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    if (state.weights[i] == 0) continue;
    const Vector psi = bell_vector(state.shape, site_from_index(state.shape, i));
    const double pi_i = static_cast<double>(state.weights[i]) /
                        static_cast<double>(state.denom);
    rho.noalias() += pi_i * (psi * psi.adjoint());
  }
  return rho;
}

// ----------------------------------------------------------------------------
// Symmetry action on sets and states (pointwise on sites).

inline SiteSet apply_symmetry(const SymmetryOp& op, const SiteSet& set) {
  const auto table = symmetry_site_permutation(set.shape, op);
  SiteSet out(set.shape);
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(set.bits.size()); ++i) {
    if (set.bits[i]) out.insert(table[i]);
  }
  return out;
}

inline LatticeState apply_symmetry(const SymmetryOp& op,
                                   const LatticeState& state) {
  const auto table = symmetry_site_permutation(state.shape, op);
  std::vector<long long> weights(state.weights.size(), 0);
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(table.size()); ++i) {
    weights[table[i]] = state.weights[i];
  }
  return LatticeState{state.shape, std::move(weights), state.denom};
}

template <typename T>
inline T apply_symmetry_word(const std::vector<SymmetryOp>& word, const T& x) {
  T out = x;
  for (const auto& op : word) out = apply_symmetry(op, out);
  return out;
}

// ----------------------------------------------------------------------------
// State files:
//   lattice-state v1
//   shape <m> <n>
//   denom <d>
//   <site> <weight>       (one line per nonzero weight)
//   end

inline void save_state(std::ostream& os, const LatticeState& state) {
  os << "lattice-state v1\n";
  os << "shape " << state.shape.m << " " << state.shape.n << "\n";
  os << "denom " << state.denom << "\n";
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(state.weights.size()); ++i) {
    if (state.weights[i] == 0) continue;
    os << format_site(site_from_index(state.shape, i)) << " "
       << state.weights[i] << "\n";
  }
  os << "end\n";
}

inline LatticeState load_state(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "lattice-state v1") {
    throw std::runtime_error("state file: bad magic line");
  }
  std::string tag;
  int m = 0, n = 0;
  long long denom = 0;
  is >> tag >> m >> n;
  if (tag != "shape") throw std::runtime_error("state file: missing shape");
  is >> tag >> denom;
  if (tag != "denom") throw std::runtime_error("state file: missing denom");
  const LatticeShape shape(m, n);
  std::vector<long long> weights(static_cast<std::size_t>(shape.lattice_size()), 0);
  std::string site_text;
  while (is >> site_text) {
    if (site_text == "end") {
      return make_lattice_state(shape, std::move(weights), denom);
    }
    long long w = 0;
    if (!(is >> w)) throw std::runtime_error("state file: missing weight");
    weights[site_index(shape, parse_site(shape, site_text))] += w;
  }
  throw std::runtime_error("state file: missing end marker");
}

}  // namespace pptes
