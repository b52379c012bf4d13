#pragma once

// Enumeration of equidistributed lattice states: exhaustive Gray-code walk
// over all nonempty subsets of L (N = 2), seeded random sampling for larger
// lattices, and orbit reduction under the elementary lattice symmetries.

#include <bit>
#include <cstdint>
#include <functional>
#include <future>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "pptes/maps.hpp"
#include "pptes/states.hpp"

namespace pptes {

// Transposition value permutations on each coordinate plus adjacent coordinate
// swaps; these generate the full elementary symmetry group.
inline std::vector<SymmetryOp> elementary_generators(const LatticeShape& shape) {
  std::vector<SymmetryOp> gens;
  for (int c = 0; c < shape.num_coords(); ++c) {
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        ValuePermutation vp{c, {0, 1, 2, 3}};
        std::swap(vp.perm[a], vp.perm[b]);
        gens.push_back(vp);
      }
    }
  }
  for (int c = 0; c + 1 < shape.num_coords(); ++c) {
    gens.push_back(CoordinateSwap{c, c + 1});
  }
  return gens;
}

// Closure of the generators as site permutations. Feasible for N = 2, where
// the group has (4!)^2 * 2! = 1152 elements.
inline std::vector<std::vector<std::int64_t>> symmetry_group_permutations(
    const LatticeShape& shape) {
  if (shape.num_coords() > 2) {
    throw std::invalid_argument("symmetry group closure supported for N = 2 only");
  }
  const std::int64_t size = shape.lattice_size();
  std::vector<std::vector<std::int64_t>> gen_tables;
  for (const auto& g : elementary_generators(shape)) {
    gen_tables.push_back(symmetry_site_permutation(shape, g));
  }
  std::vector<std::int64_t> identity(size);
  for (std::int64_t i = 0; i < size; ++i) identity[i] = i;
  std::set<std::vector<std::int64_t>> seen{identity};
  std::vector<std::vector<std::int64_t>> frontier{identity};
  while (!frontier.empty()) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& p : frontier) {
      for (const auto& g : gen_tables) {
        std::vector<std::int64_t> q(size);
        for (std::int64_t i = 0; i < size; ++i) q[i] = g[p[i]];
        if (seen.insert(q).second) next.push_back(std::move(q));
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

struct ElsRecord {
  SiteSet sites;
  Rational j_min;
  Rational witness;
  std::int64_t orbit_size = 0;  // 0 when symmetry reduction is off
};

struct EnumerateOptions {
  bool exhaustive = true;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  bool symmetry_reduction = false;
  int workers = 1;
};

namespace detail {

// Per-site columns of S^(x)N: sign_cols[s][t] = (-1)^{#agreements(s,t)}.
inline std::vector<std::vector<int>> pt_sign_columns(const LatticeShape& shape) {
  const std::int64_t size = shape.lattice_size();
  const int num = shape.num_coords();
  std::vector<std::vector<int>> cols(size, std::vector<int>(size));
  for (std::int64_t s = 0; s < size; ++s) {
    for (std::int64_t t = 0; t < size; ++t) {
      int matches = 0;
      std::int64_t a = s, b = t;
      for (int c = 0; c < num; ++c) {
        if ((a & 3) == (b & 3)) ++matches;
        a >>= 2;
        b >>= 2;
      }
      cols[s][t] = (matches & 1) ? -1 : 1;
    }
  }
  return cols;
}

inline SiteSet set_from_mask(const LatticeShape& shape, std::uint32_t mask) {
  SiteSet set(shape);
  for (std::int64_t i = 0; i < shape.lattice_size(); ++i) {
    if (mask & (1u << i)) set.insert(i);
  }
  return set;
}

}  // namespace detail

// Exhaustive enumeration in Gray-code order over the 2^16 - 1 nonempty
// subsets, with incremental J updates (one +-column of S^(x)N per step).
// Chunks of the Gray sequence run concurrently and are emitted in sequence
// order, so output does not depend on the worker count.
inline void enumerate_ppt_els(const LatticeShape& shape, const MapRep& witness_map,
                              const EnumerateOptions& options,
                              const std::function<void(const ElsRecord&)>& sink) {
  if (witness_map.num_qubits != shape.num_coords() || !witness_map.is_diagonal()) {
    throw std::invalid_argument("enumerate: witness map must be diagonal over the same lattice");
  }
  const std::int64_t size = shape.lattice_size();
  const auto& lambda = witness_map.diagonal();

  if (!options.exhaustive) {
    if (options.samples < 1) {
      throw std::invalid_argument("enumerate: sampling mode needs samples >= 1");
    }
    if (options.symmetry_reduction) {
      throw std::invalid_argument("enumerate: symmetry reduction is available in exhaustive mode only");
    }
    std::mt19937_64 rng(options.seed);
    for (std::int64_t k = 0; k < options.samples; ++k) {
      SiteSet set(shape);
      do {
        for (std::int64_t i = 0; i < size; ++i) {
          set.bits[i] = static_cast<std::uint8_t>(rng() & 1);
        }
      } while (set.cardinality() == 0);
      const LatticeState state = els_from_set(set);
      const PptResult ppt = is_ppt(state);
      sink(ElsRecord{set, ppt.j_min, lattice_witness(witness_map, state), 0});
    }
    return;
  }

  if (size > 16) {
    throw std::invalid_argument("enumerate: exhaustive mode capped at 4^N <= 16 (N = 2)");
  }

  std::vector<std::vector<std::int64_t>> group;
  if (options.symmetry_reduction) group = symmetry_group_permutations(shape);

  const auto sign_cols = detail::pt_sign_columns(shape);
  long long lambda_common = 1;
  for (const auto& l : lambda) {
    lambda_common = std::lcm(lambda_common, l.denominator());
  }
  std::vector<long long> lambda_num(lambda.size());
  for (std::size_t s = 0; s < lambda.size(); ++s) {
    lambda_num[s] = lambda[s].numerator() * (lambda_common / lambda[s].denominator());
  }

  const std::uint32_t total = 1u << size;  // Gray sequence length
  const auto run_range = [&](std::uint32_t begin, std::uint32_t end,
                             std::vector<ElsRecord>& out) {
    std::vector<long long> j(size, 0);
    long long witness_acc = 0;
    std::int64_t card = 0;
    std::uint32_t mask = 0;
    const auto flip = [&](int site, int delta) {
      for (std::int64_t t = 0; t < size; ++t) j[t] += delta * sign_cols[site][t];
      witness_acc += delta * lambda_num[site];
      card += delta;
      mask ^= 1u << site;
    };
    // Seed the walk at gray(begin).
    const std::uint32_t start = begin ^ (begin >> 1);
    for (int s = 0; s < size; ++s) {
      if (start & (1u << s)) flip(s, +1);
    }
    for (std::uint32_t i = begin; i < end; ++i) {
      if (i != begin) {
        const int site = std::countr_zero(i);
        flip(site, mask & (1u << site) ? -1 : +1);
      }
      if (card == 0) continue;
      if (options.symmetry_reduction) {
        std::uint32_t canon = mask;
        std::set<std::uint32_t> images;
        for (const auto& perm : group) {
          std::uint32_t img = 0;
          for (int s = 0; s < size; ++s) {
            if (mask & (1u << s)) img |= 1u << perm[s];
          }
          images.insert(img);
          canon = std::min(canon, img);
        }
        if (canon != mask) continue;
        long long jmin = j[0];
        for (std::int64_t t = 1; t < size; ++t) jmin = std::min(jmin, j[t]);
        out.push_back(ElsRecord{detail::set_from_mask(shape, mask),
                                Rational(jmin, card),
                                Rational(witness_acc, lambda_common) /
                                    Rational(card * shape.local_dim()),
                                static_cast<std::int64_t>(images.size())});
      } else {
        long long jmin = j[0];
        for (std::int64_t t = 1; t < size; ++t) jmin = std::min(jmin, j[t]);
        out.push_back(ElsRecord{detail::set_from_mask(shape, mask),
                                Rational(jmin, card),
                                Rational(witness_acc, lambda_common) /
                                    Rational(card * shape.local_dim()),
                                0});
      }
    }
  };

  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    std::vector<ElsRecord> out;
    run_range(0, total, out);
    for (const auto& rec : out) sink(rec);
    return;
  }
  const std::uint64_t chunk = (static_cast<std::uint64_t>(total) + workers - 1) / workers;
  std::vector<std::future<std::vector<ElsRecord>>> futures;
  for (int w = 0; w < workers; ++w) {
    const std::uint32_t begin = static_cast<std::uint32_t>(w * chunk);
    const std::uint32_t end = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(total, (w + 1) * chunk));
    if (begin >= end) break;
    futures.push_back(std::async(std::launch::async, [&, begin, end] {
      std::vector<ElsRecord> out;
      run_range(begin, end, out);
      return out;
    }));
  }
  for (auto& f : futures) {
    for (const auto& rec : f.get()) sink(rec);
  }
}

}  // namespace pptes
