#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pptes/lattice.hpp"

using namespace pptes;

namespace {

LatticeSite random_site(const LatticeShape& shape, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> dist(0, shape.lattice_size() - 1);
  return site_from_index(shape, dist(rng));
}

SymmetryOp random_elementary_op(const LatticeShape& shape,
                                std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coord(0, shape.num_coords() - 1);
  if (rng() & 1) {
    ValuePermutation vp{coord(rng), {0, 1, 2, 3}};
    std::shuffle(vp.perm.begin(), vp.perm.end(), rng);
    return vp;
  }
  return CoordinateSwap{coord(rng), coord(rng)};
}

}  // namespace

TEST_CASE("site indexing is base-4 big-endian") {
  const LatticeShape s11(1, 1);
  CHECK(site_index(s11, {{0}, {0}}) == 0);
  CHECK(site_index(s11, {{3}, {3}}) == 15);

  const LatticeShape s21(2, 1);
  CHECK(site_index(s21, {{1, 0}, {2}}) == 1 * 16 + 0 * 4 + 2);
}

TEST_CASE("site indexing round-trips over the whole lattice") {
  for (const auto& [m, n] : std::vector<std::pair<int, int>>{
           {1, 1}, {2, 1}, {2, 2}, {3, 1}, {3, 3}}) {
    const LatticeShape shape(m, n);
    REQUIRE(shape.lattice_size() == (1LL << (2 * (m + n))));
    for (std::int64_t i = 0; i < shape.lattice_size(); ++i) {
      CHECK(site_index(shape, site_from_index(shape, i)) == i);
    }
  }
}

TEST_CASE("site indexing rejects arity mismatches") {
  const LatticeShape shape(2, 1);
  CHECK_THROWS_AS(site_index(shape, {{1}, {2}}), std::invalid_argument);
  CHECK_THROWS_AS(site_index(shape, {{1, 4}, {2}}), std::invalid_argument);
}

TEST_CASE("xi sign table") {
  CHECK(xi(0, 2) == -1);
  CHECK(xi(0, 0) == 1);
  CHECK(xi(1, 3) == -1);
  // Factorization cross-check from the eta table: row gamma=3, alpha=1.
  CHECK(pauli_conj_sign(1) * pauli_conj_sign(3) * eta(1, 3) == -1);

  for (int g = 0; g < 4; ++g) {
    int negatives = 0, sum = 0;
    for (int a = 0; a < 4; ++a) {
      const int x = xi(a, g);
      CHECK(x == xi(g, a));
      CHECK(x == pauli_conj_sign(a) * pauli_conj_sign(g) * eta(a, g));
      CHECK(x == ((a == tilde(g)) ? -1 : 1));
      if (x == -1) ++negatives;
      sum += x;
    }
    CHECK(negatives == 1);
    CHECK(sum == 2);
  }
}

TEST_CASE("tilde is the +2 mod 4 involution") {
  CHECK(tilde(0) == 2);
  CHECK(tilde(3) == 1);
  for (int mu = 0; mu < 4; ++mu) CHECK(tilde(tilde(mu)) == mu);
}

TEST_CASE("match_count counts agreeing coordinates") {
  const LatticeShape s11(1, 1);
  CHECK(match_count(s11, {{0}, {2}}, {{0}, {2}}) == 2);
  CHECK(match_count(s11, {{0}, {2}}, {{1}, {3}}) == 0);

  const LatticeShape s21(2, 1);
  CHECK(match_count(s21, {{1, 2}, {3}}, {{1, 0}, {3}}) == 2);
}

TEST_CASE("elementary symmetries act pointwise and invertibly") {
  const LatticeShape shape(1, 1);
  const LatticeSite site{{0}, {2}};

  const SymmetryOp ident = ValuePermutation{0, {0, 1, 2, 3}};
  CHECK(apply_symmetry(shape, ident, site) == site);

  const SymmetryOp swap01 = CoordinateSwap{0, 1};
  CHECK(apply_symmetry(shape, swap01, site) == LatticeSite{{2}, {0}});

  ValuePermutation flip01{0, {1, 0, 2, 3}};
  CHECK(apply_symmetry(shape, flip01, LatticeSite{{0}, {3}}) ==
        LatticeSite{{1}, {3}});

  CHECK_THROWS_AS(apply_symmetry(shape, ValuePermutation{5, {0, 1, 2, 3}}, site),
                  std::invalid_argument);
}

TEST_CASE("symmetries preserve match counts and invert exactly") {
  std::mt19937_64 rng(20240811);
  for (const auto& [m, n] :
       std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}}) {
    const LatticeShape shape(m, n);
    for (int trial = 0; trial < 200; ++trial) {
      const LatticeSite s1 = random_site(shape, rng);
      const LatticeSite s2 = random_site(shape, rng);
      const SymmetryOp op = random_elementary_op(shape, rng);
      const LatticeSite t1 = apply_symmetry(shape, op, s1);
      const LatticeSite t2 = apply_symmetry(shape, op, s2);
      CHECK(match_count(shape, t1, t2) == match_count(shape, s1, s2));
      CHECK(apply_symmetry(shape, invert_symmetry(op), t1) == s1);
    }
  }
}

TEST_CASE("site strings round-trip through the serialization format") {
  const LatticeShape shape(2, 1);
  const LatticeSite site{{1, 2}, {3}};
  CHECK(format_site(site) == "1,2|3");
  CHECK(parse_site(shape, "1,2|3") == site);
  CHECK_THROWS(parse_site(shape, "1,2,3"));
  CHECK_THROWS(parse_site(shape, "1,7|3"));
  CHECK_THROWS(parse_site(shape, "1|3"));
}
