#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "qconv/gluing.hpp"
#include "qconv/models.hpp"

using namespace qconv;
using std::numbers::pi;

namespace {

BlockStability simple_block(int id, double phase) {
  BlockStability b;
  b.id = id;
  b.rank = 1;
  b.families.push_back({"A", phase, 1.0, {1}});
  b.basis_charge = {std::polar(1.0, pi * phase)};
  return b;
}

// two rank-1 blocks with twists z_1 = 0 and z_2 = i*pi*t
struct TwoBlocks {
  std::vector<BlockStability> blocks;
  std::vector<Germ> twists;
  HomAmplitude hom;
  TwoBlocks() {
    blocks = {simple_block(0, 1.0), simple_block(1, 1.0)};
    twists = {Germ{0.0, 0.0, 0.0}, Germ{complexd(0, pi), 0.0, 0.0}};
    hom.n[{0, 1}] = 1;
  }
};

// brute-force reimplementation of the shift-window criterion
bool gluable_oracle(const std::vector<BlockStability>& blocks,
                    const std::vector<Germ>& twists, const HomAmplitude& hom,
                    double r, double t, double eps = 1e-3) {
  size_t n = blocks.size();
  std::vector<long long> lo(n, 1000000), hi(n, -1000000);
  for (size_t i = 0; i < n; ++i) {
    double psi = evaluate(imag_part(twists[i]), t) / pi;
    for (const auto& f : blocks[i].families) {
      double p = f.phase + psi;
      for (long long k = -1000; k <= 1000; ++k) {
        if (p + k > -eps - r && p + k <= 1.0 + r) lo[i] = std::min(lo[i], k);
        if (p + k > -r && p + k < 1.0 + eps + r) hi[i] = std::max(hi[i], k);
      }
    }
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (hi[j] - lo[i] > hom.get(blocks[i].id, blocks[j].id)) return false;
  return true;
}

std::vector<BlockStability> random_blocks(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> uphase(0.05, 1.0);
  std::uniform_real_distribution<double> umass(0.5, 2.0);
  std::uniform_int_distribution<int> ufam(1, 6);
  std::vector<BlockStability> out;
  for (int i = 0; i < n; ++i) {
    BlockStability b;
    b.id = i;
    b.rank = 1;
    int nf = ufam(rng);
    for (int k = 0; k < nf; ++k)
      b.families.push_back({"f" + std::to_string(k), uphase(rng), umass(rng), {1}});
    b.basis_charge = {complexd(1, 0)};
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

TEST_CASE("r_gluable: single block is vacuously gluable") {
  std::vector<BlockStability> one = {simple_block(0, 0.5)};
  HomAmplitude hom;
  CHECK(r_gluable(one, {Germ{}}, hom, 1.0, 0.0));
  CHECK(r_gluable(one, {Germ{}}, hom, 100.0, 0.0));
}

TEST_CASE("r_gluable: two blocks separate as the twist phases diverge") {
  TwoBlocks tb;
  // at t = 0 the windows overlap fully: not gluable even at r = 1
  CHECK_FALSE(r_gluable(tb.blocks, tb.twists, tb.hom, 1.0, 0.01));
  CHECK_FALSE(r_gluable(tb.blocks, tb.twists, tb.hom, 2.0, 0.01));
  // once the second block has rotated far enough it becomes gluable
  CHECK(r_gluable(tb.blocks, tb.twists, tb.hom, 1.0, 50.0));
  CHECK(r_gluable(tb.blocks, tb.twists, tb.hom, 2.0, 50.0));
  // the threshold grows with r: find first grid times
  auto first_true = [&](double r) {
    for (double t = 0.01; t < 60.0; t += 0.01)
      if (r_gluable(tb.blocks, tb.twists, tb.hom, r, t)) return t;
    return 60.0;
  };
  double t1 = first_true(1.0), t2 = first_true(2.0), t4 = first_true(4.0);
  CHECK(t1 <= t2);
  CHECK(t2 <= t4);
  CHECK(t4 < 60.0);
}

TEST_CASE("r_gluable agrees with a brute-force window scan") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> ut(0.0, 30.0);
  std::uniform_real_distribution<double> ur(1.0, 6.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto blocks = random_blocks(rng, 3);
    std::vector<Germ> twists;
    for (int i = 0; i < 3; ++i)
      twists.push_back(Germ{complexd(0, i + 1.0), 0.0, 0.0});
    HomAmplitude hom;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) hom.n[{i, j}] = 1;
    double r = ur(rng), t = ut(rng);
    CHECK(r_gluable(blocks, twists, hom, r, t) ==
          gluable_oracle(blocks, twists, hom, r, t));
  }
}

TEST_CASE("r_gluable is monotone decreasing in r") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ut(0.0, 40.0);
  TwoBlocks tb;
  for (int trial = 0; trial < 50; ++trial) {
    double t = ut(rng);
    bool prev = true;
    for (double r : {1.0, 1.5, 2.0, 3.0, 5.0}) {
      bool now = r_gluable(tb.blocks, tb.twists, tb.hom, r, t);
      if (!prev) CHECK_FALSE(now);
      prev = now;
    }
  }
}

TEST_CASE("rho markers and consistency with r_gluable") {
  TwoBlocks tb;
  std::vector<BlockStability> one = {simple_block(0, 0.5)};
  HomAmplitude hom0;
  CHECK(rho(one, {Germ{}}, hom0, 1.0) ==
        std::numeric_limits<double>::infinity());
  CHECK(rho(tb.blocks, tb.twists, tb.hom, 0.01) ==
        -std::numeric_limits<double>::infinity());
  double t = 50.0;
  double rh = rho(tb.blocks, tb.twists, tb.hom, t);
  CHECK(rh >= 0.0);
  CHECK(r_gluable(tb.blocks, tb.twists, tb.hom, 1.0 + rh - 1e-5, t));
  CHECK_FALSE(r_gluable(tb.blocks, tb.twists, tb.hom, 1.0 + rh + 1e-3, t));
}

TEST_CASE("glue/unglue round trip") {
  TwoBlocks tb;
  double t = 50.0;
  auto snap = glue(tb.blocks, tb.twists, tb.hom, t);
  REQUIRE(snap.z.size() == 2);
  // twisted phases and masses
  CHECK(snap.phase.at("b0:A") == doctest::Approx(1.0));
  CHECK(snap.phase.at("b1:A") == doctest::Approx(1.0 + t));
  CHECK(std::abs(snap.z.at("b1:A")) == doctest::Approx(1.0));
  auto back = unglue(snap, tb.blocks);
  REQUIRE(back.size() == 2);
  for (size_t i = 0; i < 2; ++i) {
    double psi = evaluate(imag_part(tb.twists[i]), t) / pi;
    CHECK(back[i].families[0].phase ==
          doctest::Approx(tb.blocks[i].families[0].phase + psi));
    CHECK(back[i].families[0].mass == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(glue(tb.blocks, tb.twists, tb.hom, 0.01), NotGluable);
  StabilitySnapshot empty;
  CHECK_THROWS_AS(unglue(empty, tb.blocks), NotInGluedLocus);
}

TEST_CASE("glued path charges carry the block charges through the twist") {
  Model m = build_recovering(RecoveringScenario{});
  REQUIRE(m.glued.has_value());
  const GluedPath& gp = *m.glued;
  for (double t : {1.0, 7.5, 20.0}) {
    for (size_t i = 0; i < gp.blocks.size(); ++i) {
      LatticeVector v(m.ambient_rank, 0);
      v[gp.offsets[i]] = 1;
      complexd z = eval_Z(gp.path, v, t);
      complexd expect = std::exp(complexd(0, gp.speeds[i] * t)) *
                        gp.blocks[i].basis_charge[0];
      CHECK(std::abs(z - expect) < 1e-12 * std::abs(expect));
      // the log evaluator agrees branch-consistently
      complexd lz = gp.path.log_eval(v, t);
      CHECK(std::abs(std::exp(lz) - z) < 1e-12);
    }
  }
}

TEST_CASE("d_slice: identity, c-action offset, pseudometric laws") {
  Model m = build_recovering(RecoveringScenario{});
  const GluedPath& gp = *m.glued;
  double t = 25.0;
  auto snap = glue(gp.blocks, gp.twists, gp.hom, t);
  auto tests = d_slice_test_set(snap);
  CHECK(d_slice(snap, snap, tests) == 0.0);
  // a global rotation by i*pi/2 moves every phase by exactly 1/2
  auto rotated = c_action(complexd(0, pi / 2), snap);
  CHECK(d_slice(snap, rotated, tests) == doctest::Approx(0.5));
  // symmetry and triangle inequality on three perturbed snapshots
  auto a = c_action(complexd(0, 0.3), snap);
  auto b = c_action(complexd(0.1, -0.2), snap);
  double dab = d_slice(a, b, tests);
  CHECK(d_slice(b, a, tests) == doctest::Approx(dab));
  double das = d_slice(a, snap, tests);
  double dsb = d_slice(snap, b, tests);
  CHECK(dab <= das + dsb + 1e-12);
}

TEST_CASE("d_slice of glued data is the max of blockwise distances") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> udelta(-0.1, 0.1);
  std::uniform_int_distribution<int> un(2, 4);
  for (int trial = 0; trial < 20; ++trial) {
    int n = un(rng);
    auto blocks = random_blocks(rng, n);
    HomAmplitude hom;
    std::vector<Germ> twists_a, twists_b;
    for (int i = 0; i < n; ++i) {
      // constant twists separated by whole turns so the data is 1-gluable
      twists_a.push_back(Germ{0.0, 0.0, complexd(0, 10.0 * pi * i)});
      twists_b.push_back(
          Germ{0.0, 0.0, complexd(udelta(rng), 10.0 * pi * i + pi * udelta(rng))});
      for (int j = 0; j < i; ++j) hom.n[{j, i}] = 1;
    }
    auto sa = glue(blocks, twists_a, hom, 1.0);
    auto sb = glue(blocks, twists_b, hom, 1.0);
    double direct = d_slice(sa, sb, d_slice_test_set(sa));
    auto ba = unglue(sa, blocks);
    auto bb = unglue(sb, blocks);
    std::vector<double> blockwise;
    for (int i = 0; i < n; ++i) {
      std::vector<BlockStability> xa = {ba[i]}, xb = {bb[i]};
      xa[0].id = xb[0].id = 0;
      HomAmplitude h1;
      StabilitySnapshot pa = glue(xa, {Germ{}}, h1, 1.0);
      StabilitySnapshot pb = glue(xb, {Germ{}}, h1, 1.0);
      blockwise.push_back(d_slice(pa, pb, d_slice_test_set(pa)));
    }
    CHECK(std::abs(direct - d_slice_glued(blockwise)) < 1e-9);
  }
}

TEST_CASE("build_recovering_path input validation") {
  std::vector<BlockStability> blocks = {simple_block(0, 0.3), simple_block(1, 0.6)};
  HomAmplitude hom;
  hom.n[{0, 1}] = 1;
  CHECK_THROWS_AS(build_recovering_path(blocks, hom, {1.0, 1.0}),
                  BadTwistDirections);
  CHECK_THROWS_AS(build_recovering_path(blocks, hom, {2.0, 1.0}),
                  BadTwistDirections);
  CHECK_THROWS_AS(build_recovering_path(blocks, hom, {1.0}), Error);
  auto gp = build_recovering_path(blocks, hom, {1.0, 2.0});
  // every pairwise twist difference points straight up
  Germ diff = gp.twists[1] - gp.twists[0];
  CHECK(std::abs(normalized_limit(diff) - complexd(0, 1)) < 1e-12);
  CHECK(gp.path.ambient_rank == 2);
  CHECK(gp.registry.count("b0:A") == 1);
  CHECK(gp.registry.count("b1:A") == 1);
}

TEST_CASE("uniform_spread_check vanishes for single-family objects") {
  Model m = build_recovering(RecoveringScenario{});
  std::vector<FormalObject> singles;
  for (const auto& [id, f] : m.registry) singles.push_back({{{id, 0, 1}}});
  double s = uniform_spread_check(m.path, m.registry, singles,
                                  geometric_grid(1.0, 100.0, 7));
  CHECK(s == 0.0);
}

TEST_CASE("HomAmplitude rejects unknown pairs") {
  HomAmplitude hom;
  hom.n[{0, 1}] = 1;
  CHECK(hom.get(0, 1) == 1);
  CHECK_THROWS_AS(hom.get(1, 2), Error);
}
