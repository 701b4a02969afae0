#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace geoctx;
using namespace geoctx::testing;

TEST_CASE("presheaf validation") {
  CategoryPtr c = int_context().category();
  const FiniteCategory& cat = *c;
  std::vector<std::vector<std::string>> labels(cat.object_count(), {"a"});
  std::vector<std::vector<int>> restr(cat.arrow_count(), {0});
  CHECK_NOTHROW(make_presheaf(c, labels, restr));
  auto bad = labels;
  bad[0] = {"a", "a"};
  CHECK_THROWS_AS(make_presheaf(c, bad, restr), Error);
  auto wrong = restr;
  wrong[0] = {1};
  CHECK_THROWS_AS(make_presheaf(c, labels, wrong), Error);
}

TEST_CASE("representables") {
  GeometricContext pt = pt_context();
  CHECK(yoneda(pt.category(), 0)->size(0) == 1);

  GeometricContext ctx = int_context();
  PresheafPtr hl = yoneda(ctx.category(), obj(ctx, "L"));
  for (ObjectId v = 0; v < ctx.cat().object_count(); ++v) CHECK(hl->size(v) == 1);
  PresheafPtr hx = yoneda(ctx.category(), obj(ctx, "X"));
  CHECK(hx->size(obj(ctx, "Y")) == 0);
  CHECK(hx->label(obj(ctx, "X"), 0) == "id_X");
}

TEST_CASE("yoneda correspondence") {
  GeometricContext ctx = sierp_context();
  std::mt19937 rng(7);
  for (int round = 0; round < 10; ++round) {
    PresheafPtr f = random_presheaf(ctx.category(), rng, 3);
    for (ObjectId u = 0; u < ctx.cat().object_count(); ++u) {
      PresheafPtr h = yoneda(ctx.category(), u);
      CHECK(static_cast<int>(brute_nat_trans(h, f).size()) == f->size(u));
      for (int s = 0; s < f->size(u); ++s) CHECK(yoneda_evaluate(yoneda_correspond(h, f, u, s), u) == s);
    }
  }
  ObjectId s = obj(ctx, "S");
  PresheafPtr h = yoneda(ctx.category(), s);
  CHECK(same_components(yoneda_correspond(h, h, s, yoneda_index(ctx.cat(), ctx.cat().identity(s))), identity_nat(h)));
}

TEST_CASE("yoneda is fully faithful and preserves monos") {
  GeometricContext ctx = int_context();
  const FiniteCategory& c = ctx.cat();
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (ObjectId v = 0; v < c.object_count(); ++v) {
      PresheafPtr hu = yoneda(ctx.category(), u), hv = yoneda(ctx.category(), v);
      CHECK(brute_nat_trans(hu, hv).size() == c.hom(u, v).size());
      for (ArrowId a : c.hom(u, v)) {
        NatTrans t = yoneda_arrow(hu, hv, a);
        CHECK(yoneda_evaluate(t, u) == c.hom_index(a));
        CHECK(is_pointwise_injective(t) == is_mono_in_C(c, a));
      }
    }
}

TEST_CASE("sieves") {
  GeometricContext ctx = int_context();
  const FiniteCategory& c = ctx.cat();
  ObjectId xy = obj(ctx, "XY"), x = obj(ctx, "X");
  ArrowId ix = arrow(ctx, "i_X_XY"), iy = arrow(ctx, "i_Y_XY");

  Sieve gen = sieve_generated_by(c, xy, arrow_bit(ix) | arrow_bit(iy));
  CHECK(gen.arrows == (c.arrows_into(xy) & ~arrow_bit(c.identity(xy))));
  CHECK(sieve_generated_by(c, xy, arrow_bit(c.identity(xy))) == maximal_sieve(c, xy));
  CHECK(sieve_generated_by(c, xy, 0).arrows == 0);
  CHECK_THROWS_AS(sieve_generated_by(c, xy, arrow_bit(arrow(ctx, "i_X_L"))), Error);

  Sieve rx = sieve_generated_by(c, xy, arrow_bit(ix));
  CHECK(pullback_sieve(c, ix, rx) == maximal_sieve(c, x));
  CHECK(pullback_sieve(c, c.identity(xy), rx) == rx);
  CHECK(pullback_sieve(c, ix, maximal_sieve(c, xy)) == maximal_sieve(c, x));
  CHECK_THROWS_AS(pullback_sieve(c, arrow(ctx, "i_X_L"), rx), Error);

  // Pulling back in two steps is pulling back along the composite.
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (ArrowSet r : all_sieves(c, u)) {
      CHECK(is_sieve(c, Sieve{u, r}));
      for (ArrowId phi : members(c.arrows_into(u)))
        for (ArrowId psi : members(c.arrows_into(c.source(phi))))
          CHECK(pullback_sieve(c, psi, pullback_sieve(c, phi, Sieve{u, r})) ==
                pullback_sieve(c, c.compose(phi, psi), Sieve{u, r}));
      Sieve back = subpresheaf_as_sieve(sieve_as_subpresheaf(yoneda(ctx.category(), u), Sieve{u, r}), u);
      CHECK(back.arrows == r);
    }
}

TEST_CASE("subpresheaf lattice") {
  GeometricContext ctx = int_context();
  std::mt19937 rng(11);
  for (int round = 0; round < 20; ++round) {
    PresheafPtr f = random_presheaf(ctx.category(), rng, 3);
    std::vector<std::pair<ObjectId, int>> pick_a, pick_b;
    for (ObjectId u = 0; u < ctx.cat().object_count(); ++u)
      for (int x = 0; x < f->size(u); ++x) (rng() % 2 ? pick_a : pick_b).emplace_back(u, x);
    Subpresheaf a = generated_subpresheaf(f, pick_a), b = generated_subpresheaf(f, pick_b);
    CHECK(a.is_stable());
    CHECK(intersect(a, b).is_stable());
    CHECK(unite(a, b).is_stable());
    CHECK(is_subset(intersect(a, b), a));
    CHECK(is_subset(a, unite(a, b)));
  }
}

TEST_CASE("pointwise limits and colimits") {
  GeometricContext ctx = int_context();
  const CategoryPtr& c = ctx.category();
  LimitCone empty_lim = presheaf_limit(c, Diagram{});
  ColimitCocone empty_colim = presheaf_colimit(c, Diagram{});
  for (ObjectId u = 0; u < c->object_count(); ++u) {
    CHECK(empty_lim.apex->size(u) == 1);
    CHECK(empty_colim.apex->size(u) == 0);
  }
  LimitCone p = product(yoneda(c, obj(ctx, "X")), yoneda(c, obj(ctx, "Y")));
  CHECK(brute_isomorphic(p.apex, yoneda(c, obj(ctx, "E"))));

  std::mt19937 rng(3);
  for (int round = 0; round < 10; ++round) {
    PresheafPtr a = random_presheaf(c, rng, 3), b = random_presheaf(c, rng, 3);
    LimitCone ab = product(a, b);
    ColimitCocone co = coproduct(c, {a, b});
    for (ObjectId u = 0; u < c->object_count(); ++u) {
      CHECK(ab.apex->size(u) == a->size(u) * b->size(u));
      CHECK(co.apex->size(u) == a->size(u) + b->size(u));
    }
    // The product mediates every cone from a third presheaf uniquely.
    PresheafPtr x = random_presheaf(c, rng, 2);
    auto to_a = brute_nat_trans(x, a), to_b = brute_nat_trans(x, b);
    CHECK(brute_nat_trans(x, ab.apex).size() == to_a.size() * to_b.size());
    for (std::size_t i = 0; i < std::min<std::size_t>(to_a.size(), 3); ++i)
      for (std::size_t j = 0; j < std::min<std::size_t>(to_b.size(), 3); ++j) {
        NatTrans m = mediate(ab, x, {to_a[i], to_b[j]});
        CHECK(same_components(compose(ab.legs[0], m), to_a[i]));
        CHECK(same_components(compose(ab.legs[1], m), to_b[j]));
      }
    auto from_a = brute_nat_trans(a, x), from_b = brute_nat_trans(b, x);
    CHECK(brute_nat_trans(co.apex, x).size() == from_a.size() * from_b.size());
  }
}

TEST_CASE("equalizer and coequalizer") {
  CategoryPtr c = pt_context().category();
  PresheafPtr two = finite_set(c, 2), three = finite_set(c, 3);
  NatTrans f = make_nat_trans(three, two, {{0, 1, 1}});
  NatTrans g = make_nat_trans(three, two, {{0, 0, 1}});
  LimitCone eq = equalizer(f, g);
  CHECK(eq.apex->size(0) == 2);
  ColimitCocone q = coequalizer(f, g);
  CHECK(q.apex->size(0) == 1);
}

TEST_CASE("isomorphism search agrees with brute force") {
  GeometricContext ctx = sierp_context();
  std::mt19937 rng(5);
  for (int round = 0; round < 40; ++round) {
    PresheafPtr a = random_presheaf(ctx.category(), rng, 3), b = random_presheaf(ctx.category(), rng, 3);
    CHECK(isomorphic(a, b) == brute_isomorphic(a, b));
    CHECK(all_nat_trans(a, b).size() == brute_nat_trans(a, b).size());
  }
}
