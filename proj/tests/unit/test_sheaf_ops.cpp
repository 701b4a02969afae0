#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace geoctx;
using namespace geoctx::testing;

namespace {

NatTrans inclusion(const GeometricContext& ctx, const std::string& a) {
  ArrowId phi = arrow(ctx, a);
  const FiniteCategory& c = ctx.cat();
  return yoneda_arrow(yoneda(ctx.category(), c.source(phi)), yoneda(ctx.category(), c.target(phi)), phi);
}

}  // namespace

TEST_CASE("epi and mono basics") {
  GeometricContext ctx = int_context();
  PresheafPtr hl = yoneda(ctx.category(), obj(ctx, "L"));
  CHECK(is_epimorphism(ctx.site, identity_nat(hl)).passed());
  CHECK(is_monomorphism(ctx.site, identity_nat(hl)).passed());

  // h_X + h_Y -> h_XY is locally surjective.
  SheafColimit co = sheaf_coproduct(ctx.site, {yoneda(ctx.category(), obj(ctx, "X")), yoneda(ctx.category(), obj(ctx, "Y"))});
  PresheafPtr hxy = yoneda(ctx.category(), obj(ctx, "XY"));
  NatTrans m = mediate(ctx.site, co, hxy, {inclusion(ctx, "i_X_XY"), inclusion(ctx, "i_Y_XY")});
  CHECK(is_epimorphism(ctx.site, m).passed());
  CHECK(is_monomorphism(ctx.site, m).passed());

  // h_X -> h_L is mono but not epi.
  Verdict e = is_epimorphism(ctx.site, inclusion(ctx, "i_X_L"));
  REQUIRE(e.status == Status::fail);
  CHECK(e.witness->find("object"));

  // Diagonal is mono, fold is not.
  PresheafPtr two = sheafify(ctx.site, constant_presheaf(ctx.category(), 2)).sheaf;
  LimitCone sq = sheaf_product(ctx.site, two, two);
  NatTrans diag = mediate(sq, two, {identity_nat(two), identity_nat(two)});
  CHECK(is_monomorphism(ctx.site, diag).passed());
  SheafColimit both = sheaf_coproduct(ctx.site, {two, two});
  NatTrans fold = mediate(ctx.site, both, two, {identity_nat(two), identity_nat(two)});
  Verdict v = is_monomorphism(ctx.site, fold);
  REQUIRE(v.status == Status::fail);
  CHECK(v.witness->find("sections"));
}

TEST_CASE("epi on the point is right-cancellation") {
  CategoryPtr c = pt_context().category();
  Site site = pt_context().site;
  std::vector<PresheafPtr> sets;
  for (int n = 0; n <= 3; ++n) sets.push_back(finite_set(c, n));
  for (const auto& a : sets)
    for (const auto& b : sets)
      for (const NatTrans& f : brute_nat_trans(a, b))
        CHECK(is_epimorphism(site, f).passed() == brute_right_cancellable(f, sets));
}

TEST_CASE("image factorization") {
  GeometricContext ctx = int_context();
  NatTrans f = inclusion(ctx, "i_X_L");
  ImageFactorization im = image_factorization(ctx.site, f);
  CHECK(brute_isomorphic(im.image, f.source));
  CHECK(im.subobject == image_of(f));

  std::mt19937 rng(13);
  for (const auto& c : {sierp_context(), int_context()}) {
    for (int round = 0; round < 15; ++round) {
      PresheafPtr a = random_sheaf(c.site, rng, 3), b = random_sheaf(c.site, rng, 3);
      auto g = random_nat_trans(a, b, rng);
      if (!g) continue;
      ImageFactorization fac = image_factorization(c.site, *g);
      CHECK(same_components(compose(fac.mono, fac.epi), *g));
      CHECK(is_epimorphism(c.site, fac.epi).passed());
      CHECK(is_monomorphism(c.site, fac.mono).passed());
      if (is_monomorphism(c.site, *g)) CHECK(is_pointwise_bijective(fac.epi));
      if (is_epimorphism(c.site, *g)) CHECK(is_pointwise_bijective(fac.mono));
    }
  }
}

TEST_CASE("sheaf limits and coproducts") {
  GeometricContext ctx = int_context();
  const CategoryPtr& c = ctx.category();
  LimitCone t = sheaf_limit(ctx.site, Diagram{});
  CHECK(is_sheaf(ctx.site, *t.apex).passed());
  LimitCone pb = sheaf_pullback(ctx.site, inclusion(ctx, "i_X_L"), inclusion(ctx, "i_Y_L"));
  CHECK(brute_isomorphic(pb.apex, yoneda(c, obj(ctx, "E"))));

  SheafColimit none = sheaf_coproduct(ctx.site, {});
  CHECK(none.sheaf->size(obj(ctx, "E")) == 1);
  CHECK(none.sheaf->size(obj(ctx, "X")) == 0);

  PresheafPtr hx = yoneda(c, obj(ctx, "X"));
  SheafColimit one = sheaf_coproduct(ctx.site, {hx});
  CHECK(is_pointwise_bijective(one.legs[0]));

  // h_X + h_Y: sections over {x,y} are the single pair (x-part, y-part).
  SheafColimit co = sheaf_coproduct(ctx.site, {hx, yoneda(c, obj(ctx, "Y"))});
  CHECK(brute_is_sheaf(ctx.site, co.sheaf));
  CHECK(co.sheaf->size(obj(ctx, "XY")) == 1);
  CHECK(brute_isomorphic(co.sheaf, yoneda(c, obj(ctx, "XY"))));
  for (const auto& leg : co.legs) CHECK(is_monomorphism(ctx.site, leg).passed());
}

TEST_CASE("epimorphisms are stable under base change; mono and epi is iso") {
  std::mt19937 rng(29);
  for (const auto& ctx : {sierp_context(), int_context()}) {
    for (int round = 0; round < 15; ++round) {
      PresheafPtr a = random_sheaf(ctx.site, rng, 3), b = random_sheaf(ctx.site, rng, 3),
                  x = random_sheaf(ctx.site, rng, 2);
      auto f = random_nat_trans(a, b, rng);
      auto g = random_nat_trans(x, b, rng);
      if (!f || !g) continue;
      if (is_epimorphism(ctx.site, *f)) {
        LimitCone pb = sheaf_pullback(ctx.site, *f, *g);
        CHECK(is_epimorphism(ctx.site, pb.legs[1]).passed());
        if (is_monomorphism(ctx.site, *f)) CHECK(is_pointwise_bijective(*f));
      }
    }
  }
}

TEST_CASE("quotients") {
  GeometricContext pt = pt_context();
  PresheafPtr x = finite_set(pt.category(), 3);
  LimitCone sq = sheaf_product(pt.site, x, x);
  Quotient total = quotient_by_relation(pt.site, {sq.apex, x, sq.legs[0], sq.legs[1]});
  CHECK(total.sheaf->size(0) == 1);
  Quotient diag = quotient_by_relation(pt.site, {x, x, identity_nat(x), identity_nat(x)});
  CHECK(is_pointwise_bijective(diag.q));

  // Not symmetric: {(a,a), (b,b), (c,c), (a,b)}.
  PresheafPtr four = finite_set(pt.category(), 4);
  NatTrans r1 = make_nat_trans(four, x, {{0, 1, 2, 0}}), r2 = make_nat_trans(four, x, {{0, 1, 2, 1}});
  EquivalenceRelation rel{four, x, r1, r2};
  Verdict v = check_equivalence_relation(pt.site, rel);
  REQUIRE(v.status == Status::fail);
  CHECK(*v.witness->find("property") == "symmetric");
  CHECK_THROWS_AS(quotient_by_relation(pt.site, rel), Error);
}

TEST_CASE("subsheaf union and equality") {
  GeometricContext ctx = int_context();
  ObjectId l = obj(ctx, "L");
  PresheafPtr hl = yoneda(ctx.category(), l);
  Subpresheaf sx = image_subsheaf(ctx.site, inclusion(ctx, "i_X_L"));
  Subpresheaf sy = image_subsheaf(ctx.site, inclusion(ctx, "i_Y_L"));
  Subpresheaf empty = closure(ctx.site, empty_subpresheaf(hl));
  CHECK(subsheaf_equal(ctx.site, subsheaf_union(ctx.site, {sx, empty}), sx));
  Subpresheaf points = subsheaf_union(ctx.site, {sx, sy});
  CHECK_FALSE(points.contains(l, 0));
  CHECK(points.contains(obj(ctx, "XY"), 0));
  CHECK_THROWS_AS(subsheaf_equal(ctx.site, sx, full_subpresheaf(yoneda(ctx.category(), obj(ctx, "XY")))), Error);
}
