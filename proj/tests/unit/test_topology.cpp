#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace geoctx;
using namespace geoctx::testing;

TEST_CASE("pretopology axioms") {
  GeometricContext pt = pt_context();
  CHECK(validate_pretopology(pt.cat(), *pt.site.cov).passed());
  CHECK(validate_topology(pt.cat(), pt.site.topology).passed());
  CHECK(pt.site.topology.sieves[0] == std::vector<ArrowSet>{maximal_sieve(pt.cat(), 0).arrows});

  GeometricContext ctx = int_context();
  CHECK(validate_pretopology(ctx.cat(), *ctx.site.cov).passed());
  CHECK(validate_site(ctx.site).passed());

  // {x} alone covering {x,y}: pulling back to {y} gives the empty family, which does not cover {y}.
  Pretopology bad = *ctx.site.cov;
  ObjectId xy = obj(ctx, "XY");
  bad.families[xy].push_back(arrow_bit(arrow(ctx, "i_X_XY")));
  Verdict v = validate_pretopology(ctx.cat(), bad);
  REQUIRE(v.status == Status::fail);
  CHECK(v.witness->find("axiom"));
}

TEST_CASE("generated topology on the interval") {
  GeometricContext ctx = int_context();
  const FiniteCategory& c = ctx.cat();
  ObjectId xy = obj(ctx, "XY"), l = obj(ctx, "L");
  ArrowSet two = generated_arrows(c, arrow_bit(arrow(ctx, "i_X_XY")) | arrow_bit(arrow(ctx, "i_Y_XY")));
  CHECK(ctx.site.topology.covers(xy, two));
  CHECK(ctx.site.topology.covers(xy, maximal_sieve(c, xy).arrows));
  // Sieves on {x,y} not containing both points do not cover.
  for (ArrowSet r : all_sieves(c, xy)) CHECK(ctx.site.topology.covers(xy, r) == ((r & two) == two));

  CHECK(is_covering_family(ctx.site, xy, arrow_bit(c.identity(xy))));
  CHECK(is_covering_family(ctx.site, xy, arrow_bit(arrow(ctx, "i_X_XY")) | arrow_bit(arrow(ctx, "i_Y_XY"))));
  CHECK_FALSE(is_covering_family(ctx.site, l, arrow_bit(arrow(ctx, "i_X_L")) | arrow_bit(arrow(ctx, "i_Y_L"))));
  CHECK(validate_topology(c, ctx.site.topology).passed());
}

TEST_CASE("topology axioms") {
  GeometricContext ctx = int_context();
  const FiniteCategory& c = ctx.cat();
  CHECK(validate_topology(c, minimal_topology(c)).passed());

  Topology drop = ctx.site.topology;
  ObjectId x = obj(ctx, "X");
  std::erase(drop.sieves[x], maximal_sieve(c, x).arrows);
  Verdict v = validate_topology(c, drop);
  REQUIRE(v.status == Status::fail);
  CHECK(*v.witness->find("axiom") == "3");
  CHECK(*v.witness->find("object") == "X");

  Topology chaotic = topology_from_pretopology(c, chaotic_pretopology(c));
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (ArrowSet r : all_sieves(c, u)) CHECK(chaotic.covers(u, r) == contains(r, c.identity(u)));
  CHECK(validate_topology(c, chaotic).passed());
}

TEST_CASE("sheaf condition") {
  GeometricContext ctx = int_context();
  const CategoryPtr& c = ctx.category();
  Site minimal = make_site(c, minimal_topology(*c));
  std::mt19937 rng(21);
  for (int i = 0; i < 10; ++i) CHECK(is_sheaf(minimal, *random_presheaf(c, rng, 3)).passed());

  CHECK(is_subcanonical(ctx.site).passed());
  for (ObjectId u = 0; u < c->object_count(); ++u) CHECK(is_sheaf(ctx.site, *yoneda(c, u)).passed());

  PresheafPtr two = constant_presheaf(c, 2);
  Verdict v = is_sheaf(ctx.site, *two);
  REQUIRE(v.status == Status::fail);
  CHECK(*v.witness->find("object") == "E");
  CHECK(*v.witness->find("sieve") == "[]");

  for (int i = 0; i < 40; ++i) {
    PresheafPtr f = random_presheaf(c, rng, 3);
    CHECK(is_sheaf(ctx.site, *f).passed() == brute_is_sheaf(ctx.site, f));
  }
}

TEST_CASE("empty sieve covering on a discrete category is not subcanonical") {
  CategoryPtr c = share(discrete_category({"x", "y"}));
  Topology j{{{arrow_bit(c->identity(0)), 0}, {arrow_bit(c->identity(1)), 0}}};
  Site site = make_site(c, j);
  Verdict v = is_subcanonical(site);
  REQUIRE(v.status == Status::fail);
  CHECK(v.witness->find("object"));
}

TEST_CASE("sheafification") {
  GeometricContext ctx = int_context();
  const CategoryPtr& c = ctx.category();
  Sheafification a = sheafify(ctx.site, constant_presheaf(c, 2));
  CHECK(a.sheaf->size(obj(ctx, "E")) == 1);
  CHECK(a.sheaf->size(obj(ctx, "X")) == 2);
  CHECK(a.sheaf->size(obj(ctx, "Y")) == 2);
  CHECK(a.sheaf->size(obj(ctx, "XY")) == 4);
  CHECK(a.sheaf->size(obj(ctx, "L")) == 2);

  PresheafPtr h = yoneda(c, obj(ctx, "XY"));
  Sheafification b = sheafify(ctx.site, h);
  CHECK(is_pointwise_bijective(b.unit));

  std::mt19937 rng(17);
  for (int i = 0; i < 20; ++i) {
    PresheafPtr f = random_presheaf(c, rng, 3);
    Sheafification plus = plus_construction(ctx.site, f);
    CHECK(is_separated(ctx.site, *plus.sheaf).passed());
    CHECK(brute_is_sheaf(ctx.site, plus_construction(ctx.site, plus.sheaf).sheaf));
    Sheafification s = sheafify(ctx.site, f);
    CHECK(brute_is_sheaf(ctx.site, s.sheaf));
  }
}

TEST_CASE("closure of subobjects") {
  GeometricContext ctx = int_context();
  const FiniteCategory& c = ctx.cat();
  ObjectId xy = obj(ctx, "XY");
  Sieve two = sieve_generated_by(c, xy, arrow_bit(arrow(ctx, "i_X_XY")) | arrow_bit(arrow(ctx, "i_Y_XY")));
  CHECK(closure(ctx.site, two) == maximal_sieve(c, xy));
  Sieve one = sieve_generated_by(c, xy, arrow_bit(arrow(ctx, "i_X_XY")));
  CHECK(closure(ctx.site, one) == one);
}
