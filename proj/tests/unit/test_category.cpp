#include "doctest.h"
#include "fixtures.hpp"

using namespace geoctx;
using namespace geoctx::testing;

namespace {

RawCategory raw_with_ids(std::vector<std::string> objects) {
  RawCategory raw;
  raw.objects = std::move(objects);
  for (const auto& o : raw.objects) {
    raw.arrows.push_back({"id_" + o, o, o});
    raw.identities[o] = "id_" + o;
  }
  return raw;
}

// u, v: A -> B with f . u = f . v = w.
FiniteCategory fold_category() {
  RawCategory raw = raw_with_ids({"A", "B", "C"});
  raw.arrows.push_back({"u", "A", "B"});
  raw.arrows.push_back({"v", "A", "B"});
  raw.arrows.push_back({"f", "B", "C"});
  raw.arrows.push_back({"w", "A", "C"});
  raw.composites.push_back({"f", "u", "w"});
  raw.composites.push_back({"f", "v", "w"});
  return FiniteCategory::validate(raw);
}

ErrorCode code_of(const RawCategory& raw) {
  try {
    FiniteCategory::validate(raw);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("one object with its identity") {
  FiniteCategory c = FiniteCategory::validate(raw_with_ids({"pt"}));
  CHECK(c.object_count() == 1);
  CHECK(c.arrow_count() == 1);
  auto t = terminal_object(c);
  REQUIRE(t);
  CHECK(t->apex == 0);
}

TEST_CASE("validation errors") {
  SUBCASE("missing composite") {
    RawCategory raw = raw_with_ids({"A", "B", "C"});
    raw.arrows.push_back({"f", "A", "B"});
    raw.arrows.push_back({"g", "B", "C"});
    CHECK(code_of(raw) == ErrorCode::MissingComposite);
  }
  SUBCASE("identity law") {
    RawCategory raw = raw_with_ids({"A"});
    raw.arrows.push_back({"e", "A", "A"});
    raw.composites.push_back({"id_A", "e", "id_A"});
    raw.composites.push_back({"e", "e", "e"});
    CHECK(code_of(raw) == ErrorCode::IdentityLawBroken);
  }
  SUBCASE("associativity") {
    // A multiplication table on {1, a, b} that is not associative.
    RawCategory raw = raw_with_ids({"M"});
    raw.arrows.push_back({"a", "M", "M"});
    raw.arrows.push_back({"b", "M", "M"});
    raw.composites.push_back({"a", "a", "a"});
    raw.composites.push_back({"a", "b", "b"});
    raw.composites.push_back({"b", "a", "a"});
    raw.composites.push_back({"b", "b", "a"});
    CHECK(code_of(raw) == ErrorCode::NonAssociative);
  }
  SUBCASE("unknown and duplicate names") {
    RawCategory raw = raw_with_ids({"A"});
    raw.arrows.push_back({"f", "A", "Z"});
    CHECK(code_of(raw) == ErrorCode::UnknownObject);
    RawCategory dup = raw_with_ids({"A", "A"});
    CHECK(code_of(dup) == ErrorCode::DuplicateId);
  }
}

TEST_CASE("interval poset") {
  GeometricContext ctx = int_context();
  const FiniteCategory& c = ctx.cat();
  CHECK(c.object_count() == 5);
  auto t = terminal_object(c);
  REQUIRE(t);
  CHECK(c.object_name(t->apex) == "L");
  auto p = binary_product(c, obj(ctx, "X"), obj(ctx, "Y"));
  REQUIRE(p);
  CHECK(c.object_name(p->apex) == "E");
  auto q = binary_product(c, obj(ctx, "X"), t->apex);
  REQUIRE(q);
  CHECK(q->apex == obj(ctx, "X"));
  CHECK(c.is_identity(q->projections[0]));
  auto pb = pullback(c, arrow(ctx, "i_X_XY"), arrow(ctx, "i_Y_XY"));
  REQUIRE(pb);
  CHECK(c.object_name(pb->apex) == "E");
  for (ArrowId a = 0; a < c.arrow_count(); ++a) {
    CHECK(is_cartesian_arrow(c, a));
    CHECK(is_mono_in_C(c, a));
  }
  // The table rebuilt from its own description is the same category.
  CHECK(FiniteCategory::validate(c.to_raw()) == c);
}

TEST_CASE("discrete category has no terminal object or product") {
  FiniteCategory c = discrete_category({"A", "B"});
  CHECK_FALSE(terminal_object(c));
  CHECK_FALSE(binary_product(c, 0, 1));
  CHECK(check_finite_products(c).status == Status::fail);
}

TEST_CASE("identity pullback") {
  FiniteCategory c = discrete_category({"A"});
  auto pb = pullback(c, c.identity(0), c.identity(0));
  REQUIRE(pb);
  CHECK(pb->first == c.identity(0));
  CHECK(pb->second == c.identity(0));
}

TEST_CASE("a cospan without pullback") {
  RawCategory raw = raw_with_ids({"A", "B", "C", "D"});
  raw.arrows.push_back({"f", "A", "C"});
  raw.arrows.push_back({"g", "B", "C"});
  raw.arrows.push_back({"d", "D", "C"});
  FiniteCategory c = FiniteCategory::validate(raw);
  ArrowId f = *c.find_arrow("f"), g = *c.find_arrow("g");
  CHECK_FALSE(pullback(c, f, g));
  CHECK_FALSE(is_cartesian_arrow(c, f));
  CHECK(is_cartesian_arrow(c, c.identity(2)));
}

TEST_CASE("fold arrow is not mono") {
  FiniteCategory c = fold_category();
  CHECK_FALSE(is_mono_in_C(c, *c.find_arrow("f")));
  CHECK(is_mono_in_C(c, *c.find_arrow("u")));
  for (ObjectId u = 0; u < c.object_count(); ++u) CHECK(is_mono_in_C(c, c.identity(u)));
}

TEST_CASE("limit witnesses are stable up to iso") {
  GeometricContext ctx = int_context();
  const FiniteCategory& c = ctx.cat();
  for (ObjectId a = 0; a < c.object_count(); ++a)
    for (ObjectId b = 0; b < c.object_count(); ++b) {
      auto p = binary_product(c, a, b), q = binary_product(c, b, a);
      REQUIRE(p);
      REQUIRE(q);
      std::swap(q->projections[0], q->projections[1]);
      CHECK(product_iso(c, *p, *q));
    }
  for (ArrowId f = 0; f < c.arrow_count(); ++f)
    for (ArrowId g : members(c.arrows_into(c.target(f)))) {
      auto all = all_pullbacks(c, f, g);
      REQUIRE_FALSE(all.empty());
      for (const auto& w : all) {
        CHECK(is_pullback(c, f, g, w));
        CHECK(pullback_iso(c, all.front(), w));
      }
    }
}
