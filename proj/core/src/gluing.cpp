#include <set>

#include "geoctx/geometry.hpp"

namespace geoctx {

LimitCone chart_square(const GeometricContext& ctx, ObjectId ui, ObjectId uj) {
  return product(yoneda(ctx.category(), ui), yoneda(ctx.category(), uj));
}

Subpresheaf diagonal_overlap(const GeometricContext& ctx, ObjectId u) {
  LimitCone sq = chart_square(ctx, u, u);
  Subpresheaf s = empty_subpresheaf(sq.apex);
  for (std::size_t v = 0; v < sq.tuples.size(); ++v)
    for (std::size_t e = 0; e < sq.tuples[v].size(); ++e) s.members[v][e] = sq.tuples[v][e][0] == sq.tuples[v][e][1];
  return s;
}

Subpresheaf overlap_from_pairs(const GeometricContext& ctx, ObjectId ui, ObjectId uj,
                               const std::vector<std::pair<ArrowId, ArrowId>>& pairs) {
  const FiniteCategory& c = ctx.cat();
  LimitCone sq = chart_square(ctx, ui, uj);
  std::vector<std::pair<ObjectId, int>> elements;
  for (auto [a, b] : pairs) {
    if (c.target(a) != ui || c.target(b) != uj)
      throw Error(ErrorCode::MixedTargets, "(" + c.arrow_name(a) + ", " + c.arrow_name(b) + ") does not land in (" +
                                               c.object_name(ui) + ", " + c.object_name(uj) + ")");
    if (c.source(a) != c.source(b))
      throw Error(ErrorCode::AnchorMismatch, "(" + c.arrow_name(a) + ", " + c.arrow_name(b) + ") have different sources");
    ObjectId v = c.source(a);
    std::vector<int> t{c.hom_index(a), c.hom_index(b)};
    for (std::size_t e = 0; e < sq.tuples[v].size(); ++e)
      if (sq.tuples[v][e] == t) elements.emplace_back(v, static_cast<int>(e));
  }
  return closure(ctx.site, generated_subpresheaf(sq.apex, elements));
}

namespace {

struct Assembly {
  SheafColimit disjoint;
  SheafColimit relation;
  NatTrans r1, r2;
  std::vector<LimitCone> squares;  // [i * n + j]
};

Assembly assemble(const GeometricContext& ctx, const GluingData& data) {
  const std::size_t n = data.charts.size();
  std::vector<PresheafPtr> reps;
  for (ObjectId u : data.charts) reps.push_back(yoneda(ctx.category(), u));
  SheafColimit disjoint = sheaf_coproduct(ctx.site, reps);
  std::vector<LimitCone> squares;
  std::vector<PresheafPtr> pieces;
  std::vector<NatTrans> legs1, legs2;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      LimitCone sq = chart_square(ctx, data.charts[i], data.charts[j]);
      auto m = materialize(data.overlaps[i][j]);
      pieces.push_back(m.presheaf);
      legs1.push_back(compose(disjoint.legs[i], compose(sq.legs[0], m.inclusion)));
      legs2.push_back(compose(disjoint.legs[j], compose(sq.legs[1], m.inclusion)));
      squares.push_back(std::move(sq));
    }
  SheafColimit relation = sheaf_coproduct(ctx.site, pieces);
  NatTrans r1 = mediate(ctx.site, relation, disjoint.sheaf, legs1);
  NatTrans r2 = mediate(ctx.site, relation, disjoint.sheaf, legs2);
  return {std::move(disjoint), std::move(relation), std::move(r1), std::move(r2), std::move(squares)};
}

Witness at_pair(Witness w, const std::string& condition, const FiniteCategory& c, const GluingData& data, std::size_t i,
                std::size_t j) {
  Witness out{std::move(w.summary), {}};
  out.with("condition", condition)
      .with("pair", "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")")
      .with("charts", c.object_name(data.charts[i]) + ", " + c.object_name(data.charts[j]));
  out.fields.insert(out.fields.end(), w.fields.begin(), w.fields.end());
  return out;
}

}  // namespace

Verdict validate_gluing_data(const GeometricContext& ctx, const GluingData& data) {
  const FiniteCategory& c = ctx.cat();
  const std::size_t n = data.charts.size();
  if (data.overlaps.size() != n)
    return Verdict::fail(Witness{"overlap table does not match the charts", {}}.with("condition", "b"));
  for (std::size_t i = 0; i < n; ++i) {
    if (data.overlaps[i].size() != n)
      return Verdict::fail(Witness{"overlap table does not match the charts", {}}.with("condition", "b"));
    for (std::size_t j = 0; j < n; ++j) {
      const Subpresheaf& r = data.overlaps[i][j];
      LimitCone sq = chart_square(ctx, data.charts[i], data.charts[j]);
      if (!same_presheaf(r.parent, sq.apex))
        return Verdict::fail(at_pair(Witness{"overlap is not inside the product of its charts", {}}, "b", c, data, i, j));
      if (!r.is_stable())
        return Verdict::fail(at_pair(Witness{"overlap is not a subfunctor", {}}, "b", c, data, i, j));
      if (!(closure(ctx.site, r) == r))
        return Verdict::fail(at_pair(Witness{"overlap is not a subsheaf", {}}, "b", c, data, i, j));
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!(data.overlaps[i][i] == diagonal_overlap(ctx, data.charts[i])))
      return Verdict::fail(at_pair(Witness{"self-overlap is not the diagonal", {}}, "c", c, data, i, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      LimitCone sq = chart_square(ctx, data.charts[i], data.charts[j]);
      auto m = materialize(data.overlaps[i][j]);
      Verdict v = is_open_immersion(ctx, compose(sq.legs[0], m.inclusion));
      if (!v) return Verdict::fail(at_pair(Witness{"projection of the overlap is not an open immersion", v.witness->fields},
                                           "b", c, data, i, j));
    }

  Assembly as = assemble(ctx, data);
  EquivalenceRelation rel{as.relation.sheaf, as.disjoint.sheaf, as.r1, as.r2};
  Verdict eq = check_equivalence_relation(ctx.site, rel);
  if (!eq && *eq.witness->find("property") == "mono") {
    Witness w{"relation does not embed in the square of the charts", {}};
    w.with("condition", "b");
    w.fields.insert(w.fields.end(), eq.witness->fields.begin(), eq.witness->fields.end());
    return Verdict::fail(std::move(w));
  }
  // Cartesian squares: R_ij is the preimage of R under s_i x s_j.
  for (ObjectId v = 0; v < c.object_count(); ++v) {
    std::set<std::pair<int, int>> image;
    for (int e = 0; e < rel.relation->size(v); ++e) image.emplace(as.r1(v, e), as.r2(v, e));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const LimitCone& sq = as.squares[i * n + j];
        for (std::size_t e = 0; e < sq.tuples[v].size(); ++e) {
          const auto& t = sq.tuples[v][e];
          bool in_r = image.count({as.disjoint.legs[i](v, t[0]), as.disjoint.legs[j](v, t[1])}) > 0;
          if (in_r != data.overlaps[i][j].contains(v, static_cast<int>(e)))
            return Verdict::fail(at_pair(Witness{"square with the assembled relation is not cartesian", {}}
                                             .with("object", c.object_name(v))
                                             .with("element", sq.apex->label(v, static_cast<int>(e))),
                                         "b", c, data, i, j));
        }
      }
  }
  if (!eq) {
    Witness w{eq.witness->summary, {}};
    w.with("condition", "d");
    w.fields.insert(w.fields.end(), eq.witness->fields.begin(), eq.witness->fields.end());
    return Verdict::fail(std::move(w));
  }
  return Verdict::pass();
}

GluedScheme glue(const GeometricContext& ctx, const GluingData& data) {
  Verdict v = validate_gluing_data(ctx, data);
  if (!v) {
    std::string msg = "condition (" + *v.witness->find("condition") + "): " + v.witness->summary;
    for (const auto& [k, val] : v.witness->fields)
      if (k != "condition") msg += "; " + k + "=" + val;
    throw Error(ErrorCode::GluingConditionViolated, msg);
  }
  const FiniteCategory& c = ctx.cat();
  Assembly as = assemble(ctx, data);
  EquivalenceRelation rel{as.relation.sheaf, as.disjoint.sheaf, as.r1, as.r2};
  Quotient q = quotient_by_relation(ctx.site, rel);
  Atlas atlas{q.sheaf, {}, true};
  for (std::size_t i = 0; i < data.charts.size(); ++i) {
    ObjectId u = data.charts[i];
    int id = as.disjoint.legs[i](u, c.hom_index(c.identity(u)));
    atlas.charts.push_back({u, q.q(u, id)});
  }
  if (!verify_atlas(ctx, atlas)) throw Error(ErrorCode::Internal, "glued charts do not form an open atlas");
  return {q.sheaf, std::move(atlas), std::move(as.disjoint), std::move(rel), q.q};
}

GluingData decompose(const GeometricContext& ctx, const Atlas& atlas) {
  const FiniteCategory& c = ctx.cat();
  Atlas open = atlas;
  open.open = true;
  Verdict v = verify_atlas(ctx, open);
  if (!v) {
    std::string msg = v.witness->summary;
    for (const auto& [k, val] : v.witness->fields) msg += "; " + k + "=" + val;
    throw Error(ErrorCode::NotAnOpenAtlas, msg);
  }
  const Presheaf& x = *atlas.target;
  GluingData data;
  for (const auto& ch : atlas.charts) data.charts.push_back(ch.object);
  const std::size_t n = atlas.charts.size();
  data.overlaps.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Chart& a = atlas.charts[i];
      const Chart& b = atlas.charts[j];
      LimitCone sq = chart_square(ctx, a.object, b.object);
      Subpresheaf r = empty_subpresheaf(sq.apex);
      for (ObjectId w = 0; w < c.object_count(); ++w)
        for (std::size_t e = 0; e < sq.tuples[w].size(); ++e) {
          ArrowId fa = c.hom(w, a.object)[sq.tuples[w][e][0]];
          ArrowId fb = c.hom(w, b.object)[sq.tuples[w][e][1]];
          r.members[w][e] = x.restrict(fa, a.section) == x.restrict(fb, b.section);
        }
      data.overlaps[i].push_back(std::move(r));
    }
  return data;
}

}  // namespace geoctx
