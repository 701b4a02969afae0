#include "geoctx/sheaf_ops.hpp"

#include <map>
#include <set>

namespace geoctx {

Verdict is_epimorphism(const Site& site, const NatTrans& f) { return is_locally_surjective(site, f); }

Verdict is_monomorphism(const Site& site, const NatTrans& f) {
  const FiniteCategory& c = site.cat();
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    std::map<int, int> seen;
    for (int x = 0; x < f.source->size(u); ++x) {
      auto [it, fresh] = seen.emplace(f(u, x), x);
      if (!fresh)
        return Verdict::fail(Witness{"two sections have the same image", {}}
                                 .with("object", c.object_name(u))
                                 .with("sections", f.source->label(u, it->second) + ", " + f.source->label(u, x))
                                 .with("image", f.target->label(u, f(u, x))));
    }
  }
  return Verdict::pass();
}

namespace {

ImageFactorization factor_through(const NatTrans& f, const Subpresheaf& sub) {
  auto m = materialize(sub);
  const FiniteCategory& c = f.category();
  std::vector<std::vector<int>> epi(c.object_count());
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    std::vector<int> index(f.target->size(u), -1);
    for (std::size_t k = 0; k < m.inclusion.components[u].size(); ++k)
      index[m.inclusion.components[u][k]] = static_cast<int>(k);
    for (int y : f.components[u]) {
      if (index[y] < 0) throw Error(ErrorCode::Internal, "morphism does not factor through its image");
      epi[u].push_back(index[y]);
    }
  }
  return {sub, m.presheaf, NatTrans{f.source, m.presheaf, std::move(epi)}, m.inclusion};
}

}  // namespace

ImageFactorization image_via_pushout(const Site& site, const NatTrans& f) {
  SheafColimit p = sheaf_pushout(site, f, f);
  const NatTrans& q = p.legs[0];
  const NatTrans& r = p.legs[1];
  Subpresheaf eq = empty_subpresheaf(f.target);
  for (std::size_t u = 0; u < eq.members.size(); ++u)
    for (std::size_t y = 0; y < eq.members[u].size(); ++y) eq.members[u][y] = q.components[u][y] == r.components[u][y];
  return factor_through(f, eq);
}

ImageFactorization image_via_pointwise(const Site& site, const NatTrans& f) {
  auto m = materialize(image_of(f));
  Sheafification a = sheafify(site, m.presheaf);
  NatTrans into = sheafify_lift(site, a.unit, m.inclusion);
  if (!is_pointwise_injective(into))
    throw Error(ErrorCode::InternalRouteDisagreement, "sheafified pointwise image does not embed in the target");
  return factor_through(f, image_of(into));
}

ImageFactorization image_factorization(const Site& site, const NatTrans& f) {
  ImageFactorization a = image_via_pushout(site, f);
  ImageFactorization b = image_via_pointwise(site, f);
  if (!(a.subobject == b.subobject)) {
    const FiniteCategory& c = site.cat();
    for (ObjectId u = 0; u < c.object_count(); ++u)
      for (int y = 0; y < f.target->size(u); ++y)
        if (a.subobject.contains(u, y) != b.subobject.contains(u, y))
          throw Error(ErrorCode::InternalRouteDisagreement,
                      "image routes differ at " + c.object_name(u) + ", '" + f.target->label(u, y) + "'");
  }
  return a;
}

// ---------------------------------------------------------------------------

LimitCone sheaf_limit(const Site& site, const Diagram& d) { return presheaf_limit(site.category, d); }

LimitCone sheaf_product(const Site& site, const PresheafPtr& a, const PresheafPtr& b) {
  return presheaf_limit(site.category, Diagram{{a, b}, {}});
}

LimitCone sheaf_pullback(const Site&, const NatTrans& f, const NatTrans& g) { return pullback(f, g); }

namespace {

SheafColimit sheafified(const Site& site, ColimitCocone cocone) {
  Sheafification a = sheafify(site, cocone.apex);
  SheafColimit out{a.sheaf, {}, std::move(cocone), a.unit};
  for (const auto& leg : out.pointwise.legs) out.legs.push_back(compose(out.unit, leg));
  return out;
}

}  // namespace

SheafColimit sheaf_colimit(const Site& site, const Diagram& d) {
  return sheafified(site, presheaf_colimit(site.category, d));
}

SheafColimit sheaf_coproduct(const Site& site, const std::vector<PresheafPtr>& parts) {
  return sheafified(site, coproduct(site.category, parts));
}

SheafColimit sheaf_pushout(const Site& site, const NatTrans& f, const NatTrans& g) {
  return sheafified(site, pushout(f, g));
}

SheafColimit sheaf_coequalizer(const Site& site, const NatTrans& f, const NatTrans& g) {
  return sheafified(site, coequalizer(f, g));
}

NatTrans mediate(const Site& site, const SheafColimit& colimit, const PresheafPtr& x,
                 const std::vector<NatTrans>& legs) {
  return sheafify_lift(site, colimit.unit, mediate(colimit.pointwise, x, legs));
}

// ---------------------------------------------------------------------------

Verdict check_equivalence_relation(const Site& site, const EquivalenceRelation& rel) {
  const FiniteCategory& c = site.cat();
  const Presheaf& x = *rel.carrier;
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    std::set<std::pair<int, int>> pairs;
    for (int e = 0; e < rel.relation->size(u); ++e) {
      std::pair<int, int> p{rel.r1(u, e), rel.r2(u, e)};
      if (!pairs.insert(p).second)
        return Verdict::fail(Witness{"relation is not a subobject of the square", {}}
                                 .with("property", "mono")
                                 .with("object", c.object_name(u))
                                 .with("pair", "(" + x.label(u, p.first) + ", " + x.label(u, p.second) + ")"));
    }
    for (int a = 0; a < x.size(u); ++a)
      if (!pairs.count({a, a}))
        return Verdict::fail(Witness{"relation is not reflexive", {}}
                                 .with("property", "reflexive")
                                 .with("object", c.object_name(u))
                                 .with("section", x.label(u, a)));
    for (auto [a, b] : pairs)
      if (!pairs.count({b, a}))
        return Verdict::fail(Witness{"relation is not symmetric", {}}
                                 .with("property", "symmetric")
                                 .with("object", c.object_name(u))
                                 .with("pair", "(" + x.label(u, a) + ", " + x.label(u, b) + ")"));
    for (auto [a, b] : pairs)
      for (auto it = pairs.lower_bound({b, 0}); it != pairs.end() && it->first == b; ++it)
        if (!pairs.count({a, it->second}))
          return Verdict::fail(Witness{"relation is not transitive", {}}
                                   .with("property", "transitive")
                                   .with("object", c.object_name(u))
                                   .with("pairs", "(" + x.label(u, a) + ", " + x.label(u, b) + "), (" +
                                                      x.label(u, b) + ", " + x.label(u, it->second) + ")"));
  }
  return Verdict::pass();
}

Quotient quotient_by_relation(const Site& site, const EquivalenceRelation& rel) {
  Verdict v = check_equivalence_relation(site, rel);
  if (!v) {
    std::string msg = v.witness->summary;
    for (const auto& [k, val] : v.witness->fields) msg += "; " + k + "=" + val;
    throw Error(ErrorCode::NotAnEquivalenceRelation, msg);
  }
  SheafColimit co = sheaf_coequalizer(site, rel.r1, rel.r2);
  Quotient out{co.sheaf, co.legs[0]};
  if (!same_components(compose(out.q, rel.r1), compose(out.q, rel.r2)))
    throw Error(ErrorCode::Internal, "quotient map does not coequalize the relation");
  // Effectiveness: R is the kernel pair of q.
  LimitCone kernel = pullback(out.q, out.q);
  NatTrans cmp = mediate(kernel, rel.relation, {rel.r1, rel.r2});
  if (!is_pointwise_bijective(cmp)) throw Error(ErrorCode::Internal, "quotient is not effective");
  return out;
}

// ---------------------------------------------------------------------------

Subpresheaf image_subsheaf(const Site& site, const NatTrans& f) { return closure(site, image_of(f)); }

Subpresheaf subsheaf_union(const Site& site, const std::vector<Subpresheaf>& parts) {
  if (parts.empty()) throw Error(ErrorCode::PreconditionViolated, "union of an empty family needs a parent");
  Subpresheaf u = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) u = unite(u, parts[i]);
  return closure(site, u);
}

bool subsheaf_equal(const Site& site, const Subpresheaf& s, const Subpresheaf& t) {
  if (!same_presheaf(s.parent, t.parent)) throw Error(ErrorCode::ParentMismatch, "subobjects of different sheaves");
  return closure(site, s) == closure(site, t);
}

}  // namespace geoctx
