#include <algorithm>
#include <map>

#include "geoctx/geometry.hpp"

namespace geoctx {

namespace {

class Budget {
 public:
  explicit Budget(std::size_t limit) : limit_(limit) {}
  void spend() {
    if (++used_ > limit_)
      throw Error(ErrorCode::SearchBudgetExceeded, "more than " + std::to_string(limit_) + " chart tests");
  }

 private:
  std::size_t limit_;
  std::size_t used_ = 0;
};

Verdict open_immersion_at(const GeometricContext& ctx, const NatTrans& f, ObjectId u, int g) {
  const FiniteCategory& c = ctx.cat();
  const Presheaf& src = *f.source;
  const Presheaf& tgt = *f.target;
  ArrowSet image = 0;
  for (ArrowId phi : members(c.arrows_into(u))) {
    ObjectId w = c.source(phi);
    int t = tgt.restrict(phi, g);
    int first = -1;
    for (int x = 0; x < src.size(w); ++x) {
      if (f(w, x) != t) continue;
      if (first >= 0)
        return Verdict::fail(Witness{"pullback to a representable is not a monomorphism", {}}
                                 .with("object", c.object_name(u))
                                 .with("section", tgt.label(u, g))
                                 .with("over", c.arrow_name(phi))
                                 .with("sections", src.label(w, first) + ", " + src.label(w, x)));
      first = x;
    }
    if (first >= 0) image |= arrow_bit(phi);
  }
  // Maximal candidate family: every P-arrow whose image lies in the image sieve.
  Sieve generated{u, generated_arrows(c, image & ctx.P)};
  if (closure(ctx.site, generated).arrows != image)
    return Verdict::fail(Witness{"image is not covered by arrows of P", {}}
                             .with("object", c.object_name(u))
                             .with("section", tgt.label(u, g))
                             .with("image", format_family(c, sieve_generators(c, image)))
                             .with("P_part", format_family(c, sieve_generators(c, generated.arrows))));
  return Verdict::pass();
}

Verdict p_morphism(const GeometricContext& ctx, ArrowClass s, const NatTrans& f, Budget& budget);

// Candidate charts of x in (object, section) order, filtered by `accept`.
template <class Accept>
std::vector<Chart> candidate_charts(const GeometricContext& ctx, const PresheafPtr& x, Accept accept) {
  std::vector<Chart> out;
  for (ObjectId v = 0; v < ctx.cat().object_count(); ++v)
    for (int e = 0; e < x->size(v); ++e)
      if (accept(Chart{v, e})) out.push_back({v, e});
  return out;
}

// Greedy prefix of the candidates until jointly epimorphic, then drop
// charts that are redundant, in order.
std::optional<std::vector<Chart>> select_charts(const Site& site, const PresheafPtr& x,
                                                const std::vector<Chart>& candidates) {
  std::vector<Chart> picked;
  bool covered = jointly_epimorphic(site, x, picked).passed();
  for (std::size_t i = 0; i < candidates.size() && !covered; ++i) {
    picked.push_back(candidates[i]);
    covered = jointly_epimorphic(site, x, picked).passed();
  }
  if (!covered) return std::nullopt;
  for (std::size_t i = 0; i < picked.size();) {
    auto without = picked;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    if (jointly_epimorphic(site, x, without)) picked = std::move(without);
    else ++i;
  }
  return picked;
}

NatTrans chart_to(const PresheafPtr& x, const Chart& ch) { return yoneda_correspond(x, ch.object, ch.section); }

std::optional<Atlas> atlas_search(const GeometricContext& ctx, const PresheafPtr& x, bool open, Budget& budget) {
  auto candidates = candidate_charts(ctx, x, [&](const Chart& ch) {
    NatTrans m = chart_to(x, ch);
    if (open) return is_open_immersion(ctx, m).passed();
    Verdict v = p_morphism(ctx, ctx.P, m, budget);
    return v.passed();
  });
  auto picked = select_charts(ctx.site, x, candidates);
  if (!picked) return std::nullopt;
  return Atlas{x, std::move(*picked), open};
}

Verdict p_morphism(const GeometricContext& ctx, ArrowClass s, const NatTrans& f, Budget& budget) {
  const FiniteCategory& c = ctx.cat();
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (int g = 0; g < f.target->size(u); ++g) {
      Fibre fib = fibre_over(f, u, g);
      const PresheafPtr& y = fib.cone.apex;
      auto candidates = candidate_charts(ctx, y, [&](const Chart& ch) {
        ArrowId composite = c.hom(ch.object, u)[fib.cone.legs[1](ch.object, ch.section)];
        if (!contains(s, composite)) return false;
        budget.spend();
        return is_open_immersion(ctx, chart_to(y, ch)).passed();
      });
      Verdict v = jointly_epimorphic(ctx.site, y, candidates);
      if (!v)
        return Verdict::fail(Witness{"fibre over a representable has no open atlas with charts in the class", {}}
                                 .with("object", c.object_name(u))
                                 .with("section", f.target->label(u, g))
                                 .with("uncovered_object", *v.witness->find("object"))
                                 .with("uncovered_section", *v.witness->find("section")));
    }
  return Verdict::pass();
}

}  // namespace

Fibre fibre_over(const NatTrans& f, ObjectId u, int g) {
  auto h_u = yoneda(f.source->category_ptr(), u);
  return {pullback(f, yoneda_correspond(h_u, f.target, u, g)), h_u};
}

Verdict is_open_immersion(const GeometricContext& ctx, const NatTrans& f) {
  for (ObjectId u = 0; u < ctx.cat().object_count(); ++u)
    for (int g = 0; g < f.target->size(u); ++g) {
      Verdict v = open_immersion_at(ctx, f, u, g);
      if (!v) return v;
    }
  return Verdict::pass();
}

Verdict is_P_morphism_of_sheaves(const GeometricContext& ctx, ArrowClass s, const NatTrans& f, std::size_t budget) {
  Budget b(budget);
  try {
    return p_morphism(ctx, s, f, b);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SearchBudgetExceeded) throw;
    return Verdict::inconclusive(Witness{"search budget exceeded", {}}.with("budget", std::to_string(budget)));
  }
}

NatTrans Atlas::chart_map(std::size_t i) const { return chart_to(target, charts[i]); }

Verdict jointly_epimorphic(const Site& site, const PresheafPtr& x, const std::vector<Chart>& charts) {
  const FiniteCategory& c = site.cat();
  std::vector<std::vector<bool>> hit(c.object_count());
  for (ObjectId w = 0; w < c.object_count(); ++w) hit[w].assign(x->size(w), false);
  for (const auto& ch : charts)
    for (ArrowId b : members(c.arrows_into(ch.object))) hit[c.source(b)][x->restrict(b, ch.section)] = true;
  for (ObjectId w = 0; w < c.object_count(); ++w)
    for (int z = 0; z < x->size(w); ++z) {
      ArrowSet r = 0;
      for (ArrowId a : members(c.arrows_into(w)))
        if (hit[c.source(a)][x->restrict(a, z)]) r |= arrow_bit(a);
      if (!site.topology.covers(w, r))
        return Verdict::fail(Witness{"section is not locally covered by the charts", {}}
                                 .with("object", c.object_name(w))
                                 .with("section", x->label(w, z)));
    }
  return Verdict::pass();
}

Verdict verify_atlas(const GeometricContext& ctx, const Atlas& atlas, std::size_t budget) {
  const FiniteCategory& c = ctx.cat();
  for (std::size_t i = 0; i < atlas.charts.size(); ++i) {
    NatTrans m = atlas.chart_map(i);
    Verdict v = atlas.open ? is_open_immersion(ctx, m) : is_P_morphism_of_sheaves(ctx, ctx.P, m, budget);
    if (!v.passed()) {
      Witness w{atlas.open ? "chart is not an open immersion" : "chart is not a P-morphism", {}};
      w.with("chart", std::to_string(i + 1))
          .with("object", c.object_name(atlas.charts[i].object))
          .with("section", atlas.target->label(atlas.charts[i].object, atlas.charts[i].section));
      return v.status == Status::inconclusive ? Verdict::inconclusive(std::move(w)) : Verdict::fail(std::move(w));
    }
  }
  return jointly_epimorphic(ctx.site, atlas.target, atlas.charts);
}

std::optional<Atlas> find_open_atlas(const GeometricContext& ctx, const PresheafPtr& x) {
  Budget unlimited(static_cast<std::size_t>(-1));
  return atlas_search(ctx, x, true, unlimited);
}

std::optional<Atlas> find_atlas(const GeometricContext& ctx, const PresheafPtr& x, std::size_t budget) {
  Budget b(budget);
  return atlas_search(ctx, x, false, b);
}

Verdict is_elementary_scheme(const GeometricContext& ctx, const PresheafPtr& x) {
  if (find_open_atlas(ctx, x)) return Verdict::pass();
  auto all_open = candidate_charts(ctx, x, [&](const Chart& ch) { return is_open_immersion(ctx, chart_to(x, ch)).passed(); });
  Verdict v = jointly_epimorphic(ctx.site, x, all_open);
  Witness w{"no open atlas: open charts leave a section uncovered", {}};
  w.with("open_charts", std::to_string(all_open.size()));
  if (v.witness) w.fields.insert(w.fields.end(), v.witness->fields.begin(), v.witness->fields.end());
  return Verdict::fail(std::move(w));
}

Verdict is_geometric_sheaf(const GeometricContext& ctx, const PresheafPtr& x, std::size_t budget) {
  try {
    if (find_atlas(ctx, x, budget)) return Verdict::pass();
    return Verdict::fail(Witness{"no atlas of P-morphism charts", {}});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SearchBudgetExceeded) throw;
    return Verdict::inconclusive(Witness{"search budget exceeded", {}}.with("budget", std::to_string(budget)));
  }
}

Verdict is_schematic_morphism(const GeometricContext& ctx, const NatTrans& f) {
  const FiniteCategory& c = ctx.cat();
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (int g = 0; g < f.target->size(u); ++g) {
      Fibre fib = fibre_over(f, u, g);
      Verdict v = is_elementary_scheme(ctx, fib.cone.apex);
      if (!v) {
        Witness w{"fibre over a representable is not an elementary scheme", {}};
        w.with("object", c.object_name(u)).with("section", f.target->label(u, g));
        return Verdict::fail(std::move(w));
      }
    }
  return Verdict::pass();
}

void require_pullbacks(const FiniteCategory& c) {
  for (ArrowId a = 0; a < c.arrow_count(); ++a)
    for (ArrowId b : members(c.arrows_into(c.target(a))))
      if (!pullback(c, a, b))
        throw Error(ErrorCode::PullbacksMissingInC, "no pullback of " + c.arrow_name(a) + " and " + c.arrow_name(b));
}

FibredProduct scheme_fibred_product(const GeometricContext& ctx, const NatTrans& f, const NatTrans& g) {
  const FiniteCategory& c = ctx.cat();
  require_pullbacks(c);
  auto atlas_x = find_open_atlas(ctx, f.source);
  if (!atlas_x) throw Error(ErrorCode::PreconditionViolated, "source of the first morphism is not an elementary scheme");
  auto atlas_y = find_open_atlas(ctx, g.source);
  if (!atlas_y) throw Error(ErrorCode::PreconditionViolated, "source of the second morphism is not an elementary scheme");

  FibredProduct out{pullback(f, g), std::nullopt, false};
  const PresheafPtr& w = out.cone.apex;
  std::vector<std::map<std::vector<int>, int>> lookup(c.object_count());
  for (ObjectId v = 0; v < c.object_count(); ++v)
    for (std::size_t k = 0; k < out.cone.tuples[v].size(); ++k) lookup[v][out.cone.tuples[v][k]] = static_cast<int>(k);

  // Charts of h_{U_i} x_Z h_{V_k} pushed into W.
  std::vector<Chart> charts;
  bool complete = true;
  for (const auto& cx : atlas_x->charts) {
    NatTrans mx = compose(f, chart_to(f.source, cx));
    for (const auto& cy : atlas_y->charts) {
      NatTrans my = compose(g, chart_to(g.source, cy));
      LimitCone local = pullback(mx, my);
      auto sub = find_open_atlas(ctx, local.apex);
      if (!sub) {
        complete = false;
        continue;
      }
      for (const auto& ch : sub->charts) {
        const auto& t = local.tuples[ch.object][ch.section];
        ArrowId a = c.hom(ch.object, cx.object)[t[0]];
        ArrowId b = c.hom(ch.object, cy.object)[t[1]];
        std::vector<int> pt{f.source->restrict(a, cx.section), g.source->restrict(b, cy.section)};
        Chart image{ch.object, lookup[ch.object].at(pt)};
        if (std::find(charts.begin(), charts.end(), image) == charts.end()) charts.push_back(image);
      }
    }
  }
  if (complete) {
    Atlas a{w, charts, true};
    if (verify_atlas(ctx, a)) {
      out.atlas = std::move(a);
      out.from_chart_products = true;
      return out;
    }
  }
  out.atlas = find_open_atlas(ctx, w);
  return out;
}

BaseChange base_change_scheme(const GeometricContext& ctx, const NatTrans& f, const NatTrans& p) {
  Verdict fs = is_schematic_morphism(ctx, f);
  if (!fs) throw Error(ErrorCode::PreconditionViolated, "base change morphism is not schematic: " + fs.witness->summary);
  Verdict xs = is_elementary_scheme(ctx, p.source);
  if (!xs) throw Error(ErrorCode::PreconditionViolated, "source of the projection is not an elementary scheme");
  BaseChange out{pullback(f, p), Verdict::pass(), std::nullopt};
  out.atlas = find_open_atlas(ctx, out.cone.apex);
  if (!out.atlas) out.scheme = is_elementary_scheme(ctx, out.cone.apex);
  return out;
}

}  // namespace geoctx
