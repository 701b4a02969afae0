#include "geoctx/topology.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>

namespace geoctx {

namespace {

std::string format_values(const Presheaf& f, ArrowSet r, const std::vector<int>& values) {
  // Show the family on the generators of r; they determine the rest.
  const FiniteCategory& c = f.category();
  ArrowSet gens = sieve_generators(c, r);
  auto arrows = members(r);
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < arrows.size(); ++i) {
    if (!contains(gens, arrows[i])) continue;
    if (!first) out += ", ";
    first = false;
    out += c.arrow_name(arrows[i]) + "=" + f.label(c.source(arrows[i]), values[i]);
  }
  return out + "}";
}

std::string format_sieve(const FiniteCategory& c, ArrowSet r) { return format_family(c, sieve_generators(c, r)); }

std::vector<std::set<ArrowSet>> normalized(const FiniteCategory& c, const Pretopology& cov) {
  std::vector<std::set<ArrowSet>> out(c.object_count());
  for (ObjectId u = 0; u < c.object_count() && u < static_cast<ObjectId>(cov.families.size()); ++u)
    for (ArrowSet fam : cov.families[u]) out[u].insert(c.normalize_up_to_iso(fam));
  return out;
}

}  // namespace

bool Topology::covers(ObjectId u, ArrowSet sieve) const {
  const auto& js = sieves[u];
  return std::find(js.begin(), js.end(), sieve) != js.end();
}

// ---------------------------------------------------------------------------

Verdict validate_pretopology(const FiniteCategory& c, const Pretopology& cov) {
  if (cov.families.size() != static_cast<std::size_t>(c.object_count()))
    return Verdict::fail(Witness{"covering families do not match the objects", {}});
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (ArrowSet fam : cov.families[u])
      if ((fam & ~c.arrows_into(u)) != 0)
        return Verdict::fail(Witness{"covering family has a member not landing in its object", {}}
                                 .with("object", c.object_name(u))
                                 .with("family", format_family(c, fam)));
  const auto norm = normalized(c, cov);
  auto is_cover = [&](ObjectId u, ArrowSet fam) { return norm[u].count(c.normalize_up_to_iso(fam)) > 0; };

  // 1. members are cartesian
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (ArrowSet fam : cov.families[u])
      for (ArrowId a : members(fam))
        if (!is_cartesian_arrow(c, a))
          return Verdict::fail(Witness{"covering member is not cartesian", {}}
                                   .with("axiom", "1")
                                   .with("object", c.object_name(u))
                                   .with("family", format_family(c, fam))
                                   .with("arrow", c.arrow_name(a)));
  // 2. stability under pullback
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (ArrowSet fam : cov.families[u])
      for (ArrowId phi : members(c.arrows_into(u))) {
        ArrowSet pulled = 0;
        for (ArrowId a : members(fam)) pulled |= arrow_bit(pullback(c, phi, a)->first);
        if (!is_cover(c.source(phi), pulled))
          return Verdict::fail(Witness{"pulled back family is not a covering", {}}
                                   .with("axiom", "2")
                                   .with("object", c.object_name(u))
                                   .with("family", format_family(c, fam))
                                   .with("arrow", c.arrow_name(phi))
                                   .with("pulled_back", format_family(c, pulled)));
      }
  // 3. stability under composition: reachable composite families, one
  // covering chosen per member.
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (ArrowSet fam : cov.families[u]) {
      std::map<ArrowSet, std::vector<std::pair<ArrowId, ArrowSet>>> reach{{0, {}}};
      for (ArrowId a : members(fam)) {
        std::map<ArrowSet, std::vector<std::pair<ArrowId, ArrowSet>>> next;
        for (const auto& [mask, choice] : reach)
          for (ArrowSet sub : cov.families[c.source(a)]) {
            ArrowSet composed = mask;
            for (ArrowId b : members(sub)) composed |= arrow_bit(c.compose(a, b));
            if (next.count(composed)) continue;
            auto extended = choice;
            extended.emplace_back(a, sub);
            next.emplace(composed, std::move(extended));
          }
        reach = std::move(next);
      }
      for (const auto& [mask, choice] : reach)
        if (!is_cover(u, mask)) {
          Witness w{"composite family is not a covering", {}};
          w.with("axiom", "3").with("object", c.object_name(u)).with("family", format_family(c, fam));
          for (auto [a, sub] : choice) w.with("cover_of_" + c.arrow_name(a), format_family(c, sub));
          w.with("composite", format_family(c, mask));
          return Verdict::fail(std::move(w));
        }
    }
  // 4. isomorphisms
  for (ArrowId a = 0; a < c.arrow_count(); ++a)
    if (c.is_isomorphism(a) && !is_cover(c.target(a), arrow_bit(a)))
      return Verdict::fail(Witness{"isomorphism is not a covering", {}}
                               .with("axiom", "4")
                               .with("object", c.object_name(c.target(a)))
                               .with("arrow", c.arrow_name(a)));
  return Verdict::pass();
}

Topology topology_from_pretopology(const FiniteCategory& c, const Pretopology& cov) {
  Topology j;
  j.sieves.resize(c.object_count());
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    std::vector<ArrowSet> generated;
    for (ArrowSet fam : cov.families[u]) generated.push_back(generated_arrows(c, fam));
    for (ArrowSet s : all_sieves(c, u))
      for (ArrowSet g : generated)
        if ((g & ~s) == 0) {
          j.sieves[u].push_back(s);
          break;
        }
  }
  return j;
}

Verdict validate_topology(const FiniteCategory& c, const Topology& j) {
  if (j.sieves.size() != static_cast<std::size_t>(c.object_count()))
    return Verdict::fail(Witness{"covering sieves do not match the objects", {}});
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (ArrowSet r : j.sieves[u])
      if (!is_sieve(c, {u, r}))
        return Verdict::fail(Witness{"declared covering sieve is not a sieve", {}}
                                 .with("object", c.object_name(u))
                                 .with("arrows", format_family(c, r)));
  // Checked first: the other two axioms are vacuous or misleading when the
  // maximal sieve is missing.
  for (ObjectId u = 0; u < c.object_count(); ++u)
    if (!j.covers(u, c.arrows_into(u)))
      return Verdict::fail(Witness{"maximal sieve is not covering", {}}.with("axiom", "3").with("object", c.object_name(u)));
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (ArrowSet r : j.sieves[u])
      for (ArrowId phi : members(c.arrows_into(u))) {
        ArrowSet pulled = pullback_arrows(c, phi, r);
        if (!j.covers(c.source(phi), pulled))
          return Verdict::fail(Witness{"pulled back sieve is not covering", {}}
                                   .with("axiom", "1")
                                   .with("object", c.object_name(u))
                                   .with("sieve", format_sieve(c, r))
                                   .with("arrow", c.arrow_name(phi)));
      }
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    const auto sieves = all_sieves(c, u);
    for (ArrowSet r : j.sieves[u])
      for (ArrowSet s : sieves) {
        if (j.covers(u, s)) continue;
        bool locally = true;
        for (ArrowId phi : members(r))
          if (!j.covers(c.source(phi), pullback_arrows(c, phi, s))) {
            locally = false;
            break;
          }
        if (locally)
          return Verdict::fail(Witness{"sieve is locally covering but not covering", {}}
                                   .with("axiom", "2")
                                   .with("object", c.object_name(u))
                                   .with("covering", format_sieve(c, r))
                                   .with("sieve", format_sieve(c, s)));
      }
  }
  return Verdict::pass();
}

Topology minimal_topology(const FiniteCategory& c) {
  Topology j;
  for (ObjectId u = 0; u < c.object_count(); ++u) j.sieves.push_back({c.arrows_into(u)});
  return j;
}

Pretopology chaotic_pretopology(const FiniteCategory& c) {
  Pretopology cov;
  cov.families.resize(c.object_count());
  for (ArrowId a = 0; a < c.arrow_count(); ++a)
    if (c.is_isomorphism(a)) cov.families[c.target(a)].push_back(arrow_bit(a));
  return cov;
}

Site make_site(CategoryPtr c, Pretopology cov) {
  Site s;
  s.topology = topology_from_pretopology(*c, cov);
  s.cov_valid = validate_pretopology(*c, cov).passed();
  s.cov = std::move(cov);
  s.category = std::move(c);
  return s;
}

Site make_site(CategoryPtr c, Topology j) {
  Site s;
  s.category = std::move(c);
  s.topology = std::move(j);
  return s;
}

Verdict validate_site(const Site& site) {
  const FiniteCategory& c = site.cat();
  if (site.cov) {
    auto v = validate_pretopology(c, *site.cov);
    if (!v) return v;
  }
  auto v = validate_topology(c, site.topology);
  if (!v) return v;
  if (site.cov) {
    Topology generated = topology_from_pretopology(c, *site.cov);
    for (ObjectId u = 0; u < c.object_count(); ++u) {
      std::set<ArrowSet> a(generated.sieves[u].begin(), generated.sieves[u].end());
      std::set<ArrowSet> b(site.topology.sieves[u].begin(), site.topology.sieves[u].end());
      if (a != b)
        return Verdict::fail(
            Witness{"topology is not the one generated by the covering families", {}}.with("object", c.object_name(u)));
    }
  }
  return Verdict::pass();
}

// ---------------------------------------------------------------------------

std::vector<std::vector<int>> matching_families(const Presheaf& f, ArrowSet r) {
  const FiniteCategory& c = f.category();
  const auto arrows = members(r);
  std::vector<ArrowId> order = arrows;
  std::stable_sort(order.begin(), order.end(), [&](ArrowId a, ArrowId b) {
    return popcount(c.principal_sieve(a)) > popcount(c.principal_sieve(b));
  });
  std::array<int, kMaxArrows> value;
  value.fill(-1);
  std::vector<ArrowId> trail;
  std::vector<std::vector<int>> out;

  std::function<void(std::size_t)> descend = [&](std::size_t k) {
    while (k < order.size() && value[order[k]] != -1) ++k;
    if (k == order.size()) {
      std::vector<int> fam;
      fam.reserve(arrows.size());
      for (ArrowId a : arrows) fam.push_back(value[a]);
      out.push_back(std::move(fam));
      return;
    }
    ArrowId a = order[k];
    for (int x = 0; x < f.size(c.source(a)); ++x) {
      std::size_t mark = trail.size();
      bool ok = true;
      for (ArrowId b : members(c.arrows_into(c.source(a)))) {
        ArrowId ab = c.compose(a, b);
        if (!contains(r, ab)) continue;
        int y = f.restrict(b, x);
        if (value[ab] == -1) {
          value[ab] = y;
          trail.push_back(ab);
        } else if (value[ab] != y) {
          ok = false;
          break;
        }
      }
      if (ok) descend(k + 1);
      while (trail.size() > mark) {
        value[trail.back()] = -1;
        trail.pop_back();
      }
    }
  };
  descend(0);
  return out;
}

std::optional<int> amalgamate(const Presheaf& f, ObjectId u, ArrowSet r, const std::vector<int>& values) {
  const auto arrows = members(r);
  for (int s = 0; s < f.size(u); ++s) {
    bool ok = true;
    for (std::size_t i = 0; i < arrows.size() && ok; ++i) ok = f.restrict(arrows[i], s) == values[i];
    if (ok) return s;
  }
  return std::nullopt;
}

namespace {

std::vector<int> restrictions_of(const Presheaf& f, ArrowSet r, int s) {
  std::vector<int> out;
  for (ArrowId a : members(r)) out.push_back(f.restrict(a, s));
  return out;
}

// Sieve formulation; `separated_only` skips the existence half.
Verdict sheaf_condition(const Site& site, const Presheaf& f, bool separated_only) {
  const FiniteCategory& c = site.cat();
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (ArrowSet r : site.covering_sieves(u)) {
      std::map<std::vector<int>, int> seen;
      for (int s = 0; s < f.size(u); ++s) {
        auto fam = restrictions_of(f, r, s);
        auto [it, fresh] = seen.emplace(fam, s);
        if (!fresh)
          return Verdict::fail(Witness{"two sections agree on a covering sieve", {}}
                                   .with("object", c.object_name(u))
                                   .with("sieve", format_sieve(c, r))
                                   .with("family", format_values(f, r, fam))
                                   .with("sections", f.label(u, it->second) + ", " + f.label(u, s)));
      }
      if (separated_only) continue;
      for (const auto& fam : matching_families(f, r))
        if (!seen.count(fam))
          return Verdict::fail(Witness{"matching family has no amalgamation", {}}
                                   .with("object", c.object_name(u))
                                   .with("sieve", format_sieve(c, r))
                                   .with("family", format_values(f, r, fam)));
    }
  return Verdict::pass();
}

// Covering-family formulation over Cov with pairwise fibred products.
// Returns nothing when some needed pullback is missing in C.
std::optional<bool> cov_sheaf_condition(const Site& site, const Presheaf& f) {
  const FiniteCategory& c = site.cat();
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (ArrowSet fam : site.cov->families[u]) {
      const auto rho = members(fam);
      const std::size_t n = rho.size();
      std::vector<std::vector<PullbackWitness>> pb(n, std::vector<PullbackWitness>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          auto w = pullback(c, rho[i], rho[j]);
          if (!w) return std::nullopt;
          pb[i][j] = *w;
        }
      std::set<std::vector<int>> from_sections;
      for (int s = 0; s < f.size(u); ++s) {
        std::vector<int> t;
        for (ArrowId a : rho) t.push_back(f.restrict(a, s));
        if (!from_sections.insert(t).second) return false;
      }
      std::vector<int> t(n, 0);
      bool empty = false;
      for (ArrowId a : rho) empty = empty || f.size(c.source(a)) == 0;
      if (empty) {
        if (f.size(u) != 0 || n == 0) return false;
        continue;
      }
      while (true) {
        bool compatible = true;
        for (std::size_t i = 0; i < n && compatible; ++i)
          for (std::size_t j = 0; j < n && compatible; ++j)
            compatible = f.restrict(pb[i][j].first, t[i]) == f.restrict(pb[i][j].second, t[j]);
        if (compatible && !from_sections.count(t)) return false;
        bool done = true;
        for (std::size_t i = n; i-- > 0;) {
          if (++t[i] < f.size(c.source(rho[i]))) {
            done = false;
            break;
          }
          t[i] = 0;
        }
        if (done) break;
      }
    }
  return true;
}

}  // namespace

Verdict is_sheaf(const Site& site, const Presheaf& f) {
  Verdict v = sheaf_condition(site, f, false);
  if (site.cov && site.cov_valid) {
    auto alt = cov_sheaf_condition(site, f);
    if (alt && *alt != v.passed())
      throw Error(ErrorCode::Internal, "sheaf condition over covering families disagrees with the sieve formulation");
  }
  return v;
}

Verdict is_separated(const Site& site, const Presheaf& f) { return sheaf_condition(site, f, true); }

Verdict is_subcanonical(const Site& site) {
  for (ObjectId u = 0; u < site.cat().object_count(); ++u) {
    Verdict v = is_sheaf(site, *yoneda(site.category, u));
    if (!v) {
      v.witness->summary = "representable presheaf is not a sheaf: " + v.witness->summary;
      v.witness->fields.insert(v.witness->fields.begin(), {"representable", site.cat().object_name(u)});
      return v;
    }
  }
  return Verdict::pass();
}

Verdict is_locally_surjective(const Site& site, const NatTrans& f) {
  const FiniteCategory& c = site.cat();
  const Presheaf& g = *f.target;
  std::vector<std::vector<bool>> image(c.object_count());
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    image[u].assign(g.size(u), false);
    for (int y : f.components[u]) image[u][y] = true;
  }
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (int s = 0; s < g.size(u); ++s) {
      ArrowSet r = 0;
      for (ArrowId a : members(c.arrows_into(u)))
        if (image[c.source(a)][g.restrict(a, s)]) r |= arrow_bit(a);
      if (!site.topology.covers(u, r))
        return Verdict::fail(Witness{"section is not locally in the image", {}}
                                 .with("object", c.object_name(u))
                                 .with("section", g.label(u, s))
                                 .with("sieve", format_sieve(c, r)));
    }
  return Verdict::pass();
}

bool is_covering_family(const Site& site, ObjectId u, ArrowSet family) {
  const FiniteCategory& c = site.cat();
  Sieve r = sieve_generated_by(c, u, family);
  bool covers = site.topology.covers(u, r.arrows);
  // Cross-check: the induced map from the coproduct of representables is a
  // local epimorphism of presheaves exactly for coverings.
  std::vector<PresheafPtr> parts;
  std::vector<NatTrans> legs;
  auto h_u = yoneda(site.category, u);
  for (ArrowId a : members(family)) {
    parts.push_back(yoneda(site.category, c.source(a)));
    legs.push_back(yoneda_arrow(parts.back(), h_u, a));
  }
  auto cp = coproduct(site.category, parts);
  bool local = is_locally_surjective(site, mediate(cp, h_u, legs)).passed();
  if (local != covers) throw Error(ErrorCode::Internal, "covering test disagrees with local surjectivity");
  return covers;
}

Subpresheaf closure(const Site& site, const Subpresheaf& s) {
  const FiniteCategory& c = site.cat();
  const Presheaf& f = *s.parent;
  Subpresheaf out = empty_subpresheaf(s.parent);
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (int x = 0; x < f.size(u); ++x) {
      ArrowSet r = 0;
      for (ArrowId a : members(c.arrows_into(u)))
        if (s.members[c.source(a)][f.restrict(a, x)]) r |= arrow_bit(a);
      out.members[u][x] = site.topology.covers(u, r);
    }
  return out;
}

Sieve closure(const Site& site, const Sieve& s) {
  const FiniteCategory& c = site.cat();
  Sieve out{s.anchor, 0};
  for (ArrowId a : members(c.arrows_into(s.anchor)))
    if (site.topology.covers(c.source(a), pullback_arrows(c, a, s.arrows))) out.arrows |= arrow_bit(a);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a < b) parent[b] = a;
    else if (b < a) parent[a] = b;
  }
};

}  // namespace

Sheafification plus_construction(const Site& site, const PresheafPtr& fp) {
  const FiniteCategory& c = site.cat();
  const Presheaf& f = *fp;
  const int n = c.object_count();

  struct Local {
    std::vector<std::pair<ArrowSet, std::vector<int>>> elems;
    std::map<std::pair<ArrowSet, std::vector<int>>, int> index;
    std::vector<int> class_of;   // element -> class id
    std::vector<int> rep;        // class id -> representative element
  };
  std::vector<Local> local(n);

  auto by_arrow = [](ArrowSet r, const std::vector<int>& fam) {
    std::array<int, kMaxArrows> v;
    v.fill(-1);
    auto arrows = members(r);
    for (std::size_t i = 0; i < arrows.size(); ++i) v[arrows[i]] = fam[i];
    return v;
  };

  for (ObjectId u = 0; u < n; ++u) {
    Local& L = local[u];
    for (ArrowSet r : site.covering_sieves(u))
      for (auto& fam : matching_families(f, r)) {
        L.index.emplace(std::make_pair(r, fam), static_cast<int>(L.elems.size()));
        L.elems.emplace_back(r, std::move(fam));
      }
    UnionFind uf(static_cast<int>(L.elems.size()));
    for (std::size_t e = 0; e < L.elems.size(); ++e) {
      const auto& [r, fam] = L.elems[e];
      auto v = by_arrow(r, fam);
      for (ArrowSet t : site.covering_sieves(u)) {
        if (t == r || (t & ~r) != 0) continue;
        std::vector<int> sub;
        for (ArrowId a : members(t)) sub.push_back(v[a]);
        uf.join(static_cast<int>(e), L.index.at({t, sub}));
      }
    }
    L.class_of.assign(L.elems.size(), -1);
    for (std::size_t e = 0; e < L.elems.size(); ++e)
      if (uf.find(static_cast<int>(e)) == static_cast<int>(e)) {
        L.class_of[e] = static_cast<int>(L.rep.size());
        L.rep.push_back(static_cast<int>(e));
      }
    for (std::size_t e = 0; e < L.elems.size(); ++e) L.class_of[e] = L.class_of[uf.find(static_cast<int>(e))];
  }

  std::vector<std::vector<int>> unit(n);
  for (ObjectId u = 0; u < n; ++u) {
    ArrowSet full = c.arrows_into(u);
    for (int x = 0; x < f.size(u); ++x)
      unit[u].push_back(local[u].class_of[local[u].index.at({full, restrictions_of(f, full, x)})]);
  }

  std::vector<std::vector<std::string>> labels(n);
  bool unique = true;
  for (ObjectId u = 0; u < n; ++u) {
    const Local& L = local[u];
    labels[u].assign(L.rep.size(), "");
    for (int x = f.size(u); x-- > 0;) labels[u][unit[u][x]] = f.label(u, x);
    for (std::size_t k = 0; k < L.rep.size(); ++k) {
      if (!labels[u][k].empty()) continue;
      const auto& [r, fam] = L.elems[L.rep[k]];
      std::string s = format_values(f, r, fam);
      labels[u][k] = "<" + s.substr(1, s.size() - 2) + ">";
    }
    std::set<std::string_view> seen(labels[u].begin(), labels[u].end());
    unique = unique && seen.size() == labels[u].size();
  }
  if (!unique)
    for (auto& ls : labels)
      for (std::size_t k = 0; k < ls.size(); ++k) ls[k] += "#" + std::to_string(k);

  std::vector<std::vector<int>> restr(c.arrow_count());
  for (ArrowId phi = 0; phi < c.arrow_count(); ++phi) {
    ObjectId u = c.target(phi), v = c.source(phi);
    for (int rep : local[u].rep) {
      const auto& [r, fam] = local[u].elems[rep];
      auto val = by_arrow(r, fam);
      ArrowSet pulled = pullback_arrows(c, phi, r);
      std::vector<int> sub;
      for (ArrowId psi : members(pulled)) sub.push_back(val[c.compose(phi, psi)]);
      auto it = local[v].index.find({pulled, sub});
      if (it == local[v].index.end())
        throw Error(ErrorCode::Internal, "plus construction: pulled back sieve along " + c.arrow_name(phi) +
                                             " is not covering");
      restr[phi].push_back(local[v].class_of[it->second]);
    }
  }
  auto plus = make_presheaf(site.category, std::move(labels), std::move(restr));
  return {plus, NatTrans{fp, plus, std::move(unit)}};
}

Sheafification sheafify(const Site& site, const PresheafPtr& f) {
  if (is_sheaf(site, *f)) return {f, identity_nat(f)};
  Sheafification once = plus_construction(site, f);
  if (is_sheaf(site, *once.sheaf)) return once;
  Sheafification twice = plus_construction(site, once.sheaf);
  if (!is_sheaf(site, *twice.sheaf)) throw Error(ErrorCode::Internal, "double plus construction is not a sheaf");
  return {twice.sheaf, compose(twice.unit, once.unit)};
}

NatTrans sheafify_lift(const Site& site, const NatTrans& unit, const NatTrans& g) {
  const FiniteCategory& c = site.cat();
  const Presheaf& a = *unit.target;
  const Presheaf& target = *g.target;
  std::vector<std::vector<int>> comp(c.object_count());
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (int s = 0; s < a.size(u); ++s) {
      ArrowSet r = 0;
      std::vector<int> values;
      for (ArrowId phi : members(c.arrows_into(u))) {
        ObjectId v = c.source(phi);
        int t = a.restrict(phi, s);
        for (int x = 0; x < unit.source->size(v); ++x)
          if (unit(v, x) == t) {
            r |= arrow_bit(phi);
            values.push_back(g(v, x));
            break;
          }
      }
      if (!site.topology.covers(u, r))
        throw Error(ErrorCode::PreconditionViolated,
                    "unit is not locally surjective at " + c.object_name(u) + ", '" + a.label(u, s) + "'");
      auto t = amalgamate(target, u, r, values);
      if (!t)
        throw Error(ErrorCode::NotASheaf, "no amalgamation in the target at " + c.object_name(u) + " for '" +
                                              a.label(u, s) + "'");
      comp[u].push_back(*t);
    }
  return make_nat_trans(unit.target, g.target, std::move(comp));
}

}  // namespace geoctx
