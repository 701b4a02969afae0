#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

#include "geoctx/geometry.hpp"

namespace geoctx {

bool ContextReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Verdict& v) { return v.passed(); });
}

Verdict check_finite_products(const FiniteCategory& c) {
  if (!terminal_object(c)) {
    // For each object, another object without exactly one arrow into it.
    Witness w{"no terminal object", {}};
    if (c.object_count() == 0) w.with("objects", "none");
    for (ObjectId t = 0; t < c.object_count(); ++t)
      for (ObjectId a = 0; a < c.object_count(); ++a)
        if (c.hom(a, t).size() != 1) {
          w.with(c.object_name(t), c.object_name(a) + " has " + std::to_string(c.hom(a, t).size()) + " arrows to it");
          break;
        }
    return Verdict::fail(std::move(w));
  }
  for (ObjectId a = 0; a < c.object_count(); ++a)
    for (ObjectId b = a; b < c.object_count(); ++b)
      if (!binary_product(c, a, b))
        return Verdict::fail(
            Witness{"missing binary product", {}}.with("left", c.object_name(a)).with("right", c.object_name(b)));
  return Verdict::pass();
}

Verdict validate_admissible(const FiniteCategory& c, ArrowClass p) {
  for (ObjectId u = 0; u < c.object_count(); ++u)
    if (!contains(p, c.identity(u)))
      return Verdict::fail(Witness{"identity is not in the class", {}}
                               .with("condition", "identities")
                               .with("arrow", c.arrow_name(c.identity(u))));
  for (ArrowId phi : members(p))
    for (ArrowId g : members(c.arrows_into(c.target(phi))))
      for (const auto& w : all_pullbacks(c, g, phi))
        if (!contains(p, w.first))
          return Verdict::fail(Witness{"base change leaves the class", {}}
                                   .with("condition", "base change")
                                   .with("arrow", c.arrow_name(phi))
                                   .with("along", c.arrow_name(g))
                                   .with("base_change", c.arrow_name(w.first)));
  for (ArrowId phi : members(p))
    for (ArrowId psi : members(p & c.arrows_from(c.target(phi))))
      if (!contains(p, c.compose(psi, phi)))
        return Verdict::fail(Witness{"composite leaves the class", {}}
                                 .with("condition", "composition")
                                 .with("first", c.arrow_name(phi))
                                 .with("second", c.arrow_name(psi))
                                 .with("composite", c.arrow_name(c.compose(psi, phi))));
  return Verdict::pass();
}

bool contains_isomorphisms(const FiniteCategory& c, ArrowClass p) {
  for (ArrowId a = 0; a < c.arrow_count(); ++a)
    if (c.is_isomorphism(a) && !contains(p, a)) return false;
  return true;
}

Verdict check_local(const Site& site, ArrowClass p) {
  const FiniteCategory& c = site.cat();
  for (ArrowId phi = 0; phi < c.arrow_count(); ++phi) {
    if (contains(p, phi)) continue;
    ObjectId u = c.source(phi);
    // The largest candidate family; any witnessing covering is inside it.
    ArrowSet k = 0;
    for (ArrowId rho : members(p & c.arrows_into(u)))
      if (contains(p, c.compose(phi, rho))) k |= arrow_bit(rho);
    if (site.topology.covers(u, generated_arrows(c, k)))
      return Verdict::fail(Witness{"arrow is locally in the class but not in it", {}}
                               .with("arrow", c.arrow_name(phi))
                               .with("covering", format_family(c, sieve_generators(c, generated_arrows(c, k)))));
  }
  return Verdict::pass();
}

Verdict check_P_generated(const Site& site, ArrowClass p) {
  const FiniteCategory& c = site.cat();
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (ArrowSet r : site.covering_sieves(u))
      if (!site.topology.covers(u, generated_arrows(c, r & p)))
        return Verdict::fail(Witness{"covering has no refinement by arrows of the class", {}}
                                 .with("object", c.object_name(u))
                                 .with("covering", format_family(c, sieve_generators(c, r))));
  return Verdict::pass();
}

Verdict check_locally_cartesian(const Site& site, ArrowClass p) {
  const FiniteCategory& c = site.cat();
  for (ArrowId phi : members(p)) {
    ObjectId u = c.source(phi);
    ArrowSet k = 0;
    for (ArrowId rho : members(p & c.arrows_into(u)))
      if (is_cartesian_arrow(c, c.compose(phi, rho))) k |= arrow_bit(rho);
    if (!site.topology.covers(u, generated_arrows(c, k)))
      return Verdict::fail(Witness{"no covering by arrows of the class makes the arrow cartesian", {}}
                               .with("arrow", c.arrow_name(phi))
                               .with("candidates", format_family(c, k)));
  }
  return Verdict::pass();
}

ContextReport validate_geometric_context(const Site& site, ArrowClass p) {
  return {{check_finite_products(site.cat()), is_subcanonical(site), validate_admissible(site.cat(), p),
           check_local(site, p), check_P_generated(site, p), check_locally_cartesian(site, p)}};
}

GeometricContext make_context(Site site, ArrowClass p) {
  ContextReport report = validate_geometric_context(site, p);
  for (std::size_t i = 0; i < report.checks.size(); ++i)
    if (!report.checks[i])
      throw Error(ErrorCode::PreconditionViolated,
                  std::string(kContextChecks[i]) + " fails: " + report.checks[i].witness->summary);
  return {std::move(site), p};
}

GeometricContext context_from_finite_space(const FiniteSpace& space) {
  if (space.points.size() > 64) throw Error(ErrorCode::ResourceBound, "more than 64 points");
  std::map<std::string, int> point_index;
  for (const auto& pt : space.points)
    if (!point_index.emplace(pt, static_cast<int>(point_index.size())).second)
      throw Error(ErrorCode::DuplicateId, "point '" + pt + "' declared twice");
  const std::uint64_t whole = space.points.size() == 64 ? ~0ull : (1ull << space.points.size()) - 1;

  std::vector<std::uint64_t> sets;
  std::map<std::uint64_t, std::string> by_set;
  for (const auto& [name, pts] : space.opens) {
    std::uint64_t s = 0;
    for (const auto& pt : pts) {
      auto it = point_index.find(pt);
      if (it == point_index.end()) throw Error(ErrorCode::UnknownIdentifier, "point '" + pt + "' in open " + name);
      s |= 1ull << it->second;
    }
    auto [it, fresh] = by_set.emplace(s, name);
    if (!fresh) throw Error(ErrorCode::NotATopology, "opens " + it->second + " and " + name + " are the same set");
    sets.push_back(s);
  }
  if (!by_set.count(0)) throw Error(ErrorCode::NotATopology, "the empty set is not open");
  if (!by_set.count(whole)) throw Error(ErrorCode::NotATopology, "the whole space is not open");
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      const auto& a = space.opens[i].first;
      const auto& b = space.opens[j].first;
      if (!by_set.count(sets[i] | sets[j]))
        throw Error(ErrorCode::NotATopology, "union of " + a + " and " + b + " is not open");
      if (!by_set.count(sets[i] & sets[j]))
        throw Error(ErrorCode::NotATopology, "intersection of " + a + " and " + b + " is not open");
    }

  std::vector<std::size_t> order(sets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::popcount(sets[a]) < std::popcount(sets[b]); });
  std::vector<std::string> names;
  std::vector<std::uint64_t> sorted;
  for (std::size_t i : order) {
    names.push_back(space.opens[i].first);
    sorted.push_back(sets[i]);
  }
  const std::size_t n = names.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) leq[i][j] = (sorted[i] & ~sorted[j]) == 0;
  CategoryPtr c = share(poset_category(names, leq));

  Pretopology cov;
  cov.families.resize(n);
  for (ObjectId u = 0; u < static_cast<ObjectId>(n); ++u) {
    const auto into = members(c->arrows_into(u));
    for (std::uint64_t pick = 0; pick < (1ull << into.size()); ++pick) {
      ArrowSet fam = 0;
      std::uint64_t covered = 0;
      for (std::size_t k = 0; k < into.size(); ++k)
        if (pick >> k & 1) {
          fam |= arrow_bit(into[k]);
          covered |= sorted[c->source(into[k])];
        }
      if (covered == sorted[u]) cov.families[u].push_back(fam);
    }
  }
  ArrowClass all = c->all_arrows();
  return {make_site(c, std::move(cov)), all};
}

}  // namespace geoctx
