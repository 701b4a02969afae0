#include "geoctx/presheaf.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace geoctx {

Presheaf::Presheaf(CategoryPtr category, std::vector<std::vector<std::string>> labels,
                   std::vector<std::vector<int>> restrictions)
    : category_(std::move(category)), labels_(std::move(labels)), restrictions_(std::move(restrictions)) {
  const FiniteCategory& c = *category_;
  if (labels_.size() != static_cast<std::size_t>(c.object_count()))
    throw Error(ErrorCode::NotAPresheaf, "value sets do not match the objects");
  if (restrictions_.size() != static_cast<std::size_t>(c.arrow_count()))
    throw Error(ErrorCode::NotAPresheaf, "restrictions do not match the arrows");
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    std::set<std::string_view> seen;
    for (const auto& l : labels_[u])
      if (!seen.insert(l).second)
        throw Error(ErrorCode::NotAPresheaf, "duplicate element '" + l + "' at " + c.object_name(u));
  }
  for (ArrowId a = 0; a < c.arrow_count(); ++a) {
    const auto& r = restrictions_[a];
    if (r.size() != labels_[c.target(a)].size())
      throw Error(ErrorCode::NotAPresheaf, "restriction along " + c.arrow_name(a) + " is not total");
    for (int y : r)
      if (y < 0 || y >= size(c.source(a)))
        throw Error(ErrorCode::NotAPresheaf, "restriction along " + c.arrow_name(a) + " leaves the value set");
  }
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    const auto& r = restrictions_[c.identity(u)];
    for (int x = 0; x < size(u); ++x)
      if (r[x] != x)
        throw Error(ErrorCode::NotAPresheaf, "restriction along " + c.arrow_name(c.identity(u)) +
                                                 " moves '" + labels_[u][x] + "'");
  }
  for (ArrowId g = 0; g < c.arrow_count(); ++g)
    for (ArrowId f : members(c.arrows_into(c.source(g)))) {
      ArrowId gf = c.compose(g, f);
      for (int x = 0; x < size(c.target(g)); ++x)
        if (restrictions_[gf][x] != restrictions_[f][restrictions_[g][x]])
          throw Error(ErrorCode::NotAPresheaf, "restriction along " + c.arrow_name(gf) + " differs from " +
                                                   c.arrow_name(g) + " then " + c.arrow_name(f) + " at '" +
                                                   labels_[c.target(g)][x] + "'");
    }
}

int Presheaf::total_size() const {
  int n = 0;
  for (const auto& l : labels_) n += static_cast<int>(l.size());
  return n;
}

std::optional<int> Presheaf::find(ObjectId u, std::string_view label) const {
  const auto& ls = labels_[u];
  for (std::size_t i = 0; i < ls.size(); ++i)
    if (ls[i] == label) return static_cast<int>(i);
  return std::nullopt;
}

bool Presheaf::operator==(const Presheaf& other) const {
  return (category_ == other.category_ || *category_ == *other.category_) && labels_ == other.labels_ &&
         restrictions_ == other.restrictions_;
}

PresheafPtr make_presheaf(CategoryPtr category, std::vector<std::vector<std::string>> labels,
                          std::vector<std::vector<int>> restrictions) {
  return std::make_shared<const Presheaf>(std::move(category), std::move(labels), std::move(restrictions));
}

bool same_presheaf(const PresheafPtr& a, const PresheafPtr& b) { return a == b || *a == *b; }

std::string describe(const Presheaf& f) {
  std::ostringstream os;
  const auto& c = f.category();
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    os << c.object_name(u) << ": {";
    for (int x = 0; x < f.size(u); ++x) os << (x ? ", " : "") << f.label(u, x);
    os << "}\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

NatTrans make_nat_trans(PresheafPtr source, PresheafPtr target, std::vector<std::vector<int>> components) {
  const FiniteCategory& c = source->category();
  if (components.size() != static_cast<std::size_t>(c.object_count()))
    throw Error(ErrorCode::NotNatural, "components do not match the objects");
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    if (components[u].size() != static_cast<std::size_t>(source->size(u)))
      throw Error(ErrorCode::NotNatural, "component at " + c.object_name(u) + " is not total");
    for (int y : components[u])
      if (y < 0 || y >= target->size(u))
        throw Error(ErrorCode::ElementNotInValueSet, "component at " + c.object_name(u) + " leaves the target");
  }
  for (ArrowId a = 0; a < c.arrow_count(); ++a) {
    ObjectId u = c.target(a), v = c.source(a);
    for (int x = 0; x < source->size(u); ++x)
      if (target->restrict(a, components[u][x]) != components[v][source->restrict(a, x)])
        throw Error(ErrorCode::NotNatural,
                    "square along " + c.arrow_name(a) + " fails at '" + source->label(u, x) + "'");
  }
  return {std::move(source), std::move(target), std::move(components)};
}

NatTrans identity_nat(const PresheafPtr& f) {
  std::vector<std::vector<int>> comp(f->category().object_count());
  for (ObjectId u = 0; u < f->category().object_count(); ++u) {
    comp[u].resize(f->size(u));
    std::iota(comp[u].begin(), comp[u].end(), 0);
  }
  return {f, f, std::move(comp)};
}

NatTrans compose(const NatTrans& outer, const NatTrans& inner) {
  std::vector<std::vector<int>> comp(inner.components.size());
  for (std::size_t u = 0; u < comp.size(); ++u)
    for (int y : inner.components[u]) comp[u].push_back(outer.components[u][y]);
  return {inner.source, outer.target, std::move(comp)};
}

bool same_components(const NatTrans& a, const NatTrans& b) { return a.components == b.components; }

bool is_pointwise_injective(const NatTrans& f) {
  for (std::size_t u = 0; u < f.components.size(); ++u) {
    std::vector<bool> hit(f.target->size(static_cast<ObjectId>(u)), false);
    for (int y : f.components[u]) {
      if (hit[y]) return false;
      hit[y] = true;
    }
  }
  return true;
}

bool is_pointwise_surjective(const NatTrans& f) {
  for (std::size_t u = 0; u < f.components.size(); ++u) {
    std::vector<bool> hit(f.target->size(static_cast<ObjectId>(u)), false);
    for (int y : f.components[u]) hit[y] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) return false;
  }
  return true;
}

bool is_pointwise_bijective(const NatTrans& f) { return is_pointwise_injective(f) && is_pointwise_surjective(f); }

std::optional<NatTrans> inverse_of(const NatTrans& f) {
  if (!is_pointwise_bijective(f)) return std::nullopt;
  std::vector<std::vector<int>> comp(f.components.size());
  for (std::size_t u = 0; u < comp.size(); ++u) {
    comp[u].resize(f.components[u].size());
    for (std::size_t x = 0; x < comp[u].size(); ++x) comp[u][f.components[u][x]] = static_cast<int>(x);
  }
  return NatTrans{f.target, f.source, std::move(comp)};
}

// ---------------------------------------------------------------------------

PresheafPtr yoneda(const CategoryPtr& c, ObjectId u) {
  if (u < 0 || u >= c->object_count()) throw Error(ErrorCode::UnknownObject, "object index " + std::to_string(u));
  std::vector<std::vector<std::string>> labels(c->object_count());
  for (ObjectId v = 0; v < c->object_count(); ++v)
    for (ArrowId a : c->hom(v, u)) labels[v].push_back(c->arrow_name(a));
  std::vector<std::vector<int>> restr(c->arrow_count());
  for (ArrowId f = 0; f < c->arrow_count(); ++f)
    for (ArrowId a : c->hom(c->target(f), u)) restr[f].push_back(c->hom_index(c->compose(a, f)));
  return make_presheaf(c, std::move(labels), std::move(restr));
}

NatTrans yoneda_arrow(const PresheafPtr& h_source, const PresheafPtr& h_target, ArrowId phi) {
  const FiniteCategory& c = h_source->category();
  ObjectId u = c.source(phi);
  std::vector<std::vector<int>> comp(c.object_count());
  for (ObjectId v = 0; v < c.object_count(); ++v)
    for (ArrowId a : c.hom(v, u)) comp[v].push_back(c.hom_index(c.compose(phi, a)));
  return {h_source, h_target, std::move(comp)};
}

NatTrans yoneda_correspond(const PresheafPtr& h_u, const PresheafPtr& f, ObjectId u, int s) {
  const FiniteCategory& c = f->category();
  if (s < 0 || s >= f->size(u))
    throw Error(ErrorCode::ElementNotInValueSet, "no element " + std::to_string(s) + " at " + c.object_name(u));
  std::vector<std::vector<int>> comp(c.object_count());
  for (ObjectId v = 0; v < c.object_count(); ++v)
    for (ArrowId a : c.hom(v, u)) comp[v].push_back(f->restrict(a, s));
  return {h_u, f, std::move(comp)};
}

NatTrans yoneda_correspond(const PresheafPtr& f, ObjectId u, int s) {
  return yoneda_correspond(yoneda(f->category_ptr(), u), f, u, s);
}

int yoneda_evaluate(const NatTrans& alpha, ObjectId u) {
  const FiniteCategory& c = alpha.category();
  return alpha(u, c.hom_index(c.identity(u)));
}

// ---------------------------------------------------------------------------

bool is_sieve(const FiniteCategory& c, const Sieve& s) {
  if ((s.arrows & ~c.arrows_into(s.anchor)) != 0) return false;
  for (ArrowId a : members(s.arrows))
    if ((c.principal_sieve(a) & ~s.arrows) != 0) return false;
  return true;
}

Sieve maximal_sieve(const FiniteCategory& c, ObjectId u) { return {u, c.arrows_into(u)}; }

ArrowSet pullback_arrows(const FiniteCategory& c, ArrowId phi, ArrowSet r) {
  ArrowSet out = 0;
  for (ArrowId psi : members(c.arrows_into(c.source(phi))))
    if (contains(r, c.compose(phi, psi))) out |= arrow_bit(psi);
  return out;
}

Sieve pullback_sieve(const FiniteCategory& c, ArrowId phi, const Sieve& r) {
  if (c.target(phi) != r.anchor)
    throw Error(ErrorCode::AnchorMismatch, c.arrow_name(phi) + " does not land in " + c.object_name(r.anchor));
  return {c.source(phi), pullback_arrows(c, phi, r.arrows)};
}

ArrowSet generated_arrows(const FiniteCategory& c, ArrowSet family) {
  ArrowSet out = 0;
  for (ArrowId a : members(family)) out |= c.principal_sieve(a);
  return out;
}

Sieve sieve_generated_by(const FiniteCategory& c, ObjectId u, ArrowSet family) {
  for (ArrowId a : members(family))
    if (c.target(a) != u)
      throw Error(ErrorCode::MixedTargets, c.arrow_name(a) + " does not land in " + c.object_name(u));
  return {u, generated_arrows(c, family)};
}

std::vector<ArrowSet> all_sieves(const FiniteCategory& c, ObjectId u) {
  // Every sieve is a union of principal sieves.
  std::set<ArrowSet> seen{0};
  std::vector<ArrowSet> frontier{0};
  const auto into = members(c.arrows_into(u));
  while (!frontier.empty()) {
    std::vector<ArrowSet> next;
    for (ArrowSet s : frontier)
      for (ArrowId a : into) {
        ArrowSet t = s | c.principal_sieve(a);
        if (seen.insert(t).second) next.push_back(t);
      }
    frontier = std::move(next);
  }
  std::vector<ArrowSet> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), [](ArrowSet a, ArrowSet b) {
    int pa = popcount(a), pb = popcount(b);
    return pa != pb ? pa > pb : a < b;
  });
  return out;
}

ArrowSet sieve_generators(const FiniteCategory& c, ArrowSet s) {
  // Maximal members under factorization, least arrow per equivalence class.
  ArrowSet out = 0;
  for (ArrowId a : members(s)) {
    bool keep = true;
    for (ArrowId b : members(s)) {
      if (b == a || !contains(c.principal_sieve(b), a)) continue;
      if (!contains(c.principal_sieve(a), b) || b < a) {
        keep = false;
        break;
      }
    }
    if (keep) out |= arrow_bit(a);
  }
  return out;
}

// ---------------------------------------------------------------------------

int Subpresheaf::size(ObjectId u) const {
  return static_cast<int>(std::count(members[u].begin(), members[u].end(), true));
}

bool Subpresheaf::is_stable() const {
  const FiniteCategory& c = parent->category();
  for (ArrowId a = 0; a < c.arrow_count(); ++a)
    for (int x = 0; x < parent->size(c.target(a)); ++x)
      if (members[c.target(a)][x] && !members[c.source(a)][parent->restrict(a, x)]) return false;
  return true;
}

bool Subpresheaf::operator==(const Subpresheaf& other) const {
  return same_presheaf(parent, other.parent) && members == other.members;
}

namespace {

Subpresheaf filled(const PresheafPtr& parent, bool value) {
  Subpresheaf s{parent, {}};
  for (ObjectId u = 0; u < parent->category().object_count(); ++u) s.members.emplace_back(parent->size(u), value);
  return s;
}

void require_same_parent(const Subpresheaf& a, const Subpresheaf& b) {
  if (!same_presheaf(a.parent, b.parent))
    throw Error(ErrorCode::ParentMismatch, "subobjects of different presheaves");
}

}  // namespace

Subpresheaf full_subpresheaf(const PresheafPtr& parent) { return filled(parent, true); }
Subpresheaf empty_subpresheaf(const PresheafPtr& parent) { return filled(parent, false); }

Subpresheaf intersect(const Subpresheaf& a, const Subpresheaf& b) {
  require_same_parent(a, b);
  Subpresheaf s = a;
  for (std::size_t u = 0; u < s.members.size(); ++u)
    for (std::size_t x = 0; x < s.members[u].size(); ++x) s.members[u][x] = a.members[u][x] && b.members[u][x];
  return s;
}

Subpresheaf unite(const Subpresheaf& a, const Subpresheaf& b) {
  require_same_parent(a, b);
  Subpresheaf s = a;
  for (std::size_t u = 0; u < s.members.size(); ++u)
    for (std::size_t x = 0; x < s.members[u].size(); ++x) s.members[u][x] = a.members[u][x] || b.members[u][x];
  return s;
}

bool is_subset(const Subpresheaf& a, const Subpresheaf& b) {
  require_same_parent(a, b);
  for (std::size_t u = 0; u < a.members.size(); ++u)
    for (std::size_t x = 0; x < a.members[u].size(); ++x)
      if (a.members[u][x] && !b.members[u][x]) return false;
  return true;
}

Subpresheaf generated_subpresheaf(const PresheafPtr& parent, const std::vector<std::pair<ObjectId, int>>& elements) {
  Subpresheaf s = empty_subpresheaf(parent);
  const FiniteCategory& c = parent->category();
  for (auto [u, x] : elements)
    for (ArrowId a : members(c.arrows_into(u))) s.members[c.source(a)][parent->restrict(a, x)] = true;
  return s;
}

Subpresheaf image_of(const NatTrans& f) {
  Subpresheaf s = empty_subpresheaf(f.target);
  for (std::size_t u = 0; u < f.components.size(); ++u)
    for (int y : f.components[u]) s.members[u][y] = true;
  return s;
}

Subpresheaf preimage(const NatTrans& f, const Subpresheaf& s) {
  if (!same_presheaf(f.target, s.parent))
    throw Error(ErrorCode::ParentMismatch, "preimage along a morphism into a different presheaf");
  Subpresheaf out = empty_subpresheaf(f.source);
  for (std::size_t u = 0; u < f.components.size(); ++u)
    for (std::size_t x = 0; x < f.components[u].size(); ++x) out.members[u][x] = s.members[u][f.components[u][x]];
  return out;
}

Subpresheaf sieve_as_subpresheaf(const PresheafPtr& h_u, const Sieve& s) {
  const FiniteCategory& c = h_u->category();
  Subpresheaf out = empty_subpresheaf(h_u);
  for (ArrowId a : members(s.arrows)) {
    if (c.target(a) != s.anchor) throw Error(ErrorCode::AnchorMismatch, c.arrow_name(a));
    out.members[c.source(a)][c.hom_index(a)] = true;
  }
  return out;
}

Sieve subpresheaf_as_sieve(const Subpresheaf& s, ObjectId u) {
  const FiniteCategory& c = s.parent->category();
  Sieve out{u, 0};
  for (ObjectId v = 0; v < c.object_count(); ++v) {
    auto hom = c.hom(v, u);
    if (static_cast<int>(hom.size()) != s.parent->size(v))
      throw Error(ErrorCode::AnchorMismatch, "parent is not the representable of " + c.object_name(u));
    for (std::size_t i = 0; i < hom.size(); ++i)
      if (s.members[v][i]) out.arrows |= arrow_bit(hom[i]);
  }
  return out;
}

Materialized materialize(const Subpresheaf& s) {
  const Presheaf& p = *s.parent;
  const FiniteCategory& c = p.category();
  std::vector<std::vector<int>> index(c.object_count());
  std::vector<std::vector<std::string>> labels(c.object_count());
  std::vector<std::vector<int>> incl(c.object_count());
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    index[u].assign(p.size(u), -1);
    for (int x = 0; x < p.size(u); ++x)
      if (s.members[u][x]) {
        index[u][x] = static_cast<int>(labels[u].size());
        labels[u].push_back(p.label(u, x));
        incl[u].push_back(x);
      }
  }
  std::vector<std::vector<int>> restr(c.arrow_count());
  for (ArrowId a = 0; a < c.arrow_count(); ++a)
    for (int x : incl[c.target(a)]) {
      int y = index[c.source(a)][p.restrict(a, x)];
      if (y < 0) throw Error(ErrorCode::NotAPresheaf, "subobject is not closed under " + c.arrow_name(a));
      restr[a].push_back(y);
    }
  auto sub = make_presheaf(p.category_ptr(), std::move(labels), std::move(restr));
  return {sub, NatTrans{sub, s.parent, std::move(incl)}};
}

// ---------------------------------------------------------------------------

namespace {

std::string tuple_label(const std::vector<PresheafPtr>& nodes, ObjectId u, const std::vector<int>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += nodes[i]->label(u, t[i]);
  }
  return s + ")";
}

// Limit over the given nodes, restricted to tuples accepted by `keep`.
template <class Keep>
LimitCone limit_of(const CategoryPtr& cp, const std::vector<PresheafPtr>& nodes, Keep keep) {
  const FiniteCategory& c = *cp;
  LimitCone out;
  out.tuples.resize(c.object_count());
  std::vector<std::vector<std::string>> labels(c.object_count());
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    std::vector<int> t(nodes.size(), 0);
    bool empty = false;
    for (const auto& n : nodes) empty = empty || n->size(u) == 0;
    if (empty) continue;
    while (true) {
      if (keep(u, t)) {
        out.tuples[u].push_back(t);
        labels[u].push_back(nodes.empty() ? "*" : tuple_label(nodes, u, t));
      }
      bool done = true;
      for (std::size_t i = nodes.size(); i-- > 0;) {
        if (++t[i] < nodes[i]->size(u)) {
          done = false;
          break;
        }
        t[i] = 0;
      }
      if (done) break;
    }
  }
  std::vector<std::map<std::vector<int>, int>> lookup(c.object_count());
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (std::size_t k = 0; k < out.tuples[u].size(); ++k) lookup[u][out.tuples[u][k]] = static_cast<int>(k);
  std::vector<std::vector<int>> restr(c.arrow_count());
  for (ArrowId a = 0; a < c.arrow_count(); ++a)
    for (const auto& t : out.tuples[c.target(a)]) {
      std::vector<int> r(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) r[i] = nodes[i]->restrict(a, t[i]);
      auto it = lookup[c.source(a)].find(r);
      if (it == lookup[c.source(a)].end()) throw Error(ErrorCode::Internal, "limit is not closed under restriction");
      restr[a].push_back(it->second);
    }
  out.apex = make_presheaf(cp, std::move(labels), std::move(restr));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::vector<std::vector<int>> comp(c.object_count());
    for (ObjectId u = 0; u < c.object_count(); ++u)
      for (const auto& t : out.tuples[u]) comp[u].push_back(t[i]);
    out.legs.push_back({out.apex, nodes[i], std::move(comp)});
  }
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // Keeps the smaller index as root, so roots are least members.
  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent[b] = a;
    else parent[a] = b;
  }
};

}  // namespace

LimitCone presheaf_limit(const CategoryPtr& c, const Diagram& d) {
  return limit_of(c, d.nodes, [&](ObjectId u, const std::vector<int>& t) {
    for (const auto& e : d.edges)
      if (e.map(u, t[e.from]) != t[e.to]) return false;
    return true;
  });
}

ColimitCocone presheaf_colimit(const CategoryPtr& cp, const Diagram& d) {
  const FiniteCategory& c = *cp;
  ColimitCocone out;
  out.reps.resize(c.object_count());
  std::vector<std::vector<std::string>> labels(c.object_count());
  // offsets[u][i] = start of node i inside the pointwise coproduct at u.
  std::vector<std::vector<int>> offsets(c.object_count());
  std::vector<std::vector<int>> class_of(c.object_count());
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    int total = 0;
    for (const auto& n : d.nodes) {
      offsets[u].push_back(total);
      total += n->size(u);
    }
    UnionFind uf(total);
    for (const auto& e : d.edges)
      for (int x = 0; x < d.nodes[e.from]->size(u); ++x)
        uf.join(offsets[u][e.from] + x, offsets[u][e.to] + e.map(u, x));
    class_of[u].assign(total, -1);
    std::vector<std::pair<int, int>> node_of(total);
    for (std::size_t i = 0; i < d.nodes.size(); ++i)
      for (int x = 0; x < d.nodes[i]->size(u); ++x) node_of[offsets[u][i] + x] = {static_cast<int>(i), x};
    for (int k = 0; k < total; ++k)
      if (uf.find(k) == k) {
        class_of[u][k] = static_cast<int>(out.reps[u].size());
        out.reps[u].push_back(node_of[k]);
      }
    for (int k = 0; k < total; ++k) class_of[u][k] = class_of[u][uf.find(k)];
    for (auto [i, x] : out.reps[u]) labels[u].push_back(d.nodes[i]->label(u, x));
  }
  bool unique = true;
  for (auto& ls : labels) {
    std::set<std::string_view> seen(ls.begin(), ls.end());
    unique = unique && seen.size() == ls.size();
  }
  if (!unique)
    for (ObjectId u = 0; u < c.object_count(); ++u)
      for (std::size_t k = 0; k < labels[u].size(); ++k)
        labels[u][k] = std::to_string(out.reps[u][k].first) + ":" + labels[u][k];
  std::vector<std::vector<int>> restr(c.arrow_count());
  for (ArrowId a = 0; a < c.arrow_count(); ++a)
    for (auto [i, x] : out.reps[c.target(a)])
      restr[a].push_back(class_of[c.source(a)][offsets[c.source(a)][i] + d.nodes[i]->restrict(a, x)]);
  out.apex = make_presheaf(cp, std::move(labels), std::move(restr));
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    std::vector<std::vector<int>> comp(c.object_count());
    for (ObjectId u = 0; u < c.object_count(); ++u)
      for (int x = 0; x < d.nodes[i]->size(u); ++x) comp[u].push_back(class_of[u][offsets[u][i] + x]);
    out.legs.push_back({d.nodes[i], out.apex, std::move(comp)});
  }
  return out;
}

PresheafPtr terminal_presheaf(const CategoryPtr& c) { return presheaf_limit(c, {}).apex; }
PresheafPtr initial_presheaf(const CategoryPtr& c) { return presheaf_colimit(c, {}).apex; }

LimitCone product(const PresheafPtr& a, const PresheafPtr& b) {
  return presheaf_limit(a->category_ptr(), Diagram{{a, b}, {}});
}

LimitCone product(const CategoryPtr& c, const std::vector<PresheafPtr>& factors) {
  return presheaf_limit(c, Diagram{factors, {}});
}

LimitCone pullback(const NatTrans& f, const NatTrans& g) {
  return limit_of(f.source->category_ptr(), {f.source, g.source},
                  [&](ObjectId u, const std::vector<int>& t) { return f(u, t[0]) == g(u, t[1]); });
}

LimitCone equalizer(const NatTrans& f, const NatTrans& g) {
  Subpresheaf s = empty_subpresheaf(f.source);
  for (std::size_t u = 0; u < f.components.size(); ++u)
    for (std::size_t x = 0; x < f.components[u].size(); ++x) s.members[u][x] = f.components[u][x] == g.components[u][x];
  auto m = materialize(s);
  LimitCone out{m.presheaf, {m.inclusion}, {}};
  for (const auto& comp : m.inclusion.components) {
    out.tuples.emplace_back();
    for (int x : comp) out.tuples.back().push_back({x});
  }
  return out;
}

ColimitCocone coproduct(const CategoryPtr& c, const std::vector<PresheafPtr>& parts) {
  return presheaf_colimit(c, Diagram{parts, {}});
}

ColimitCocone pushout(const NatTrans& f, const NatTrans& g) {
  Diagram d{{f.target, g.target, f.source}, {{2, 0, f}, {2, 1, g}}};
  auto out = presheaf_colimit(f.source->category_ptr(), d);
  out.legs.pop_back();
  return out;
}

ColimitCocone coequalizer(const NatTrans& f, const NatTrans& g) {
  Diagram d{{f.target, f.source}, {{1, 0, f}, {1, 0, g}}};
  auto out = presheaf_colimit(f.source->category_ptr(), d);
  out.legs.pop_back();
  return out;
}

NatTrans mediate(const LimitCone& cone, const PresheafPtr& x, const std::vector<NatTrans>& legs) {
  const FiniteCategory& c = x->category();
  std::vector<std::vector<int>> comp(c.object_count());
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    std::map<std::vector<int>, int> lookup;
    for (std::size_t k = 0; k < cone.tuples[u].size(); ++k) lookup[cone.tuples[u][k]] = static_cast<int>(k);
    for (int e = 0; e < x->size(u); ++e) {
      std::vector<int> t;
      for (const auto& l : legs) t.push_back(l(u, e));
      auto it = lookup.find(t);
      if (it == lookup.end())
        throw Error(ErrorCode::NotNatural, "legs do not form a cone at " + c.object_name(u));
      comp[u].push_back(it->second);
    }
  }
  return {x, cone.apex, std::move(comp)};
}

NatTrans mediate(const ColimitCocone& cocone, const PresheafPtr& x, const std::vector<NatTrans>& legs) {
  const FiniteCategory& c = x->category();
  std::vector<std::vector<int>> comp(c.object_count());
  for (ObjectId u = 0; u < c.object_count(); ++u)
    for (auto [i, e] : cocone.reps[u]) comp[u].push_back(legs[i](u, e));
  // The representative choice is only well defined for a cocone.
  NatTrans out{cocone.apex, x, std::move(comp)};
  for (std::size_t i = 0; i < legs.size(); ++i)
    if (!same_components(compose(out, cocone.legs[i]), legs[i]))
      throw Error(ErrorCode::NotNatural, "legs do not form a cocone");
  return out;
}

}  // namespace geoctx
