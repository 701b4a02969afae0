#include "geoctx/category.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>
#include <unordered_map>

namespace geoctx {

int popcount(ArrowSet s) { return std::popcount(s); }

std::vector<ArrowId> members(ArrowSet s) {
  std::vector<ArrowId> out;
  while (s) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownObject: return "UnknownObject";
    case ErrorCode::UnknownArrow: return "UnknownArrow";
    case ErrorCode::MissingComposite: return "MissingComposite";
    case ErrorCode::IllTypedComposite: return "IllTypedComposite";
    case ErrorCode::NonAssociative: return "NonAssociative";
    case ErrorCode::IdentityLawBroken: return "IdentityLawBroken";
    case ErrorCode::ResourceBound: return "ResourceBound";
    case ErrorCode::NotAPresheaf: return "NotAPresheaf";
    case ErrorCode::NotNatural: return "NotNatural";
    case ErrorCode::ElementNotInValueSet: return "ElementNotInValueSet";
    case ErrorCode::AnchorMismatch: return "AnchorMismatch";
    case ErrorCode::MixedTargets: return "MixedTargets";
    case ErrorCode::ParentMismatch: return "ParentMismatch";
    case ErrorCode::NotASheaf: return "NotASheaf";
    case ErrorCode::NotAnEquivalenceRelation: return "NotAnEquivalenceRelation";
    case ErrorCode::NotATopology: return "NotATopology";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::PullbacksMissingInC: return "PullbacksMissingInC";
    case ErrorCode::GluingConditionViolated: return "GluingConditionViolated";
    case ErrorCode::NotAnOpenAtlas: return "NotAnOpenAtlas";
    case ErrorCode::InternalRouteDisagreement: return "InternalRouteDisagreement";
    case ErrorCode::Internal: return "Internal";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::DuplicateId: return "DuplicateId";
  }
  return "Unknown";
}

namespace {

constexpr ArrowId kNone = -1;

}  // namespace

FiniteCategory FiniteCategory::validate(const RawCategory& raw) {
  FiniteCategory c;
  std::unordered_map<std::string, ObjectId> object_index;
  std::unordered_map<std::string, ArrowId> arrow_index;

  if (raw.objects.size() > static_cast<std::size_t>(kMaxObjects))
    throw Error(ErrorCode::ResourceBound, "more than " + std::to_string(kMaxObjects) + " objects");
  if (raw.arrows.size() > static_cast<std::size_t>(kMaxArrows))
    throw Error(ErrorCode::ResourceBound, "more than " + std::to_string(kMaxArrows) + " arrows");

  for (const auto& name : raw.objects) {
    if (!object_index.emplace(name, c.object_count()).second)
      throw Error(ErrorCode::DuplicateId, "object '" + name + "' declared twice");
    c.objects_.push_back(name);
  }
  auto object_of = [&](const std::string& name, const std::string& context) {
    auto it = object_index.find(name);
    if (it == object_index.end())
      throw Error(ErrorCode::UnknownObject, "'" + name + "' in " + context);
    return it->second;
  };
  for (const auto& a : raw.arrows) {
    if (!arrow_index.emplace(a.name, c.arrow_count()).second)
      throw Error(ErrorCode::DuplicateId, "arrow '" + a.name + "' declared twice");
    c.arrows_.push_back({a.name, object_of(a.source, "arrow " + a.name), object_of(a.target, "arrow " + a.name)});
  }
  auto arrow_of = [&](const std::string& name, const std::string& context) {
    auto it = arrow_index.find(name);
    if (it == arrow_index.end())
      throw Error(ErrorCode::UnknownArrow, "'" + name + "' in " + context);
    return it->second;
  };

  c.identity_.assign(c.objects_.size(), kNone);
  for (const auto& [obj, arrow] : raw.identities) {
    ObjectId u = object_of(obj, "identity declaration");
    ArrowId a = arrow_of(arrow, "identity of " + obj);
    if (c.source(a) != u || c.target(a) != u)
      throw Error(ErrorCode::IdentityLawBroken, "identity '" + arrow + "' of " + obj + " is not an endo-arrow");
    c.identity_[u] = a;
  }
  for (ObjectId u = 0; u < c.object_count(); ++u)
    if (c.identity_[u] == kNone)
      throw Error(ErrorCode::IdentityLawBroken, "object '" + c.objects_[u] + "' has no identity");

  const std::size_t m = c.arrows_.size();
  c.table_.assign(m * m, kNone);
  for (const auto& comp : raw.composites) {
    const std::string where = comp.outer + " . " + comp.inner + " = " + comp.result;
    ArrowId g = arrow_of(comp.outer, where), f = arrow_of(comp.inner, where), h = arrow_of(comp.result, where);
    if (c.target(f) != c.source(g))
      throw Error(ErrorCode::IllTypedComposite, where + ": arrows are not composable");
    if (c.source(h) != c.source(f) || c.target(h) != c.target(g))
      throw Error(ErrorCode::IllTypedComposite, where + ": result has the wrong source or target");
    ArrowId& slot = c.table_[g * m + f];
    if (slot != kNone && slot != h)
      throw Error(ErrorCode::IllTypedComposite, where + ": conflicts with " + c.arrow_name(slot));
    slot = h;
  }
  // Composites with identities may be left implicit.
  for (ArrowId f = 0; f < static_cast<ArrowId>(m); ++f) {
    ArrowId& left = c.table_[c.identity_[c.target(f)] * m + f];
    if (left == kNone) left = f;
    ArrowId& right = c.table_[f * m + c.identity_[c.source(f)]];
    if (right == kNone) right = f;
  }
  for (ArrowId g = 0; g < static_cast<ArrowId>(m); ++g)
    for (ArrowId f = 0; f < static_cast<ArrowId>(m); ++f)
      if (c.composable(g, f) && c.compose(g, f) == kNone)
        throw Error(ErrorCode::MissingComposite, c.arrow_name(g) + " . " + c.arrow_name(f));
  for (ArrowId f = 0; f < static_cast<ArrowId>(m); ++f) {
    if (c.compose(c.identity_[c.target(f)], f) != f)
      throw Error(ErrorCode::IdentityLawBroken,
                  c.arrow_name(c.identity_[c.target(f)]) + " . " + c.arrow_name(f) + " != " + c.arrow_name(f));
    if (c.compose(f, c.identity_[c.source(f)]) != f)
      throw Error(ErrorCode::IdentityLawBroken,
                  c.arrow_name(f) + " . " + c.arrow_name(c.identity_[c.source(f)]) + " != " + c.arrow_name(f));
  }
  for (ArrowId h = 0; h < static_cast<ArrowId>(m); ++h)
    for (ArrowId g = 0; g < static_cast<ArrowId>(m); ++g) {
      if (!c.composable(h, g)) continue;
      for (ArrowId f = 0; f < static_cast<ArrowId>(m); ++f) {
        if (!c.composable(g, f)) continue;
        if (c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f))
          throw Error(ErrorCode::NonAssociative,
                      "(" + c.arrow_name(h) + ", " + c.arrow_name(g) + ", " + c.arrow_name(f) + ")");
      }
    }
  c.build_indices();
  return c;
}

void FiniteCategory::build_indices() {
  const std::size_t n = objects_.size(), m = arrows_.size();
  hom_.assign(n * n, {});
  into_.assign(n, 0);
  from_.assign(n, 0);
  hom_pos_.assign(m, 0);
  for (ArrowId a = 0; a < static_cast<ArrowId>(m); ++a) {
    auto& hs = hom_[source(a) * n + target(a)];
    hom_pos_[a] = static_cast<int>(hs.size());
    hs.push_back(a);
    into_[target(a)] |= arrow_bit(a);
    from_[source(a)] |= arrow_bit(a);
  }
  principal_.assign(m, 0);
  for (ArrowId a = 0; a < static_cast<ArrowId>(m); ++a)
    for (ArrowId b : members(into_[source(a)])) principal_[a] |= arrow_bit(compose(a, b));
  iso_rep_.assign(m, 0);
  for (ArrowId a = 0; a < static_cast<ArrowId>(m); ++a) {
    ArrowId best = a;
    for (ArrowId u : members(into_[source(a)]))
      if (is_isomorphism(u)) best = std::min(best, compose(a, u));
    iso_rep_[a] = best;
  }
}

std::optional<ObjectId> FiniteCategory::find_object(const std::string& name) const {
  for (ObjectId u = 0; u < object_count(); ++u)
    if (objects_[u] == name) return u;
  return std::nullopt;
}

std::optional<ArrowId> FiniteCategory::find_arrow(const std::string& name) const {
  for (ArrowId a = 0; a < arrow_count(); ++a)
    if (arrows_[a].name == name) return a;
  return std::nullopt;
}

ArrowSet FiniteCategory::all_arrows() const {
  return arrows_.size() == 64 ? ~ArrowSet{0} : (arrow_bit(static_cast<ArrowId>(arrows_.size())) - 1);
}

std::optional<ArrowId> FiniteCategory::inverse(ArrowId a) const {
  for (ArrowId b : hom(target(a), source(a)))
    if (compose(a, b) == identity(target(a)) && compose(b, a) == identity(source(a))) return b;
  return std::nullopt;
}

bool FiniteCategory::is_isomorphism(ArrowId a) const { return inverse(a).has_value(); }

ArrowSet FiniteCategory::normalize_up_to_iso(ArrowSet family) const {
  ArrowSet out = 0;
  for (ArrowId a : members(family)) out |= arrow_bit(iso_rep_[a]);
  return out;
}

RawCategory FiniteCategory::to_raw() const {
  RawCategory raw;
  raw.objects = objects_;
  for (const auto& a : arrows_) raw.arrows.push_back({a.name, objects_[a.source], objects_[a.target]});
  for (ObjectId u = 0; u < object_count(); ++u) raw.identities[objects_[u]] = arrow_name(identity_[u]);
  for (ArrowId g = 0; g < arrow_count(); ++g)
    for (ArrowId f = 0; f < arrow_count(); ++f)
      if (composable(g, f)) raw.composites.push_back({arrow_name(g), arrow_name(f), arrow_name(compose(g, f))});
  return raw;
}

bool FiniteCategory::operator==(const FiniteCategory& other) const {
  if (object_count() != other.object_count() || arrow_count() != other.arrow_count()) return false;
  std::set<std::string> mine(objects_.begin(), objects_.end()), theirs(other.objects_.begin(), other.objects_.end());
  if (mine != theirs) return false;
  std::vector<ArrowId> to_other(arrows_.size());
  for (ArrowId a = 0; a < arrow_count(); ++a) {
    auto b = other.find_arrow(arrow_name(a));
    if (!b) return false;
    if (object_name(source(a)) != other.object_name(other.source(*b)) ||
        object_name(target(a)) != other.object_name(other.target(*b)))
      return false;
    to_other[a] = *b;
  }
  for (ObjectId u = 0; u < object_count(); ++u)
    if (to_other[identity(u)] != other.identity(*other.find_object(object_name(u)))) return false;
  for (ArrowId g = 0; g < arrow_count(); ++g)
    for (ArrowId f = 0; f < arrow_count(); ++f)
      if (composable(g, f) && to_other[compose(g, f)] != other.compose(to_other[g], to_other[f])) return false;
  return true;
}

FiniteCategory poset_category(const std::vector<std::string>& names, const std::vector<std::vector<bool>>& leq) {
  RawCategory raw;
  raw.objects = names;
  const std::size_t n = names.size();
  auto arrow_name = [&](std::size_t i, std::size_t j) {
    return i == j ? "id_" + names[i] : "i_" + names[i] + "_" + names[j];
  };
  for (std::size_t i = 0; i < n; ++i) {
    raw.arrows.push_back({arrow_name(i, i), names[i], names[i]});
    raw.identities[names[i]] = arrow_name(i, i);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && leq[i][j]) raw.arrows.push_back({arrow_name(i, j), names[i], names[j]});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (leq[i][j] && leq[j][k] && i != j && j != k) {
          if (!leq[i][k]) throw Error(ErrorCode::NotATopology, "order relation is not transitive");
          raw.composites.push_back({arrow_name(j, k), arrow_name(i, j), arrow_name(i, k)});
        }
  return FiniteCategory::validate(raw);
}

FiniteCategory discrete_category(const std::vector<std::string>& names) {
  std::vector<std::vector<bool>> leq(names.size(), std::vector<bool>(names.size(), false));
  for (std::size_t i = 0; i < names.size(); ++i) leq[i][i] = true;
  return poset_category(names, leq);
}

// ---------------------------------------------------------------------------
// Limits by enumeration of mediating arrows.

namespace {

// Does (apex, projections) represent the product of `factors`? For every
// test object X the map Hom(X, apex) -> prod_i Hom(X, factor_i) must be a
// bijection.
bool is_product(const FiniteCategory& c, const std::vector<ObjectId>& factors, ObjectId apex,
                const std::vector<ArrowId>& proj) {
  for (ObjectId x = 0; x < c.object_count(); ++x) {
    std::size_t cones = 1;
    for (ObjectId f : factors) cones *= c.hom(x, f).size();
    const auto maps = c.hom(x, apex);
    if (maps.size() != cones) return false;
    std::set<std::vector<ArrowId>> seen;
    for (ArrowId u : maps) {
      std::vector<ArrowId> image;
      for (ArrowId p : proj) image.push_back(c.compose(p, u));
      if (!seen.insert(image).second) return false;
    }
  }
  return true;
}

}  // namespace

std::optional<ProductWitness> terminal_object(const FiniteCategory& c) {
  for (ObjectId t = 0; t < c.object_count(); ++t)
    if (is_product(c, {}, t, {})) return ProductWitness{t, {}};
  return std::nullopt;
}

std::optional<ProductWitness> binary_product(const FiniteCategory& c, ObjectId a, ObjectId b) {
  for (ObjectId p = 0; p < c.object_count(); ++p)
    for (ArrowId pa : c.hom(p, a))
      for (ArrowId pb : c.hom(p, b))
        if (is_product(c, {a, b}, p, {pa, pb})) return ProductWitness{p, {pa, pb}};
  return std::nullopt;
}

bool is_pullback(const FiniteCategory& c, ArrowId f, ArrowId g, const PullbackWitness& w) {
  if (c.compose(f, w.first) != c.compose(g, w.second)) return false;
  const ObjectId a = c.source(f), b = c.source(g);
  for (ObjectId x = 0; x < c.object_count(); ++x) {
    std::size_t cones = 0;
    for (ArrowId u : c.hom(x, a))
      for (ArrowId v : c.hom(x, b))
        if (c.compose(f, u) == c.compose(g, v)) ++cones;
    const auto maps = c.hom(x, w.apex);
    if (maps.size() != cones) return false;
    std::set<std::pair<ArrowId, ArrowId>> seen;
    for (ArrowId m : maps)
      if (!seen.emplace(c.compose(w.first, m), c.compose(w.second, m)).second) return false;
  }
  return true;
}

std::vector<PullbackWitness> all_pullbacks(const FiniteCategory& c, ArrowId f, ArrowId g) {
  std::vector<PullbackWitness> out;
  if (c.target(f) != c.target(g)) return out;
  for (ObjectId p = 0; p < c.object_count(); ++p)
    for (ArrowId u : c.hom(p, c.source(f)))
      for (ArrowId v : c.hom(p, c.source(g))) {
        PullbackWitness w{p, u, v};
        if (is_pullback(c, f, g, w)) out.push_back(w);
      }
  return out;
}

std::optional<PullbackWitness> pullback(const FiniteCategory& c, ArrowId f, ArrowId g) {
  if (c.target(f) != c.target(g)) return std::nullopt;
  for (ObjectId p = 0; p < c.object_count(); ++p)
    for (ArrowId u : c.hom(p, c.source(f)))
      for (ArrowId v : c.hom(p, c.source(g))) {
        PullbackWitness w{p, u, v};
        if (is_pullback(c, f, g, w)) return w;
      }
  return std::nullopt;
}

bool is_cartesian_arrow(const FiniteCategory& c, ArrowId f) {
  for (ArrowId g : members(c.arrows_into(c.target(f))))
    if (!pullback(c, f, g)) return false;
  return true;
}

bool is_mono_in_C(const FiniteCategory& c, ArrowId f) {
  for (ObjectId x = 0; x < c.object_count(); ++x) {
    std::set<ArrowId> images;
    const auto maps = c.hom(x, c.source(f));
    for (ArrowId u : maps) images.insert(c.compose(f, u));
    if (images.size() != maps.size()) return false;
  }
  return true;
}

std::optional<ArrowId> product_iso(const FiniteCategory& c, const ProductWitness& a, const ProductWitness& b) {
  if (a.projections.size() != b.projections.size()) return std::nullopt;
  for (ArrowId u : c.hom(a.apex, b.apex)) {
    if (!c.is_isomorphism(u)) continue;
    bool ok = true;
    for (std::size_t i = 0; i < a.projections.size() && ok; ++i)
      ok = c.compose(b.projections[i], u) == a.projections[i];
    if (ok) return u;
  }
  return std::nullopt;
}

std::optional<ArrowId> pullback_iso(const FiniteCategory& c, const PullbackWitness& a, const PullbackWitness& b) {
  for (ArrowId u : c.hom(a.apex, b.apex))
    if (c.is_isomorphism(u) && c.compose(b.first, u) == a.first && c.compose(b.second, u) == a.second) return u;
  return std::nullopt;
}

std::string format_family(const FiniteCategory& c, ArrowSet family) {
  std::ostringstream out;
  out << '[';
  bool first = true;
  for (ArrowId a : members(family)) {
    if (!first) out << ", ";
    out << c.arrow_name(a);
    first = false;
  }
  out << ']';
  return out.str();
}

}  // namespace geoctx
