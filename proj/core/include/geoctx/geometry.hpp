#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "geoctx/sheaf_ops.hpp"

namespace geoctx {

// A class of arrows of C, such as P or the S of an S-morphism.
using ArrowClass = ArrowSet;

struct GeometricContext {
  Site site;
  ArrowClass P = 0;

  const FiniteCategory& cat() const { return site.cat(); }
  const CategoryPtr& category() const { return site.category; }
  bool in_P(ArrowId a) const { return contains(P, a); }
};

inline constexpr std::array<const char*, 6> kContextChecks{"GC1", "GC2", "GC3", "GC4", "GC5", "GC6"};

struct ContextReport {
  std::array<Verdict, 6> checks;
  bool passed() const;
};

// GC1: terminal object and binary products.
Verdict check_finite_products(const FiniteCategory& c);
// GC3: identities, base change along every pullback square, composition.
Verdict validate_admissible(const FiniteCategory& c, ArrowClass p);
// Holds for every admissible class.
bool contains_isomorphisms(const FiniteCategory& c, ArrowClass p);
// GC4: phi is in P whenever some J-covering by P-arrows rho has phi . rho in P.
Verdict check_local(const Site& site, ArrowClass p);
// GC5: every covering sieve contains a covering family of P-arrows.
Verdict check_P_generated(const Site& site, ArrowClass p);
// GC6: every P-arrow becomes cartesian on some J-covering by P-arrows.
Verdict check_locally_cartesian(const Site& site, ArrowClass p);

ContextReport validate_geometric_context(const Site& site, ArrowClass p);
// Throws Error(PreconditionViolated) naming the first failed check.
GeometricContext make_context(Site site, ArrowClass p);

// Points plus named open sets. Opens must contain the empty set and the
// whole space and be closed under union and intersection.
struct FiniteSpace {
  std::vector<std::string> points;
  std::vector<std::pair<std::string, std::vector<std::string>>> opens;
};

// Poset of opens ordered by (size, declaration order), arrows id_A and
// i_A_B, open-cover pretopology (the empty family covers the empty open),
// P = all arrows. Throws Error(NotATopology).
GeometricContext context_from_finite_space(const FiniteSpace& space);

// ---------------------------------------------------------------------------
// Open immersions, S-morphisms, atlases

inline constexpr std::size_t kDefaultBudget = 10000;

// F x_G h_U for the section g of G at u. legs[0]: fibre -> F, legs[1]: fibre -> h_U.
struct Fibre {
  LimitCone cone;
  PresheafPtr h_u;
};
Fibre fibre_over(const NatTrans& f, ObjectId u, int g);

Verdict is_open_immersion(const GeometricContext& ctx, const NatTrans& f);
// Inconclusive when more than `budget` chart open-immersion tests are needed.
Verdict is_P_morphism_of_sheaves(const GeometricContext& ctx, ArrowClass s, const NatTrans& f,
                                 std::size_t budget = kDefaultBudget);

struct Chart {
  ObjectId object;
  int section;
  bool operator==(const Chart&) const = default;
};

struct Atlas {
  PresheafPtr target;
  std::vector<Chart> charts;
  bool open = true;  // charts are open immersions; otherwise P-morphisms

  NatTrans chart_map(std::size_t i) const;
};

// The charts jointly cover x (their images form a locally surjective family).
Verdict jointly_epimorphic(const Site& site, const PresheafPtr& x, const std::vector<Chart>& charts);
Verdict verify_atlas(const GeometricContext& ctx, const Atlas& atlas, std::size_t budget = kDefaultBudget);

std::optional<Atlas> find_open_atlas(const GeometricContext& ctx, const PresheafPtr& x);
// Charts are P-morphisms. Throws Error(SearchBudgetExceeded).
std::optional<Atlas> find_atlas(const GeometricContext& ctx, const PresheafPtr& x, std::size_t budget = kDefaultBudget);

Verdict is_elementary_scheme(const GeometricContext& ctx, const PresheafPtr& x);
Verdict is_geometric_sheaf(const GeometricContext& ctx, const PresheafPtr& x, std::size_t budget = kDefaultBudget);
Verdict is_schematic_morphism(const GeometricContext& ctx, const NatTrans& f);

// Every cospan in C has a pullback; throws Error(PullbacksMissingInC) otherwise.
void require_pullbacks(const FiniteCategory& c);

struct FibredProduct {
  LimitCone cone;               // legs[0]: W -> X, legs[1]: W -> Y
  std::optional<Atlas> atlas;
  bool from_chart_products = false;  // atlas assembled from fibres of chart pairs
};

// Throws Error(PullbacksMissingInC) and Error(PreconditionViolated) when X or
// Y is not an elementary scheme.
FibredProduct scheme_fibred_product(const GeometricContext& ctx, const NatTrans& f, const NatTrans& g);

struct BaseChange {
  LimitCone cone;  // legs[0]: X' -> S', legs[1]: X' -> X
  Verdict scheme;
  std::optional<Atlas> atlas;
};

// f: S' -> S schematic, p: X -> S with X an elementary scheme.
// Throws Error(PreconditionViolated).
BaseChange base_change_scheme(const GeometricContext& ctx, const NatTrans& f, const NatTrans& p);

// ---------------------------------------------------------------------------
// Gluing

struct GluingData {
  std::vector<ObjectId> charts;
  // overlaps[i][j] is a subobject of chart_square(charts[i], charts[j]).apex.
  std::vector<std::vector<Subpresheaf>> overlaps;
};

LimitCone chart_square(const GeometricContext& ctx, ObjectId ui, ObjectId uj);
Subpresheaf diagonal_overlap(const GeometricContext& ctx, ObjectId u);
// Closure of the subobject generated by pairs (a: V -> U_i, b: V -> U_j).
Subpresheaf overlap_from_pairs(const GeometricContext& ctx, ObjectId ui, ObjectId uj,
                               const std::vector<std::pair<ArrowId, ArrowId>>& pairs);

// Witness field "condition" names the failed clause: b, c or d.
Verdict validate_gluing_data(const GeometricContext& ctx, const GluingData& data);

struct GluedScheme {
  PresheafPtr sheaf;
  Atlas atlas;
  SheafColimit disjoint;  // coproduct of the chart representables
  EquivalenceRelation relation;
  NatTrans quotient;  // disjoint.sheaf -> sheaf
};

// Throws Error(GluingConditionViolated).
GluedScheme glue(const GeometricContext& ctx, const GluingData& data);
// Overlaps h_{U_i} x_X h_{U_j}. Throws Error(NotAnOpenAtlas).
GluingData decompose(const GeometricContext& ctx, const Atlas& atlas);

}  // namespace geoctx
