#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoctx/category.hpp"

namespace geoctx {

// A presheaf with finite value sets. Elements of F(U) are indices
// 0..size(U)-1 with a printable label each; restriction along a: V -> U maps
// F(U) -> F(V).
class Presheaf {
 public:
  // Throws Error(NotAPresheaf) when the restrictions are not functorial.
  Presheaf(CategoryPtr category, std::vector<std::vector<std::string>> labels,
           std::vector<std::vector<int>> restrictions);

  const FiniteCategory& category() const { return *category_; }
  const CategoryPtr& category_ptr() const { return category_; }

  int size(ObjectId u) const { return static_cast<int>(labels_[u].size()); }
  int total_size() const;
  int restrict(ArrowId a, int x) const { return restrictions_[a][x]; }
  const std::vector<int>& restriction(ArrowId a) const { return restrictions_[a]; }

  const std::string& label(ObjectId u, int x) const { return labels_[u][x]; }
  const std::vector<std::string>& labels(ObjectId u) const { return labels_[u]; }
  std::optional<int> find(ObjectId u, std::string_view label) const;

  // Same category (by pointer), labels and restrictions.
  bool operator==(const Presheaf& other) const;

 private:
  CategoryPtr category_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<int>> restrictions_;
};

using PresheafPtr = std::shared_ptr<const Presheaf>;

PresheafPtr make_presheaf(CategoryPtr category, std::vector<std::vector<std::string>> labels,
                          std::vector<std::vector<int>> restrictions);

bool same_presheaf(const PresheafPtr& a, const PresheafPtr& b);

// A morphism of presheaves; components[U][x] is the image of x in target(U).
struct NatTrans {
  PresheafPtr source;
  PresheafPtr target;
  std::vector<std::vector<int>> components;

  int operator()(ObjectId u, int x) const { return components[u][x]; }
  const FiniteCategory& category() const { return source->category(); }
};

// Throws Error(NotNatural) with the offending arrow and element.
NatTrans make_nat_trans(PresheafPtr source, PresheafPtr target, std::vector<std::vector<int>> components);
NatTrans identity_nat(const PresheafPtr& f);
NatTrans compose(const NatTrans& outer, const NatTrans& inner);
bool same_components(const NatTrans& a, const NatTrans& b);
bool is_pointwise_injective(const NatTrans& f);
bool is_pointwise_surjective(const NatTrans& f);
bool is_pointwise_bijective(const NatTrans& f);
std::optional<NatTrans> inverse_of(const NatTrans& f);

// ---------------------------------------------------------------------------
// Yoneda

// h_U(V) = Hom(V, U), labelled by arrow name, restriction by precomposition.
PresheafPtr yoneda(const CategoryPtr& c, ObjectId u);
// h_phi: h_source -> h_target by postcomposition.
NatTrans yoneda_arrow(const PresheafPtr& h_source, const PresheafPtr& h_target, ArrowId phi);
// The unique h_U -> F sending Id_U to s. `h_u` must be yoneda(c, u).
NatTrans yoneda_correspond(const PresheafPtr& h_u, const PresheafPtr& f, ObjectId u, int s);
NatTrans yoneda_correspond(const PresheafPtr& f, ObjectId u, int s);
// alpha(Id_U) for alpha: h_U -> F.
int yoneda_evaluate(const NatTrans& alpha, ObjectId u);
// Index of arrow a inside h_target(a)(source(a)).
inline int yoneda_index(const FiniteCategory& c, ArrowId a) { return c.hom_index(a); }

// ---------------------------------------------------------------------------
// Sieves and subpresheaves

struct Sieve {
  ObjectId anchor = 0;
  ArrowSet arrows = 0;
  bool operator==(const Sieve&) const = default;
};

bool is_sieve(const FiniteCategory& c, const Sieve& s);
Sieve maximal_sieve(const FiniteCategory& c, ObjectId u);
Sieve pullback_sieve(const FiniteCategory& c, ArrowId phi, const Sieve& r);
// Pullback of a raw arrow set (assumed a sieve on target(phi)) along phi.
ArrowSet pullback_arrows(const FiniteCategory& c, ArrowId phi, ArrowSet r);
// Throws Error(MixedTargets) if some arrow does not land in u.
Sieve sieve_generated_by(const FiniteCategory& c, ObjectId u, ArrowSet family);
ArrowSet generated_arrows(const FiniteCategory& c, ArrowSet family);
// All sieves on u, ordered by (descending size, mask).
std::vector<ArrowSet> all_sieves(const FiniteCategory& c, ObjectId u);
// Arrows of s not obtained by precomposing another member of s outside
// their own isomorphism class, one per class. They generate s.
ArrowSet sieve_generators(const FiniteCategory& c, ArrowSet s);

struct Subpresheaf {
  PresheafPtr parent;
  std::vector<std::vector<bool>> members;

  bool contains(ObjectId u, int x) const { return members[u][x]; }
  int size(ObjectId u) const;
  bool is_stable() const;
  bool operator==(const Subpresheaf& other) const;
};

Subpresheaf full_subpresheaf(const PresheafPtr& parent);
Subpresheaf empty_subpresheaf(const PresheafPtr& parent);
// Throws Error(ParentMismatch).
Subpresheaf intersect(const Subpresheaf& a, const Subpresheaf& b);
Subpresheaf unite(const Subpresheaf& a, const Subpresheaf& b);
bool is_subset(const Subpresheaf& a, const Subpresheaf& b);
// Smallest subpresheaf containing the given elements.
Subpresheaf generated_subpresheaf(const PresheafPtr& parent, const std::vector<std::pair<ObjectId, int>>& elements);
Subpresheaf image_of(const NatTrans& f);
Subpresheaf preimage(const NatTrans& f, const Subpresheaf& s);
Subpresheaf sieve_as_subpresheaf(const PresheafPtr& h_u, const Sieve& s);
Sieve subpresheaf_as_sieve(const Subpresheaf& s, ObjectId u);

struct Materialized {
  PresheafPtr presheaf;
  NatTrans inclusion;
};
Materialized materialize(const Subpresheaf& s);

// ---------------------------------------------------------------------------
// Pointwise limits and colimits

struct Diagram {
  struct Edge {
    int from, to;
    NatTrans map;
  };
  std::vector<PresheafPtr> nodes;
  std::vector<Edge> edges;
};

struct LimitCone {
  PresheafPtr apex;
  std::vector<NatTrans> legs;                            // apex -> node i
  std::vector<std::vector<std::vector<int>>> tuples;     // [U][element] -> node components
};

struct ColimitCocone {
  PresheafPtr apex;
  std::vector<NatTrans> legs;                            // node i -> apex
  std::vector<std::vector<std::pair<int, int>>> reps;    // [U][element] -> (node, x)
};

// The empty diagram gives the constant-singleton presheaf (limit) and the
// constant-empty presheaf (colimit).
LimitCone presheaf_limit(const CategoryPtr& c, const Diagram& d);
ColimitCocone presheaf_colimit(const CategoryPtr& c, const Diagram& d);

PresheafPtr terminal_presheaf(const CategoryPtr& c);
PresheafPtr initial_presheaf(const CategoryPtr& c);

LimitCone product(const PresheafPtr& a, const PresheafPtr& b);
LimitCone product(const CategoryPtr& c, const std::vector<PresheafPtr>& factors);
// f: A -> X, g: B -> X. Elements are pairs (a, b) with f(a) = g(b).
LimitCone pullback(const NatTrans& f, const NatTrans& g);
LimitCone equalizer(const NatTrans& f, const NatTrans& g);
ColimitCocone coproduct(const CategoryPtr& c, const std::vector<PresheafPtr>& parts);
// f: A -> B, g: A -> C; legs[0]: B -> P, legs[1]: C -> P.
ColimitCocone pushout(const NatTrans& f, const NatTrans& g);
// f, g: A -> B; legs[0]: B -> Q.
ColimitCocone coequalizer(const NatTrans& f, const NatTrans& g);

// Mediating morphism x -> apex for a family of legs x -> node i.
NatTrans mediate(const LimitCone& cone, const PresheafPtr& x, const std::vector<NatTrans>& legs);
// Mediating morphism apex -> x for a family of legs node i -> x.
NatTrans mediate(const ColimitCocone& cocone, const PresheafPtr& x, const std::vector<NatTrans>& legs);

// ---------------------------------------------------------------------------
// Morphism search

std::optional<NatTrans> find_isomorphism(const PresheafPtr& f, const PresheafPtr& g);
inline bool isomorphic(const PresheafPtr& f, const PresheafPtr& g) { return find_isomorphism(f, g).has_value(); }

// Visits every natural transformation f -> g in a fixed order until `visit`
// returns false. Returns the number visited.
std::size_t for_each_nat_trans(const PresheafPtr& f, const PresheafPtr& g,
                               const std::function<bool(const NatTrans&)>& visit);
std::vector<NatTrans> all_nat_trans(const PresheafPtr& f, const PresheafPtr& g,
                                    std::size_t limit = static_cast<std::size_t>(-1));

std::string describe(const Presheaf& f);

}  // namespace geoctx
