#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geoctx/error.hpp"
#include "geoctx/verdict.hpp"

namespace geoctx {

using ObjectId = int;
using ArrowId = int;

// Arrow subsets are bitmasks; a category carries at most 64 arrows.
using ArrowSet = std::uint64_t;
inline constexpr int kMaxArrows = 64;
inline constexpr int kMaxObjects = 64;

inline ArrowSet arrow_bit(ArrowId a) { return ArrowSet{1} << a; }
inline bool contains(ArrowSet s, ArrowId a) { return (s >> a) & 1u; }
int popcount(ArrowSet s);
std::vector<ArrowId> members(ArrowSet s);

// Unvalidated description of a category, as read from a document.
struct RawCategory {
  struct Arrow {
    std::string name, source, target;
  };
  struct Composite {
    std::string outer, inner, result;  // outer . inner = result
  };

  std::vector<std::string> objects;
  std::vector<Arrow> arrows;
  std::map<std::string, std::string> identities;  // object -> arrow
  std::vector<Composite> composites;
};

// A finite category with an explicit composition table. Immutable once
// built; construction checks every law exhaustively.
class FiniteCategory {
 public:
  // Throws Error(MissingComposite | NonAssociative | IdentityLawBroken | ...)
  // naming the first violated law with a witness.
  static FiniteCategory validate(const RawCategory& raw);

  int object_count() const { return static_cast<int>(objects_.size()); }
  int arrow_count() const { return static_cast<int>(arrows_.size()); }

  const std::string& object_name(ObjectId u) const { return objects_[u]; }
  const std::string& arrow_name(ArrowId a) const { return arrows_[a].name; }
  std::optional<ObjectId> find_object(const std::string& name) const;
  std::optional<ArrowId> find_arrow(const std::string& name) const;

  ObjectId source(ArrowId a) const { return arrows_[a].source; }
  ObjectId target(ArrowId a) const { return arrows_[a].target; }
  ArrowId identity(ObjectId u) const { return identity_[u]; }
  bool is_identity(ArrowId a) const { return identity_[source(a)] == a; }

  // outer . inner; requires target(inner) == source(outer).
  ArrowId compose(ArrowId outer, ArrowId inner) const {
    return table_[static_cast<std::size_t>(outer) * arrows_.size() + inner];
  }
  bool composable(ArrowId outer, ArrowId inner) const { return target(inner) == source(outer); }

  std::span<const ArrowId> hom(ObjectId from, ObjectId to) const {
    return hom_[static_cast<std::size_t>(from) * objects_.size() + to];
  }
  // Position of `a` inside hom(source(a), target(a)).
  int hom_index(ArrowId a) const { return hom_pos_[a]; }
  ArrowSet arrows_into(ObjectId u) const { return into_[u]; }
  ArrowSet arrows_from(ObjectId u) const { return from_[u]; }
  ArrowSet all_arrows() const;

  // {a . b | b composable}; the sieve generated by a single arrow.
  ArrowSet principal_sieve(ArrowId a) const { return principal_[a]; }

  bool is_isomorphism(ArrowId a) const;
  std::optional<ArrowId> inverse(ArrowId a) const;

  // The least arrow in {a . u | u an isomorphism}; equal for arrows that
  // agree up to reparametrisation of the domain.
  ArrowId iso_representative(ArrowId a) const { return iso_rep_[a]; }
  ArrowSet normalize_up_to_iso(ArrowSet family) const;

  // Back to an unvalidated description (identities and all composites listed).
  RawCategory to_raw() const;

  bool operator==(const FiniteCategory& other) const;

 private:
  struct ArrowInfo {
    std::string name;
    ObjectId source, target;
  };
  FiniteCategory() = default;
  void build_indices();

  std::vector<std::string> objects_;
  std::vector<ArrowInfo> arrows_;
  std::vector<ArrowId> identity_;
  std::vector<ArrowId> table_;
  std::vector<std::vector<ArrowId>> hom_;
  std::vector<ArrowSet> into_, from_, principal_;
  std::vector<ArrowId> iso_rep_;
  std::vector<int> hom_pos_;
};

using CategoryPtr = std::shared_ptr<const FiniteCategory>;

inline CategoryPtr share(FiniteCategory c) { return std::make_shared<const FiniteCategory>(std::move(c)); }

// Builders for common shapes. `leq[i][j]` means an arrow i -> j; the relation
// must be a preorder (reflexive, transitive). Arrows are named id_<A> and
// i_<A>_<B>.
FiniteCategory poset_category(const std::vector<std::string>& names,
                              const std::vector<std::vector<bool>>& leq);
FiniteCategory discrete_category(const std::vector<std::string>& names);

// Witness of a (binary or empty) product: apex plus projections.
struct ProductWitness {
  ObjectId apex;
  std::vector<ArrowId> projections;
};

struct PullbackWitness {
  ObjectId apex;
  ArrowId first;   // apex -> source(f)
  ArrowId second;  // apex -> source(g)
};

std::optional<ProductWitness> terminal_object(const FiniteCategory& c);
std::optional<ProductWitness> binary_product(const FiniteCategory& c, ObjectId a, ObjectId b);

// Pullback of the cospan f: A -> X <- B :g. Returns the first witness in
// (apex, first, second) order.
std::optional<PullbackWitness> pullback(const FiniteCategory& c, ArrowId f, ArrowId g);
// Every pullback witness of the cospan; all are isomorphic.
std::vector<PullbackWitness> all_pullbacks(const FiniteCategory& c, ArrowId f, ArrowId g);
bool is_pullback(const FiniteCategory& c, ArrowId f, ArrowId g, const PullbackWitness& w);

bool is_cartesian_arrow(const FiniteCategory& c, ArrowId f);
bool is_mono_in_C(const FiniteCategory& c, ArrowId f);

// An isomorphism u: a.apex -> b.apex compatible with the projections.
std::optional<ArrowId> product_iso(const FiniteCategory& c, const ProductWitness& a, const ProductWitness& b);
std::optional<ArrowId> pullback_iso(const FiniteCategory& c, const PullbackWitness& a, const PullbackWitness& b);

std::string format_family(const FiniteCategory& c, ArrowSet family);

}  // namespace geoctx
