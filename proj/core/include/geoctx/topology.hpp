#pragma once

#include <optional>
#include <vector>

#include "geoctx/presheaf.hpp"
#include "geoctx/verdict.hpp"

namespace geoctx {

// Covering families per object. A family is a set of arrows into the object,
// so repeated members collapse; covering is insensitive to repetition.
struct Pretopology {
  std::vector<std::vector<ArrowSet>> families;
};

// Covering sieves per object, ordered by (descending size, mask).
struct Topology {
  std::vector<std::vector<ArrowSet>> sieves;
  bool covers(ObjectId u, ArrowSet sieve) const;
};

struct Site {
  CategoryPtr category;
  Topology topology;
  std::optional<Pretopology> cov;
  // Set by make_site when cov passes validate_pretopology; enables the
  // covering-family formulation of the sheaf condition as a cross-check.
  bool cov_valid = false;

  const FiniteCategory& cat() const { return *category; }
  const std::vector<ArrowSet>& covering_sieves(ObjectId u) const { return topology.sieves[u]; }
};

Verdict validate_pretopology(const FiniteCategory& c, const Pretopology& cov);
Topology topology_from_pretopology(const FiniteCategory& c, const Pretopology& cov);
Verdict validate_topology(const FiniteCategory& c, const Topology& j);

// J(U) = {maximal sieve}.
Topology minimal_topology(const FiniteCategory& c);
// Cov(U) = {{phi} | phi an isomorphism into U}.
Pretopology chaotic_pretopology(const FiniteCategory& c);

Site make_site(CategoryPtr c, Pretopology cov);
Site make_site(CategoryPtr c, Topology j);
// Checks the pretopology (if any), the topology, and that J is generated by Cov.
Verdict validate_site(const Site& site);

bool is_covering_family(const Site& site, ObjectId u, ArrowSet family);

// ---------------------------------------------------------------------------
// Sheaf condition

// Matching families for the sieve r on u: one value per member of r (in
// members(r) order) compatible with restriction.
std::vector<std::vector<int>> matching_families(const Presheaf& f, ArrowSet r);
// The section of f at u whose restrictions are `values` (indexed like
// members(r)), if one exists; the first one when several do.
std::optional<int> amalgamate(const Presheaf& f, ObjectId u, ArrowSet r, const std::vector<int>& values);

Verdict is_sheaf(const Site& site, const Presheaf& f);
Verdict is_separated(const Site& site, const Presheaf& f);
Verdict is_subcanonical(const Site& site);

// For every s in G(U), {phi | s|phi lies in the image of f} is a covering sieve.
Verdict is_locally_surjective(const Site& site, const NatTrans& f);

// {x | the restrictions of x landing in s form a covering sieve}.
Subpresheaf closure(const Site& site, const Subpresheaf& s);
Sieve closure(const Site& site, const Sieve& s);

// ---------------------------------------------------------------------------
// Sheafification

struct Sheafification {
  PresheafPtr sheaf;
  NatTrans unit;  // F -> a(F)
};

// One plus construction: F+(U) = matching families over covering sieves,
// identified when they agree on a smaller covering sieve.
Sheafification plus_construction(const Site& site, const PresheafPtr& f);
Sheafification sheafify(const Site& site, const PresheafPtr& f);

// The unique g-bar: A -> G with g-bar . unit = g, for a unit F -> A that is
// locally surjective and locally injective (as sheafification units are)
// and G a sheaf. Throws Error(NotASheaf) when no such map exists.
NatTrans sheafify_lift(const Site& site, const NatTrans& unit, const NatTrans& g);

}  // namespace geoctx
