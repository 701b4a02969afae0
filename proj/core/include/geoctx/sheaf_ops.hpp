#pragma once

#include <vector>

#include "geoctx/topology.hpp"

namespace geoctx {

// Local surjectivity; witness (object, section) with no covering lift.
Verdict is_epimorphism(const Site& site, const NatTrans& f);
// Pointwise injectivity; witness (object, two sections with equal image).
Verdict is_monomorphism(const Site& site, const NatTrans& f);

struct ImageFactorization {
  Subpresheaf subobject;  // of f.target
  PresheafPtr image;
  NatTrans epi;   // f.source -> image
  NatTrans mono;  // image -> f.target
};

// Equalizer of the two legs of the sheafified pushout of f with itself.
ImageFactorization image_via_pushout(const Site& site, const NatTrans& f);
// Sheafified pointwise image, mapped back into the target.
ImageFactorization image_via_pointwise(const Site& site, const NatTrans& f);
// Runs both routes; throws Error(InternalRouteDisagreement) if they differ.
ImageFactorization image_factorization(const Site& site, const NatTrans& f);

// Pointwise limits; sheaves are closed under them.
LimitCone sheaf_limit(const Site& site, const Diagram& d);
LimitCone sheaf_product(const Site& site, const PresheafPtr& a, const PresheafPtr& b);
LimitCone sheaf_pullback(const Site& site, const NatTrans& f, const NatTrans& g);

// Sheafified pointwise colimit.
struct SheafColimit {
  PresheafPtr sheaf;
  std::vector<NatTrans> legs;
  ColimitCocone pointwise;
  NatTrans unit;  // pointwise apex -> sheaf
};

SheafColimit sheaf_colimit(const Site& site, const Diagram& d);
SheafColimit sheaf_coproduct(const Site& site, const std::vector<PresheafPtr>& parts);
SheafColimit sheaf_pushout(const Site& site, const NatTrans& f, const NatTrans& g);
SheafColimit sheaf_coequalizer(const Site& site, const NatTrans& f, const NatTrans& g);
// The mediating morphism out of a sheaf colimit into a sheaf x.
NatTrans mediate(const Site& site, const SheafColimit& colimit, const PresheafPtr& x, const std::vector<NatTrans>& legs);

struct EquivalenceRelation {
  PresheafPtr relation;
  PresheafPtr carrier;
  NatTrans r1, r2;
};

// (r1, r2) jointly mono, reflexive, symmetric and transitive.
Verdict check_equivalence_relation(const Site& site, const EquivalenceRelation& rel);

struct Quotient {
  PresheafPtr sheaf;
  NatTrans q;  // carrier -> sheaf, an epimorphism
};

// Throws Error(NotAnEquivalenceRelation) with the failed property, and
// Error(Internal) if the quotient is not effective.
Quotient quotient_by_relation(const Site& site, const EquivalenceRelation& rel);

// Subobjects of a sheaf are normalized by closure.
Subpresheaf image_subsheaf(const Site& site, const NatTrans& f);
Subpresheaf subsheaf_union(const Site& site, const std::vector<Subpresheaf>& parts);
bool subsheaf_equal(const Site& site, const Subpresheaf& s, const Subpresheaf& t);

}  // namespace geoctx
