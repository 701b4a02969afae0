#pragma once

#include <random>
#include <string>
#include <vector>

#include "geoctx/geometry.hpp"

namespace geoctx::testing {

// Finite spaces used throughout the suites. Open names are the object names.
FiniteSpace point_space();        // {pt}: opens E, P
FiniteSpace sierpinski_space();   // {0,1}: opens E, O = {1}, S
FiniteSpace interval_space();     // {x,m,y}: opens E, X, Y, XY, L

// One object, identity only, J maximal, P = all.
GeometricContext pt_context();
GeometricContext sierp_context();
GeometricContext int_context();

ObjectId obj(const GeometricContext& ctx, const std::string& name);
ArrowId arrow(const GeometricContext& ctx, const std::string& name);

// Random presheaf with value sets of at most max_size elements, labels s0, s1, ...
// Needs every non-identity arrow to run from an earlier object to a later one.
PresheafPtr random_presheaf(const CategoryPtr& c, std::mt19937& rng, int max_size);
// A random sheaf: a random presheaf, sheafified, rejected if larger than max_size anywhere.
PresheafPtr random_sheaf(const Site& site, std::mt19937& rng, int max_size);
// A random natural transformation f -> g, if any exists (picked from the enumeration).
std::optional<NatTrans> random_nat_trans(const PresheafPtr& f, const PresheafPtr& g, std::mt19937& rng);

// Constant presheaf with n elements at every object.
PresheafPtr constant_presheaf(const CategoryPtr& c, int n);
// Finite set as a presheaf on the one-object category.
PresheafPtr finite_set(const CategoryPtr& c, int n);

// Two L-charts glued along h_X u h_Y.
GluingData pc_gluing(const GeometricContext& ctx);

// The shipped .geo corpus.
std::string fixture_path(const std::string& file);
std::string fixture_text(const std::string& file);
std::vector<std::string> fixture_files();  // sorted file names

}  // namespace geoctx::testing
