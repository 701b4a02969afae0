#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geoctx/geometry.hpp"

namespace geoctx::dsl {

inline constexpr int kMaxObjects = 8;
inline constexpr int kMaxArrows = 64;
inline constexpr int kMaxElements = 64;

struct Loc {
  int line = 0, col = 0;
};

// Thrown for SyntaxError, UnknownIdentifier, DuplicateId and semantic
// failures that can be pinned to a declaration.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, Loc loc, const std::string& message)
      : Error(code, std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + message), loc_(loc) {}
  Loc loc() const { return loc_; }

 private:
  Loc loc_;
};

// ---------------------------------------------------------------------------
// AST. Locations are ignored by operator==.

struct Ident {
  std::string name;
  Loc loc;
  bool operator==(const Ident& o) const { return name == o.name; }
};

struct ObjectDecl {
  Ident name;
  bool operator==(const ObjectDecl&) const = default;
};
struct ArrowDecl {
  Ident name, source, target;
  bool operator==(const ArrowDecl&) const = default;
};
struct ComposeDecl {
  Ident outer, inner, result;  // outer . inner = result
  bool operator==(const ComposeDecl&) const = default;
};
struct OpenDecl {
  Ident name;
  std::vector<Ident> points;
  bool operator==(const OpenDecl&) const = default;
};
struct SpaceDecl {
  std::vector<Ident> points;
  std::vector<OpenDecl> opens;
  Loc loc;
  bool operator==(const SpaceDecl& o) const { return points == o.points && opens == o.opens; }
};
// `cover U = none` has no family and replaces every other cover of U.
struct CoverDecl {
  Ident object;
  std::optional<std::vector<Ident>> family;
  bool operator==(const CoverDecl&) const = default;
};
struct ClassDecl {
  std::optional<std::vector<Ident>> arrows;  // nullopt: all
  Loc loc;
  bool operator==(const ClassDecl& o) const { return arrows == o.arrows; }
};
struct Mapping {
  Ident from, to;
  bool operator==(const Mapping&) const = default;
};
struct ValuesAt {
  Ident object;
  std::vector<Ident> elements;
  bool operator==(const ValuesAt&) const = default;
};
struct RestrictDecl {
  Ident arrow;
  std::vector<Mapping> maps;
  bool operator==(const RestrictDecl&) const = default;
};
struct PresheafDecl {
  Ident name;
  std::vector<ValuesAt> values;
  std::vector<RestrictDecl> restrictions;
  bool operator==(const PresheafDecl&) const = default;
};
// A presheaf name, or h(U) when `representable` is set.
struct SheafRef {
  Ident name;
  bool representable = false;
  bool operator==(const SheafRef&) const = default;
};
struct ComponentDecl {
  Ident object;
  std::vector<Mapping> maps;
  bool operator==(const ComponentDecl&) const = default;
};
struct MorphismDecl {
  Ident name;
  SheafRef source, target;
  std::vector<ComponentDecl> components;
  bool operator==(const MorphismDecl&) const = default;
};
struct OverlapDecl {
  int i = 0, j = 0;  // 1-based chart positions
  std::vector<std::pair<Ident, Ident>> pairs;
  Loc loc;
  bool operator==(const OverlapDecl& o) const { return i == o.i && j == o.j && pairs == o.pairs; }
};
struct GlueDecl {
  Ident name;
  std::vector<Ident> charts;
  std::vector<OverlapDecl> overlaps;
  bool operator==(const GlueDecl&) const = default;
};

using Decl = std::variant<ObjectDecl, ArrowDecl, ComposeDecl, SpaceDecl, CoverDecl, ClassDecl, PresheafDecl,
                          MorphismDecl, GlueDecl>;

struct Document {
  std::vector<Decl> decls;
  bool operator==(const Document&) const = default;
};

// Throws ParseError(SyntaxError | ResourceBound).
Document parse(std::string_view text);
// Canonical text; parse(print(d)) == d.
std::string print(const Document& doc);

// ---------------------------------------------------------------------------
// Semantic model

struct GlueBlock {
  std::string name;
  GluingData data;
};

struct Model {
  Document doc;
  CategoryPtr category;
  Site site;
  ArrowClass P = 0;
  std::vector<std::string> presheaf_names;  // declaration order
  std::map<std::string, PresheafPtr> presheaves;
  std::vector<std::string> morphism_names;
  std::map<std::string, NatTrans> morphisms;
  std::vector<GlueBlock> glue_blocks;

  GeometricContext context() const { return {site, P}; }
  const GlueBlock* find_glue(const std::string& name) const;
};

// Resolves identifiers and builds the category, site, class, presheaves,
// morphisms and gluing data. Throws ParseError or Error.
Model load(Document doc);
Model load_text(std::string_view text);

}  // namespace geoctx::dsl
