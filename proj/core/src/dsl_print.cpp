#include <sstream>

#include "geoctx/dsl.hpp"

namespace geoctx::dsl {

namespace {

std::string join(const std::vector<Ident>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + ids[i].name;
  return out;
}

std::string join(const std::vector<Mapping>& maps) {
  std::string out;
  for (std::size_t i = 0; i < maps.size(); ++i) out += (i ? ", " : "") + maps[i].from.name + " -> " + maps[i].to.name;
  return out;
}

std::string ref(const SheafRef& r) { return r.representable ? "h(" + r.name.name + ")" : r.name.name; }

struct Printer {
  std::ostringstream out;

  void operator()(const ObjectDecl& d) { out << "object " << d.name.name << "\n"; }
  void operator()(const ArrowDecl& d) {
    out << "arrow " << d.name.name << ": " << d.source.name << " -> " << d.target.name << "\n";
  }
  void operator()(const ComposeDecl& d) {
    out << "compose " << d.outer.name << " . " << d.inner.name << " = " << d.result.name << "\n";
  }
  void operator()(const SpaceDecl& d) {
    out << "space {\n  points";
    for (const auto& p : d.points) out << " " << p.name;
    out << "\n";
    for (const auto& o : d.opens) out << "  open " << o.name.name << " = {" << join(o.points) << "}\n";
    out << "}\n";
  }
  void operator()(const CoverDecl& d) {
    out << "cover " << d.object.name << " = ";
    if (d.family)
      out << "[" << join(*d.family) << "]\n";
    else
      out << "none\n";
  }
  void operator()(const ClassDecl& d) {
    if (d.arrows)
      out << "P = [" << join(*d.arrows) << "]\n";
    else
      out << "P = all\n";
  }
  void operator()(const PresheafDecl& d) {
    out << "presheaf " << d.name.name << " {\n";
    for (const auto& v : d.values) out << "  at " << v.object.name << ": {" << join(v.elements) << "}\n";
    for (const auto& r : d.restrictions) out << "  restrict " << r.arrow.name << ": " << join(r.maps) << "\n";
    out << "}\n";
  }
  void operator()(const MorphismDecl& d) {
    out << "morphism " << d.name.name << ": " << ref(d.source) << " -> " << ref(d.target) << " {\n";
    for (const auto& c : d.components) out << "  at " << c.object.name << ": " << join(c.maps) << "\n";
    out << "}\n";
  }
  void operator()(const GlueDecl& d) {
    out << "glue " << d.name.name << " {\n";
    for (const auto& c : d.charts) out << "  chart " << c.name << "\n";
    for (const auto& o : d.overlaps) {
      out << "  overlap (" << o.i << "," << o.j << ") = [";
      for (std::size_t k = 0; k < o.pairs.size(); ++k)
        out << (k ? ", " : "") << "(" << o.pairs[k].first.name << ", " << o.pairs[k].second.name << ")";
      out << "]\n";
    }
    out << "}\n";
  }
};

bool is_block(const Decl& d) {
  return std::holds_alternative<SpaceDecl>(d) || std::holds_alternative<PresheafDecl>(d) ||
         std::holds_alternative<MorphismDecl>(d) || std::holds_alternative<GlueDecl>(d);
}

}  // namespace

std::string print(const Document& doc) {
  Printer p;
  for (std::size_t i = 0; i < doc.decls.size(); ++i) {
    const Decl& d = doc.decls[i];
    if (i > 0 && (is_block(d) || is_block(doc.decls[i - 1]) || d.index() != doc.decls[i - 1].index())) p.out << "\n";
    std::visit(p, d);
  }
  return p.out.str();
}

}  // namespace geoctx::dsl
