#include <algorithm>
#include <set>

#include "geoctx/dsl.hpp"

namespace geoctx::dsl {

const GlueBlock* Model::find_glue(const std::string& name) const {
  for (const auto& g : glue_blocks)
    if (g.name == name) return &g;
  return nullptr;
}

namespace {

[[noreturn]] void unknown(const Ident& id, const std::string& what) {
  throw ParseError(ErrorCode::UnknownIdentifier, id.loc, "unknown " + what + " '" + id.name + "'");
}

[[noreturn]] void duplicate(const Ident& id, const std::string& what) {
  throw ParseError(ErrorCode::DuplicateId, id.loc, what + " '" + id.name + "' declared twice");
}

// Rethrows engine errors raised while building a declaration with its location.
template <typename F>
auto located(Loc loc, F body) {
  try {
    return body();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    std::string msg = e.what();
    std::string prefix = std::string(to_string(e.code())) + ": ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    throw ParseError(e.code(), loc, msg);
  }
}

class Loader {
 public:
  explicit Loader(Model& m) : m_(m) {}

  void run() {
    collect();
    build_category();
    build_site();
    build_class();
    for (const auto* p : presheaves_) build_presheaf(*p);
    for (const auto* d : morphisms_) build_morphism(*d);
    for (const auto* g : glues_) build_glue(*g);
  }

 private:
  const FiniteCategory& cat() const { return *m_.category; }

  ObjectId object(const Ident& id) const {
    auto u = cat().find_object(id.name);
    if (!u) unknown(id, "object");
    return *u;
  }
  ArrowId arrow(const Ident& id) const {
    auto a = cat().find_arrow(id.name);
    if (!a) unknown(id, "arrow");
    return *a;
  }

  void collect() {
    std::set<std::string> names;
    auto claim = [&](const Ident& id) {
      if (!names.insert(id.name).second) duplicate(id, "name");
    };
    for (const Decl& d : m_.doc.decls) {
      if (auto* o = std::get_if<ObjectDecl>(&d)) objects_.push_back(o);
      if (auto* a = std::get_if<ArrowDecl>(&d)) arrows_.push_back(a);
      if (auto* c = std::get_if<ComposeDecl>(&d)) composes_.push_back(c);
      if (auto* s = std::get_if<SpaceDecl>(&d)) {
        if (space_) throw ParseError(ErrorCode::DuplicateId, s->loc, "second space declaration");
        space_ = s;
      }
      if (auto* c = std::get_if<CoverDecl>(&d)) covers_.push_back(c);
      if (auto* p = std::get_if<ClassDecl>(&d)) {
        if (class_) throw ParseError(ErrorCode::DuplicateId, p->loc, "class P declared twice");
        class_ = p;
      }
      if (auto* p = std::get_if<PresheafDecl>(&d)) {
        claim(p->name);
        presheaves_.push_back(p);
      }
      if (auto* p = std::get_if<MorphismDecl>(&d)) {
        claim(p->name);
        morphisms_.push_back(p);
      }
      if (auto* g = std::get_if<GlueDecl>(&d)) {
        claim(g->name);
        glues_.push_back(g);
      }
    }
  }

  void build_category() {
    if (space_) {
      if (!objects_.empty())
        throw ParseError(ErrorCode::SyntaxError, objects_[0]->name.loc, "object declarations cannot follow a space");
      if (!arrows_.empty())
        throw ParseError(ErrorCode::SyntaxError, arrows_[0]->name.loc, "arrow declarations cannot follow a space");
      if (!composes_.empty())
        throw ParseError(ErrorCode::SyntaxError, composes_[0]->outer.loc, "compose entries cannot follow a space");
      FiniteSpace fs;
      std::set<std::string> points;
      for (const auto& p : space_->points) {
        if (!points.insert(p.name).second) duplicate(p, "point");
        fs.points.push_back(p.name);
      }
      std::set<std::string> opens;
      for (const auto& o : space_->opens) {
        if (!opens.insert(o.name.name).second) duplicate(o.name, "open");
        std::vector<std::string> pts;
        for (const auto& p : o.points) {
          if (!points.count(p.name)) unknown(p, "point");
          pts.push_back(p.name);
        }
        fs.opens.emplace_back(o.name.name, std::move(pts));
      }
      space_ctx_ = located(space_->loc, [&] { return context_from_finite_space(fs); });
      m_.category = space_ctx_->category();
      return;
    }
    if (objects_.empty()) throw ParseError(ErrorCode::SyntaxError, {1, 1}, "no objects declared");
    RawCategory raw;
    std::set<std::string> objects, arrows;
    for (const auto* o : objects_) {
      if (!objects.insert(o->name.name).second) duplicate(o->name, "object");
      raw.objects.push_back(o->name.name);
    }
    for (const auto* o : objects_) {
      std::string id = "id_" + o->name.name;
      arrows.insert(id);
      raw.arrows.push_back({id, o->name.name, o->name.name});
      raw.identities[o->name.name] = id;
    }
    for (const auto* a : arrows_) {
      if (!arrows.insert(a->name.name).second) duplicate(a->name, "arrow");
      if (!objects.count(a->source.name)) unknown(a->source, "object");
      if (!objects.count(a->target.name)) unknown(a->target, "object");
      raw.arrows.push_back({a->name.name, a->source.name, a->target.name});
    }
    for (const auto* c : composes_) {
      for (const Ident* id : {&c->outer, &c->inner, &c->result})
        if (!arrows.count(id->name)) unknown(*id, "arrow");
      raw.composites.push_back({c->outer.name, c->inner.name, c->result.name});
    }
    Loc at = composes_.empty() ? objects_[0]->name.loc : composes_[0]->outer.loc;
    m_.category = located(at, [&] { return share(FiniteCategory::validate(raw)); });
  }

  void build_site() {
    Pretopology cov;
    if (space_ctx_) {
      cov = *space_ctx_->site.cov;
    } else {
      cov.families.resize(cat().object_count());
      for (ObjectId u = 0; u < cat().object_count(); ++u) cov.families[u].push_back(arrow_bit(cat().identity(u)));
    }
    std::set<ObjectId> replaced;
    for (const auto* c : covers_) {
      ObjectId u = object(c->object);
      if (replaced.insert(u).second) cov.families[u].clear();
      if (!c->family) continue;
      ArrowSet fam = 0;
      for (const auto& a : *c->family) {
        ArrowId id = arrow(a);
        if (cat().target(id) != u)
          throw ParseError(ErrorCode::MixedTargets, a.loc, "arrow '" + a.name + "' does not end at " + c->object.name);
        fam |= arrow_bit(id);
      }
      if (std::find(cov.families[u].begin(), cov.families[u].end(), fam) == cov.families[u].end())
        cov.families[u].push_back(fam);
    }
    m_.site = make_site(m_.category, std::move(cov));
  }

  void build_class() {
    if (!class_ || !class_->arrows) {
      m_.P = cat().all_arrows();
      return;
    }
    m_.P = 0;
    for (const auto& a : *class_->arrows) m_.P |= arrow_bit(arrow(a));
  }

  std::vector<std::vector<std::string>> value_sets(const PresheafDecl& p) {
    std::vector<std::vector<std::string>> labels(cat().object_count());
    std::vector<bool> seen(cat().object_count());
    for (const auto& v : p.values) {
      ObjectId u = object(v.object);
      if (seen[u]) duplicate(v.object, "value set at");
      seen[u] = true;
      std::set<std::string> elems;
      for (const auto& e : v.elements) {
        if (!elems.insert(e.name).second) duplicate(e, "element");
        labels[u].push_back(e.name);
      }
    }
    return labels;
  }

  static int index_of(const std::vector<std::string>& set, const Ident& e, const std::string& where) {
    for (std::size_t i = 0; i < set.size(); ++i)
      if (set[i] == e.name) return static_cast<int>(i);
    throw ParseError(ErrorCode::ElementNotInValueSet, e.loc, "'" + e.name + "' is not an element of " + where);
  }

  void build_presheaf(const PresheafDecl& p) {
    const FiniteCategory& c = cat();
    auto labels = value_sets(p);
    constexpr int kUnset = -1;
    std::vector<std::vector<int>> restr(c.arrow_count());
    std::vector<bool> known(c.arrow_count());
    for (ObjectId u = 0; u < c.object_count(); ++u) {
      ArrowId id = c.identity(u);
      for (int x = 0; x < static_cast<int>(labels[u].size()); ++x) restr[id].push_back(x);
      known[id] = true;
    }
    std::vector<bool> declared(c.arrow_count());
    for (const auto& r : p.restrictions) {
      ArrowId a = arrow(r.arrow);
      if (declared[a]) duplicate(r.arrow, "restriction along");
      declared[a] = true;
      ObjectId from = c.target(a), to = c.source(a);
      std::vector<int> map(labels[from].size(), kUnset);
      for (const auto& mp : r.maps) {
        int x = index_of(labels[from], mp.from, c.object_name(from));
        if (map[x] != kUnset) duplicate(mp.from, "mapping of");
        map[x] = index_of(labels[to], mp.to, c.object_name(to));
      }
      for (std::size_t x = 0; x < map.size(); ++x)
        if (map[x] == kUnset)
          throw ParseError(ErrorCode::NotAPresheaf, r.arrow.loc,
                           "restriction along '" + r.arrow.name + "' does not map '" + labels[from][x] + "'");
      restr[a] = std::move(map);
      known[a] = true;
    }
    // Undeclared restrictions follow from factorizations through declared ones.
    for (bool changed = true; changed;) {
      changed = false;
      for (ArrowId a = 0; a < c.arrow_count(); ++a) {
        if (known[a]) continue;
        for (ArrowId g : members(c.arrows_into(c.target(a)))) {
          if (!known[g] || c.is_identity(g)) continue;
          for (ArrowId f : c.hom(c.source(a), c.source(g))) {
            if (!known[f] || c.is_identity(f) || c.compose(g, f) != a) continue;
            for (int x = 0; x < static_cast<int>(labels[c.target(a)].size()); ++x)
              restr[a].push_back(restr[f][restr[g][x]]);
            known[a] = changed = true;
            break;
          }
          if (known[a]) break;
        }
      }
    }
    for (ArrowId a = 0; a < c.arrow_count(); ++a)
      if (!known[a] && !labels[c.target(a)].empty())
        throw ParseError(ErrorCode::NotAPresheaf, p.name.loc,
                         "presheaf '" + p.name.name + "' has no restriction along '" + c.arrow_name(a) + "'");
    m_.presheaves[p.name.name] =
        located(p.name.loc, [&] { return make_presheaf(m_.category, std::move(labels), std::move(restr)); });
    m_.presheaf_names.push_back(p.name.name);
  }

  PresheafPtr resolve(const SheafRef& r) {
    if (r.representable) {
      ObjectId u = object(r.name);
      return yoneda(m_.category, u);
    }
    auto it = m_.presheaves.find(r.name.name);
    if (it == m_.presheaves.end()) unknown(r.name, "presheaf");
    return it->second;
  }

  void build_morphism(const MorphismDecl& d) {
    const FiniteCategory& c = cat();
    PresheafPtr f = resolve(d.source), g = resolve(d.target);
    constexpr int kUnset = -1;
    std::vector<std::vector<int>> comp(c.object_count());
    for (ObjectId u = 0; u < c.object_count(); ++u) comp[u].assign(f->size(u), kUnset);
    std::vector<bool> seen(c.object_count());
    for (const auto& cd : d.components) {
      ObjectId u = object(cd.object);
      if (seen[u]) duplicate(cd.object, "component at");
      seen[u] = true;
      for (const auto& mp : cd.maps) {
        int x = index_of(f->labels(u), mp.from, c.object_name(u));
        if (comp[u][x] != kUnset) duplicate(mp.from, "mapping of");
        comp[u][x] = index_of(g->labels(u), mp.to, c.object_name(u));
      }
    }
    // Naturality fixes the image of every restriction of a mapped element.
    for (bool changed = true; changed;) {
      changed = false;
      for (ArrowId a = 0; a < c.arrow_count(); ++a) {
        ObjectId v = c.source(a), w = c.target(a);
        for (int y = 0; y < f->size(w); ++y) {
          if (comp[w][y] == kUnset) continue;
          int x = f->restrict(a, y);
          if (comp[v][x] == kUnset) {
            comp[v][x] = g->restrict(a, comp[w][y]);
            changed = true;
          }
        }
      }
    }
    for (ObjectId u = 0; u < c.object_count(); ++u)
      for (int x = 0; x < f->size(u); ++x)
        if (comp[u][x] == kUnset)
          throw ParseError(ErrorCode::NotNatural, d.name.loc,
                           "morphism '" + d.name.name + "' does not map '" + f->label(u, x) + "' at " + c.object_name(u));
    m_.morphisms.emplace(d.name.name, located(d.name.loc, [&] { return make_nat_trans(f, g, std::move(comp)); }));
    m_.morphism_names.push_back(d.name.name);
  }

  void build_glue(const GlueDecl& d) {
    GeometricContext ctx = m_.context();
    GlueBlock block{d.name.name, {}};
    GluingData& data = block.data;
    for (const auto& ch : d.charts) data.charts.push_back(object(ch));
    const int n = static_cast<int>(data.charts.size());
    std::vector<std::vector<const OverlapDecl*>> given(n, std::vector<const OverlapDecl*>(n, nullptr));
    for (const auto& o : d.overlaps) {
      if (o.i < 1 || o.i > n || o.j < 1 || o.j > n)
        throw ParseError(ErrorCode::UnknownIdentifier, o.loc,
                         "overlap (" + std::to_string(o.i) + "," + std::to_string(o.j) + ") names a missing chart");
      if (given[o.i - 1][o.j - 1])
        throw ParseError(ErrorCode::DuplicateId, o.loc,
                         "overlap (" + std::to_string(o.i) + "," + std::to_string(o.j) + ") declared twice");
      given[o.i - 1][o.j - 1] = &o;
    }
    auto pairs_of = [&](const OverlapDecl& o, bool swap) {
      std::vector<std::pair<ArrowId, ArrowId>> out;
      for (const auto& [a, b] : o.pairs) {
        ArrowId x = arrow(a), y = arrow(b);
        out.emplace_back(swap ? y : x, swap ? x : y);
      }
      return out;
    };
    data.overlaps.resize(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        ObjectId ui = data.charts[i], uj = data.charts[j];
        if (const OverlapDecl* o = given[i][j]) {
          data.overlaps[i].push_back(located(o->loc, [&] { return overlap_from_pairs(ctx, ui, uj, pairs_of(*o, false)); }));
        } else if (i == j) {
          data.overlaps[i].push_back(diagonal_overlap(ctx, ui));
        } else if (const OverlapDecl* t = given[j][i]) {
          data.overlaps[i].push_back(located(t->loc, [&] { return overlap_from_pairs(ctx, ui, uj, pairs_of(*t, true)); }));
        } else {
          data.overlaps[i].push_back(overlap_from_pairs(ctx, ui, uj, {}));
        }
      }
    m_.glue_blocks.push_back(std::move(block));
  }

  Model& m_;
  std::vector<const ObjectDecl*> objects_;
  std::vector<const ArrowDecl*> arrows_;
  std::vector<const ComposeDecl*> composes_;
  const SpaceDecl* space_ = nullptr;
  std::optional<GeometricContext> space_ctx_;
  std::vector<const CoverDecl*> covers_;
  const ClassDecl* class_ = nullptr;
  std::vector<const PresheafDecl*> presheaves_;
  std::vector<const MorphismDecl*> morphisms_;
  std::vector<const GlueDecl*> glues_;
};

}  // namespace

Model load(Document doc) {
  Model m;
  m.doc = std::move(doc);
  Loader(m).run();
  return m;
}

Model load_text(std::string_view text) { return load(parse(text)); }

}  // namespace geoctx::dsl
