#include "fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace geoctx::testing {

FiniteSpace point_space() { return {{"pt"}, {{"E", {}}, {"P", {"pt"}}}}; }

FiniteSpace sierpinski_space() { return {{"0", "1"}, {{"E", {}}, {"O", {"1"}}, {"S", {"0", "1"}}}}; }

FiniteSpace interval_space() {
  return {{"x", "m", "y"}, {{"E", {}}, {"X", {"x"}}, {"Y", {"y"}}, {"XY", {"x", "y"}}, {"L", {"x", "m", "y"}}}};
}

GeometricContext pt_context() {
  CategoryPtr c = share(discrete_category({"pt"}));
  Pretopology cov{{{arrow_bit(c->identity(0))}}};
  return make_context(make_site(c, std::move(cov)), c->all_arrows());
}

GeometricContext sierp_context() { return context_from_finite_space(sierpinski_space()); }
GeometricContext int_context() { return context_from_finite_space(interval_space()); }

ObjectId obj(const GeometricContext& ctx, const std::string& name) {
  auto u = ctx.cat().find_object(name);
  if (!u) throw std::invalid_argument("no object " + name);
  return *u;
}

ArrowId arrow(const GeometricContext& ctx, const std::string& name) {
  auto a = ctx.cat().find_arrow(name);
  if (!a) throw std::invalid_argument("no arrow " + name);
  return *a;
}

PresheafPtr random_presheaf(const CategoryPtr& cp, std::mt19937& rng, int max_size) {
  const FiniteCategory& c = *cp;
  const int n = c.object_count();
  std::vector<std::vector<std::string>> labels(n);
  std::vector<std::vector<int>> restr(c.arrow_count());
  std::uniform_int_distribution<int> size_dist(0, max_size);
  for (ObjectId u = 0; u < n; ++u) {
    std::vector<ArrowId> into;
    for (ArrowId a : members(c.arrows_into(u))) {
      if (c.is_identity(a)) continue;
      if (c.source(a) >= u) throw std::invalid_argument("random_presheaf needs arrows from earlier objects");
      into.push_back(a);
    }
    // Every consistent choice of restrictions for one new element.
    std::vector<std::vector<int>> choices;
    std::vector<int> pick(into.size(), 0);
    bool empty_factor = false;
    for (ArrowId a : into) empty_factor |= labels[c.source(a)].empty();
    if (!empty_factor) {
      while (true) {
        bool ok = true;
        for (std::size_t i = 0; i < into.size() && ok; ++i)
          for (ArrowId b : members(c.arrows_into(c.source(into[i])))) {
            ArrowId ab = c.compose(into[i], b);
            if (c.is_identity(b)) continue;
            std::size_t k = 0;
            while (k < into.size() && into[k] != ab) ++k;
            if (k == into.size()) throw std::invalid_argument("random_presheaf needs a poset-like category");
            if (restr[b][pick[i]] != pick[k]) {
              ok = false;
              break;
            }
          }
        if (ok) choices.push_back(pick);
        std::size_t i = 0;
        for (; i < into.size(); ++i) {
          if (++pick[i] < static_cast<int>(labels[c.source(into[i])].size())) break;
          pick[i] = 0;
        }
        if (i == into.size()) break;
      }
    }
    const int size = choices.empty() ? 0 : size_dist(rng);
    for (int s = 0; s < size; ++s) {
      labels[u].push_back("s" + std::to_string(s));
      const auto& ch = choices[std::uniform_int_distribution<std::size_t>(0, choices.size() - 1)(rng)];
      for (std::size_t i = 0; i < into.size(); ++i) restr[into[i]].push_back(ch[i]);
      restr[c.identity(u)].push_back(s);
    }
  }
  return make_presheaf(cp, std::move(labels), std::move(restr));
}

PresheafPtr random_sheaf(const Site& site, std::mt19937& rng, int max_size) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    PresheafPtr a = sheafify(site, random_presheaf(site.category, rng, max_size)).sheaf;
    bool small = true;
    for (ObjectId u = 0; u < site.cat().object_count(); ++u) small &= a->size(u) <= max_size;
    if (small) return a;
  }
  throw std::runtime_error("random_sheaf: no small sheaf found");
}

std::optional<NatTrans> random_nat_trans(const PresheafPtr& f, const PresheafPtr& g, std::mt19937& rng) {
  auto all = all_nat_trans(f, g, 4096);
  if (all.empty()) return std::nullopt;
  return all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
}

PresheafPtr constant_presheaf(const CategoryPtr& c, int n) {
  std::vector<std::vector<std::string>> labels(c->object_count());
  for (auto& l : labels)
    for (int i = 0; i < n; ++i) l.push_back("c" + std::to_string(i));
  std::vector<std::vector<int>> restr(c->arrow_count());
  for (auto& r : restr)
    for (int i = 0; i < n; ++i) r.push_back(i);
  return make_presheaf(c, std::move(labels), std::move(restr));
}

PresheafPtr finite_set(const CategoryPtr& c, int n) { return constant_presheaf(c, n); }

GluingData pc_gluing(const GeometricContext& ctx) {
  ObjectId l = obj(ctx, "L");
  ArrowId ix = arrow(ctx, "i_X_L"), iy = arrow(ctx, "i_Y_L");
  GluingData d;
  d.charts = {l, l};
  Subpresheaf cross = overlap_from_pairs(ctx, l, l, {{ix, ix}, {iy, iy}});
  d.overlaps = {{diagonal_overlap(ctx, l), cross}, {cross, diagonal_overlap(ctx, l)}};
  return d;
}

std::string fixture_path(const std::string& file) { return std::string(GEOCTX_FIXTURE_DIR) + "/" + file; }

std::string fixture_text(const std::string& file) {
  std::ifstream in(fixture_path(file), std::ios::binary);
  if (!in) throw std::runtime_error("cannot read fixture " + file);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> fixture_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(GEOCTX_FIXTURE_DIR))
    if (e.path().extension() == ".geo") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace geoctx::testing
