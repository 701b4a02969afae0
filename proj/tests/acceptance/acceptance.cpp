// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "geoctx/dsl.hpp"
#include "golden.hpp"
#include "oracles.hpp"

using namespace geoctx;
using namespace geoctx::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  std::vector<std::string> notes;  // printed indented under the line

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

// ---------------------------------------------------------------------------
// AC1 mutations

struct Mutant {
  Site site;
  ArrowClass P;
};

std::string pattern(const ContextReport& r) {
  std::string key;
  for (std::size_t i = 0; i < r.checks.size(); ++i) key += r.checks[i].passed() ? '.' : char('1' + i);
  return key;
}

Mutant drop_covers(const GeometricContext& ctx, const std::string& object) {
  Pretopology cov = *ctx.site.cov;
  cov.families[*ctx.cat().find_object(object)].clear();
  return {make_site(ctx.category(), cov), ctx.P};
}

Mutant remove_from_P(const GeometricContext& ctx, const std::vector<std::string>& arrows) {
  ArrowClass p = ctx.P;
  for (const auto& a : arrows) p &= ~arrow_bit(*ctx.cat().find_arrow(a));
  return {ctx.site, p};
}

// Full subcategory without `object`. Covering families lose the arrows that
// touch it; P keeps the surviving arrows.
Mutant delete_object(const GeometricContext& ctx, const std::string& object) {
  const FiniteCategory& c = ctx.cat();
  RawCategory raw = c.to_raw(), out;
  for (const auto& o : raw.objects)
    if (o != object) out.objects.push_back(o);
  for (const auto& a : raw.arrows)
    if (a.source != object && a.target != object) out.arrows.push_back(a);
  for (const auto& [o, a] : raw.identities)
    if (o != object) out.identities[o] = a;
  auto kept = [&](const std::string& n) {
    for (const auto& a : out.arrows)
      if (a.name == n) return true;
    return false;
  };
  for (const auto& k : raw.composites)
    if (kept(k.outer) && kept(k.inner)) out.composites.push_back(k);
  CategoryPtr nc = share(FiniteCategory::validate(out));
  auto translate = [&](ArrowSet s) {
    ArrowSet t = 0;
    for (ArrowId a : members(s))
      if (kept(c.arrow_name(a))) t |= arrow_bit(*nc->find_arrow(c.arrow_name(a)));
    return t;
  };
  Pretopology cov;
  cov.families.resize(nc->object_count());
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    if (c.object_name(u) == object) continue;
    for (ArrowSet f : ctx.site.cov->families[u]) cov.families[*nc->find_object(c.object_name(u))].push_back(translate(f));
  }
  return {make_site(nc, cov), translate(ctx.P)};
}

Outcome ac1() {
  Outcome out;
  GeometricContext pt = pt_context();
  GeometricContext point = context_from_finite_space(point_space());
  GeometricContext sierp = sierp_context();
  GeometricContext in = int_context();
  const std::vector<std::pair<std::string, const GeometricContext*>> fixtures{
      {"PT", &pt}, {"POINT", &point}, {"SIERP", &sierp}, {"INT", &in}};
  for (const auto& [name, ctx] : fixtures)
    out.require(validate_geometric_context(ctx->site, ctx->P).passed(), name + " fails a check unmutated");

  struct Case {
    std::string label;
    std::function<Mutant()> make;
    std::size_t target;
  };
  const std::vector<Case> catalogue{
      {"PT delete pt", [&] { return delete_object(pt, "pt"); }, 0},
      {"PT drop covers of pt", [&] { return drop_covers(pt, "pt"); }, 5},
      {"POINT remove i_E_P from P", [&] { return remove_from_P(point, {"i_E_P"}); }, 3},
      {"POINT drop covers of P", [&] { return drop_covers(point, "P"); }, 5},
      {"SIERP remove i_E_S, i_O_S from P", [&] { return remove_from_P(sierp, {"i_E_S", "i_O_S"}); }, 3},
      {"SIERP drop covers of S", [&] { return drop_covers(sierp, "S"); }, 5},
      {"INT delete X", [&] { return delete_object(in, "X"); }, 1},
      {"INT remove i_X_L from P", [&] { return remove_from_P(in, {"i_X_L"}); }, 2},
      {"INT remove i_XY_L from P", [&] { return remove_from_P(in, {"i_XY_L"}); }, 3},
      {"INT remove i_X_XY, i_X_L from P", [&] { return remove_from_P(in, {"i_X_XY", "i_X_L"}); }, 4},
      {"INT drop covers of L", [&] { return drop_covers(in, "L"); }, 5},
  };
  std::set<std::size_t> targeted;
  for (const auto& k : catalogue) {
    Mutant m = k.make();
    ContextReport r = validate_geometric_context(m.site, m.P);
    bool exact = true;
    for (std::size_t i = 0; i < 6; ++i) exact &= r.checks[i].passed() == (i != k.target);
    const auto& w = r.checks[k.target].witness;
    bool witnessed = w && !w->fields.empty();
    out.require(exact && witnessed, k.label + " flips " + pattern(r) + ", expected only " + kContextChecks[k.target]);
    std::string line = k.label + " -> " + kContextChecks[k.target] + " [" + pattern(r) + "]";
    if (w) {
      line += " witness:";
      for (const auto& [key, v] : w->fields) line += " " + key + "=" + v;
    }
    out.notes.push_back(line);
    targeted.insert(k.target);
  }
  out.require(targeted.size() == 6, "not every check is targeted");

  // Census of every single-step mutation, for the record.
  for (const auto& [name, ctx] : fixtures) {
    const FiniteCategory& c = ctx->cat();
    std::map<std::string, std::vector<std::string>> by_pattern;
    for (ObjectId u = 0; u < c.object_count(); ++u) {
      by_pattern[pattern(validate_geometric_context(drop_covers(*ctx, c.object_name(u)).site, ctx->P))].push_back(
          "drop " + c.object_name(u));
      Mutant d = delete_object(*ctx, c.object_name(u));
      by_pattern[pattern(validate_geometric_context(d.site, d.P))].push_back("delete " + c.object_name(u));
    }
    for (ArrowId a : members(ctx->P)) {
      if (c.source(a) == c.target(a)) continue;
      Mutant m = remove_from_P(*ctx, {c.arrow_name(a)});
      by_pattern[pattern(validate_geometric_context(m.site, m.P))].push_back("-" + c.arrow_name(a));
    }
    for (const auto& [p, list] : by_pattern) {
      std::string line = "census " + name + " [" + p + "]:";
      for (const auto& s : list) line += " " + s;
      out.notes.push_back(line);
    }
  }
  out.detail = out.ok ? "4 contexts pass; " + std::to_string(catalogue.size()) +
                            " targeted mutations each flip exactly their check (GC1-GC6 all covered)"
                      : out.detail;
  return out;
}

// ---------------------------------------------------------------------------
// AC2 sheafification

Outcome ac2() {
  Outcome out;
  std::mt19937 rng(2024);
  int cases = 0;
  for (const GeometricContext& ctx : {int_context(), sierp_context()}) {
    for (int i = 0; i < 30; ++i) {
      PresheafPtr f = random_presheaf(ctx.category(), rng, 4);
      Sheafification a = sheafify(ctx.site, f);
      out.require(is_sheaf(ctx.site, *a.sheaf).passed(), "a(F) is not a sheaf");
      out.require(brute_is_sheaf(ctx.site, a.sheaf), "a(F) fails the brute sheaf oracle");
      out.require(isomorphic(sheafify(ctx.site, a.sheaf).sheaf, a.sheaf), "a(a(F)) not isomorphic to a(F)");

      PresheafPtr g = random_sheaf(ctx.site, rng, 3);
      std::vector<NatTrans> from_a = brute_nat_trans(a.sheaf, g);
      std::vector<NatTrans> from_f = brute_nat_trans(f, g);
      std::set<std::vector<std::vector<int>>> images;
      for (const NatTrans& psi : from_a) images.insert(compose(psi, a.unit).components);
      out.require(from_a.size() == from_f.size() && images.size() == from_a.size(),
                  "restriction along the unit is not a bijection");

      PresheafPtr f2 = random_presheaf(ctx.category(), rng, 4);
      PresheafPtr lhs = sheafify(ctx.site, product(f, f2).apex).sheaf;
      PresheafPtr rhs = product(a.sheaf, sheafify(ctx.site, f2).sheaf).apex;
      out.require(isomorphic(lhs, rhs), "a(F x G) not isomorphic to a(F) x a(G)");
      ++cases;
    }
  }
  out.require(cases >= 50, "fewer than 50 presheaves");
  if (out.ok)
    out.detail = std::to_string(cases) +
                 " random presheaves on INT and SIERP: sheaf, idempotent, adjunction bijective, products preserved";
  return out;
}

// ---------------------------------------------------------------------------
// AC3 epimorphisms on the point

Outcome ac3() {
  Outcome out;
  GeometricContext ctx = pt_context();
  std::vector<PresheafPtr> sets;
  for (int n = 0; n <= 3; ++n) sets.push_back(finite_set(ctx.category(), n));
  int morphisms = 0, agree = 0;
  for (const auto& a : sets)
    for (const auto& b : sets)
      for (const NatTrans& f : all_nat_trans(a, b)) {
        ++morphisms;
        agree += is_epimorphism(ctx.site, f).passed() == brute_right_cancellable(f, sets);
      }
  out.require(agree == morphisms, std::to_string(morphisms - agree) + " disagreements");
  out.detail = std::to_string(agree) + "/" + std::to_string(morphisms) +
               " morphisms between sets of size <= 3 agree with right cancellation";
  return out;
}

// ---------------------------------------------------------------------------
// AC4 representable open immersions

Outcome ac4() {
  Outcome out;
  int arrows = 0, agree = 0;
  for (const GeometricContext& ctx : {int_context(), sierp_context()}) {
    const FiniteCategory& c = ctx.cat();
    for (ArrowId a = 0; a < c.arrow_count(); ++a) {
      NatTrans h = yoneda_arrow(yoneda(ctx.category(), c.source(a)), yoneda(ctx.category(), c.target(a)), a);
      ++arrows;
      agree += is_open_immersion(ctx, h).passed() == (ctx.in_P(a) && is_mono_in_C(c, a));
    }
  }
  out.require(agree == arrows, std::to_string(arrows - agree) + " disagreements");
  out.detail = std::to_string(agree) + "/" + std::to_string(arrows) + " arrows of INT and SIERP agree";
  return out;
}

// ---------------------------------------------------------------------------
// AC5 open immersion = mono + P-morphism

std::vector<PresheafPtr> sheaf_pool(const GeometricContext& ctx, std::mt19937& rng, int randoms) {
  const FiniteCategory& c = ctx.cat();
  std::vector<PresheafPtr> pool;
  for (ObjectId u = 0; u < c.object_count(); ++u) pool.push_back(yoneda(ctx.category(), u));
  if (c.object_count() > 1) {
    ObjectId top = c.object_count() - 1;
    pool.push_back(sheaf_coproduct(ctx.site, {yoneda(ctx.category(), 1), yoneda(ctx.category(), top)}).sheaf);
  }
  for (int i = 0; i < randoms; ++i) pool.push_back(random_sheaf(ctx.site, rng, 2));
  return pool;
}

Outcome ac5() {
  Outcome out;
  std::mt19937 rng(55);
  int instances = 0, agree = 0, inconclusive = 0, open = 0;
  auto run = [&](const GeometricContext& ctx, const std::vector<PresheafPtr>& pool, std::size_t per_pair) {
    for (const auto& a : pool)
      for (const auto& b : pool)
        for (const NatTrans& f : all_nat_trans(a, b, per_pair)) {
          Verdict pm = is_P_morphism_of_sheaves(ctx, ctx.P, f);
          if (pm.status == Status::inconclusive) {
            ++inconclusive;
            continue;
          }
          ++instances;
          bool lhs = is_open_immersion(ctx, f).passed();
          open += lhs;
          agree += lhs == (is_monomorphism(ctx.site, f).passed() && pm.passed());
        }
  };
  GeometricContext in = int_context();
  std::vector<PresheafPtr> int_pool = sheaf_pool(in, rng, 6);
  int_pool.push_back(glue(in, pc_gluing(in)).sheaf);
  run(in, int_pool, 8);
  GeometricContext sierp = sierp_context();
  run(sierp, sheaf_pool(sierp, rng, 6), 16);
  GeometricContext pt = pt_context();
  std::vector<PresheafPtr> sets;
  for (int n = 0; n <= 3; ++n) sets.push_back(finite_set(pt.category(), n));
  run(pt, sets, 64);
  out.require(inconclusive == 0, std::to_string(inconclusive) + " inconclusive P-morphism searches");
  out.require(instances >= 200, "only " + std::to_string(instances) + " instances");
  out.require(agree == instances, std::to_string(instances - agree) + " disagreements");
  std::string reason = out.detail;
  out.detail = std::to_string(agree) + "/" + std::to_string(instances) + " sheaf morphisms on INT, SIERP and PT agree (" +
               std::to_string(open) + " open immersions)" +
               (out.ok ? "" : "; " + reason);
  return out;
}

// ---------------------------------------------------------------------------
// AC6 image routes

Outcome ac6() {
  Outcome out;
  std::mt19937 rng(66);
  int morphisms = 0, monos = 0, epis = 0;
  for (const GeometricContext& ctx : {int_context(), sierp_context()}) {
    int made = 0;
    while (made < 60) {
      PresheafPtr a = random_sheaf(ctx.site, rng, 3), b = random_sheaf(ctx.site, rng, 3);
      std::optional<NatTrans> f = random_nat_trans(a, b, rng);
      if (!f) continue;
      ++made;
      ImageFactorization p = image_via_pushout(ctx.site, *f);
      ImageFactorization q = image_via_pointwise(ctx.site, *f);
      out.require(p.subobject == q.subobject, "routes give different subobjects");
      out.require(isomorphic(p.image, q.image), "routes give non-isomorphic images");
      out.require(same_components(compose(p.mono, p.epi), *f) && same_components(compose(q.mono, q.epi), *f),
                  "factorization does not compose to f");
      out.require(is_epimorphism(ctx.site, p.epi).passed() && is_monomorphism(ctx.site, p.mono).passed(),
                  "factors are not epi then mono");
      if (is_monomorphism(ctx.site, *f).passed()) {
        ++monos;
        out.require(is_pointwise_bijective(p.epi) && is_pointwise_bijective(q.epi), "mono f: epi part is not an iso");
      }
      if (is_epimorphism(ctx.site, *f).passed()) {
        ++epis;
        out.require(p.subobject == full_subpresheaf(f->target), "epi f: image is not everything");
      }
    }
    morphisms += made;
  }
  out.require(monos > 0 && epis > 0, "degenerate clauses never exercised");
  if (out.ok)
    out.detail = std::to_string(morphisms) + " random morphisms agree (" + std::to_string(monos) + " mono, " +
                 std::to_string(epis) + " epi cases exact)";
  return out;
}

// ---------------------------------------------------------------------------
// AC7 gluing

Outcome ac7() {
  Outcome out;
  GeometricContext ctx = int_context();
  const FiniteCategory& c = ctx.cat();
  GluedScheme x = glue(ctx, pc_gluing(ctx));
  out.require(is_elementary_scheme(ctx, x.sheaf).passed(), "PC is not an elementary scheme");
  for (ObjectId u = 0; u < c.object_count(); ++u)
    out.require(!isomorphic(x.sheaf, yoneda(ctx.category(), u)), "PC is isomorphic to h_" + c.object_name(u));
  GluingData back = decompose(ctx, x.atlas);
  out.require(validate_gluing_data(ctx, back).passed(), "decomposed data is invalid");
  out.require(isomorphic(glue(ctx, back).sheaf, x.sheaf), "glue(decompose(PC)) is not PC");

  int disjoint = 0;
  for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{{"X", "Y"}, {"L", "L"}, {"X", "XY"}}) {
    ObjectId ua = obj(ctx, a), ub = obj(ctx, b);
    GluingData d;
    d.charts = {ua, ub};
    // The empty family covers E, so the smallest overlap is the closure of nothing.
    d.overlaps = {{diagonal_overlap(ctx, ua), overlap_from_pairs(ctx, ua, ub, {})},
                  {overlap_from_pairs(ctx, ub, ua, {}), diagonal_overlap(ctx, ub)}};
    PresheafPtr glued = glue(ctx, d).sheaf;
    PresheafPtr sum = sheaf_coproduct(ctx.site, {yoneda(ctx.category(), ua), yoneda(ctx.category(), ub)}).sheaf;
    out.require(isomorphic(glued, sum), "empty overlap on " + a + ", " + b + " is not the coproduct");
    ++disjoint;
  }
  if (out.ok)
    out.detail = "PC is a 2-chart scheme, not representable, round-trips; " + std::to_string(disjoint) +
                 " empty-overlap gluings equal the coproduct";
  return out;
}

// ---------------------------------------------------------------------------
// AC8 closure properties

Outcome ac8() {
  Outcome out;
  int products = 0, coproducts = 0, fibred = 0, inclusions = 0;
  for (const GeometricContext& ctx : {int_context(), sierp_context(), pt_context()}) {
    const FiniteCategory& c = ctx.cat();
    std::vector<PresheafPtr> schemes;
    for (ObjectId u = 0; u < c.object_count(); ++u) schemes.push_back(yoneda(ctx.category(), u));
    if (c.object_count() == 5) schemes.push_back(glue(ctx, pc_gluing(ctx)).sheaf);
    for (std::size_t i = 0; i < schemes.size(); ++i)
      for (std::size_t j = i; j < schemes.size(); ++j) {
        LimitCone p = sheaf_product(ctx.site, schemes[i], schemes[j]);
        out.require(is_elementary_scheme(ctx, p.apex).passed(), "product is not a scheme");
        ++products;
        SheafColimit s = sheaf_coproduct(ctx.site, {schemes[i], schemes[j]});
        out.require(is_elementary_scheme(ctx, s.sheaf).passed(), "coproduct is not a scheme");
        ++coproducts;
        for (const NatTrans& leg : s.legs) {
          out.require(is_open_immersion(ctx, leg).passed(), "coproduct inclusion is not an open immersion");
          ++inclusions;
        }
      }
    // The empty coproduct: its inclusion into anything is an open immersion.
    SheafColimit none = sheaf_coproduct(ctx.site, {});
    for (const auto& x : schemes) {
      out.require(is_open_immersion(ctx, mediate(ctx.site, none, x, {})).passed(), "empty inclusion is not open");
      ++inclusions;
    }
    require_pullbacks(c);
    for (const auto& z : schemes)
      for (const auto& x : schemes)
        for (const auto& y : schemes) {
          std::vector<NatTrans> fs = all_nat_trans(x, z, 2), gs = all_nat_trans(y, z, 2);
          for (const NatTrans& f : fs)
            for (const NatTrans& g : gs) {
              FibredProduct fp = scheme_fibred_product(ctx, f, g);
              out.require(fp.atlas && verify_atlas(ctx, *fp.atlas).passed(), "fibred product atlas is invalid");
              out.require(is_elementary_scheme(ctx, fp.cone.apex).passed(), "fibred product is not a scheme");
              ++fibred;
            }
        }
  }
  if (out.ok)
    out.detail = std::to_string(products) + " products, " + std::to_string(coproducts) + " coproducts, " +
                 std::to_string(fibred) + " fibred products are schemes; " + std::to_string(inclusions) +
                 " coproduct inclusions are open immersions";
  return out;
}

// ---------------------------------------------------------------------------
// AC9 CLI determinism

Outcome ac9() {
  Outcome out;
  int identical = 0;
  for (const auto& g : golden_cases()) {
    CliRun first = run_cli(g.args), second = run_cli(g.args);
    bool same = first.out == second.out && first.out == read_file(golden_path(g.name)) && first.exit_code == g.exit_code;
    out.require(same, "report differs for '" + g.args + "'");
    identical += same;
  }
  int round_trips = 0;
  for (const auto& file : fixture_files()) {
    dsl::Document doc = dsl::parse(fixture_text(file));
    dsl::Document again = dsl::parse(dsl::print(doc));
    out.require(again == doc, "round-trip changes " + file);
    round_trips += again == doc;
  }
  if (out.ok)
    out.detail = std::to_string(identical) + " golden reports byte-identical across runs; " +
                 std::to_string(round_trips) + " corpus files round-trip";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9},
  };
  bool all = true;
  for (const auto& [name, check] : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("threw: ") + e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all &= o.ok;
    std::printf("%s %s  %s (%.2fs)\n", name.c_str(), o.ok ? "PASS" : "FAIL", o.detail.c_str(), s);
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
